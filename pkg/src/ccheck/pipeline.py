"""One full document pass: splice, lex, preprocess, parse, annotate, lower.

Shared by the CLI and the check server.  The pass never throws on bad input;
everything lands in diagnostics, and reports are assembled deterministically
so identical inputs produce identical streams (modulo serial offsets).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import annot as AN
from . import clean as CL
from . import lower as LO
from .env import Env
from .lexer import LexResult, tokenize
from .parser import CParser, ParseResult, get_parser
from .preproc import Preprocessor, preprocess
from .reports import (Diagnostic, Markup, Report, diagnostic_report, fresh_serial,
                      make_report)
from .source import SourceFile


@dataclass
class PassOptions:
    include_paths: list[str] = field(default_factory=list)
    assume_cpp: bool = False
    default_mode: str = "strict"  # annotation error handling
    recursive_env: str = "inherit"  # env for nested C annotations
    env0: Env | None = None
    named_hooks: dict[str, Callable] = field(default_factory=dict)
    configure_context: Callable[[AN.Context], AN.Context] | None = None
    parser: CParser | None = None
    stage_hook: Callable[[str], None] | None = None  # test seam (server cancellation)


class PassResult:
    def __init__(self, src: SourceFile):
        self.src = src
        self.lex: LexResult | None = None
        self.pp: Preprocessor | None = None
        self.tokens = []
        self.parse: ParseResult | None = None
        self.ctx: AN.Context | None = None
        self.core: LO.CoreProgram | None = None
        self.annotations: list[AN.Annotation] = []
        self.sources: dict[str, SourceFile] = {}
        self.diagnostics: list[Diagnostic] = []
        self.lower_diags: list[Diagnostic] = []
        self._reports: list[Report] | None = None

    @property
    def error_count(self) -> int:
        return sum(1 for d in self.diagnostics if d.severity == "error")

    def clean_program(self) -> CL.CleanProgram:
        constants = self.pp.table.numeric_constants() if self.pp else {}
        return CL.translate(self.core, constants)

    def reports(self) -> list[Report]:
        if self._reports is None:
            self._reports = assemble_reports(self)
        return self._reports


def make_resolver(include_paths: list[str], cache: dict[str, SourceFile]):
    def resolver(name: str) -> SourceFile | None:
        if name in cache:
            return cache[name]
        for base in include_paths:
            p = Path(base) / name
            if p.is_file():
                sf = SourceFile(name, p.read_text(encoding="utf-8"), path=str(p))
                cache[name] = sf
                return sf
        return None

    return resolver


def run_pass(src: SourceFile, opts: PassOptions | None = None,
             stop_after: str = "") -> PassResult:
    """Run the pipeline; `stop_after` in {"lex", "parse", ""} trims later stages."""
    opts = opts or PassOptions()
    result = PassResult(src)
    result.sources[src.id] = src
    tick = opts.stage_hook or (lambda stage: None)

    result.lex = tokenize(src.logical, doc=src.id, lines=src.logical_lines)
    result.diagnostics.extend(result.lex.diagnostics)
    tick("lex")
    if stop_after == "lex":
        result.tokens = result.lex.tokens
        return result

    if opts.assume_cpp:
        result.tokens = result.lex.tokens
    else:
        resolver = make_resolver(opts.include_paths, result.sources)
        result.tokens, result.pp = preprocess(src, result.lex.tokens,
                                              result.lex.trivia, resolver)
        result.diagnostics.extend(result.pp.diagnostics)
    tick("preprocess")

    parser = opts.parser or get_parser()
    result.parse = parser.parse(result.tokens, result.lex.trivia, env0=opts.env0,
                                doc=src.id, lines=src.logical_lines)
    result.diagnostics.extend(result.parse.diagnostics)
    tick("parse")
    if stop_after == "parse":
        return result

    ctx = AN.make_context(src.id, src.logical_lines,
                          {"recursive_env": opts.recursive_env})
    ctx.named_hooks.update(opts.named_hooks)
    if opts.configure_context is not None:
        ctx = opts.configure_context(ctx)
    anns, ann_diags, failed = AN.collect_annotations(
        result.lex.trivia, doc=src.id, default_mode=opts.default_mode,
        lines=src.logical_lines)
    ctx.diagnostics.extend(ann_diags)
    result.annotations = anns
    if not failed:
        ctx = AN.schedule_and_run(ctx, anns, result.parse.forest,
                                  result.parse.envs_by_event, result.tokens)
    result.ctx = ctx
    result.diagnostics.extend(ctx.diagnostics)
    tick("annotate")

    result.core, result.lower_diags = LO.lower(result.parse.ast, src.id,
                                               src.logical_lines)
    attach_diags = LO.attach_specs(result.core, ctx.spec_attachments, src.id,
                                   src.logical_lines)
    result.diagnostics.extend(result.lower_diags)
    result.diagnostics.extend(attach_diags)
    tick("lower")
    return result


def assemble_reports(result: PassResult) -> list[Report]:
    """The full markup stream in physical coordinates, deterministic order."""
    out: list[Report] = []
    main = result.src

    def src_for(doc: str) -> SourceFile:
        return result.sources.get(doc, main)

    for t in result.tokens:
        if t.kind == "keyword":
            out.append(make_report(src_for(t.doc or main.id), "keyword", t.rng,
                                   {"name": t.name}))
    if result.pp is not None:
        for name, rng, doc in result.pp.expansions:
            out.append(make_report(src_for(doc or main.id), "macro_expansion", rng,
                                   {"macro": name}))
        for d in result.pp.define_events:
            out.append(make_report(src_for(d.doc or main.id), "entity_def", d.rng,
                                   {"name": d.name, "kind": "macro",
                                    "def_serial": str(fresh_serial()),
                                    "type_text": ""}))
    markups: list[Markup] = []
    if result.parse is not None:
        markups.extend(result.parse.markups)
    if result.ctx is not None:
        markups.extend(result.ctx.markups)
    for m in markups:
        out.append(make_report(src_for(m.doc or main.id), m.kind, m.rng, m.props))
    for d in result.diagnostics:
        out.append(diagnostic_report(src_for(d.doc or main.id), d))
    return out
