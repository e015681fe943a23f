"""Comment annotations: navigation expressions, command registry, scheduling.

An annotation payload is a sequence of items `<navigation> <keyword> <arg>`;
the navigation prefix (`+`* then (`@`|`&`)*) selects a focus in the SR
forest, starting from the last shift leaf before the comment.  Commands are
late-bound: the registry is part of the threaded Context, so a command
registered by an earlier handler is visible to every later one.

Bottom-up commands run in shift order of their focus (replayed from the
recorded event stream, with the environment snapshot taken at the focus
node's creation); top-down commands run afterwards in forest preorder.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Callable

from . import c_ast as A
from .env import Env
from .lexer import Trivia, tokenize
from .reports import Diagnostic, Markup
from .source import LineIndex, Pos, Range


def _mkpos(lines: LineIndex | None, off: int) -> Pos:
    """Position via the line index when we have one; plain offset otherwise."""
    if lines is not None and 0 <= off <= len(lines.text):
        return lines.pos(off)
    return Pos(off, 1, off + 1)

CARTOUCHE_OPEN = "⟨"
CARTOUCHE_CLOSE = "⟩"

_NAV_SHAPED = re.compile(r"[+@&]+$")
_NAV_VALID = re.compile(r"(\+*)([@&]*)$")
_KEYWORD = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*$")

SEL4_SPEC_KEYWORDS = (
    "FNSPEC", "INVARIANT", "INV", "MODIFIES", "AUXUPD", "GHOSTUPD",
    "SPEC", "END-SPEC", "CALLS", "OWNED_BY", "RELSPEC", "DONT_TRANSLATE",
)


@dataclass(frozen=True)
class NavExpr:
    plus_count: int
    ancestry: tuple[str, ...]  # elements: "at" | "amp"

    def __str__(self) -> str:
        return "+" * self.plus_count + "".join(
            "@" if a == "at" else "&" for a in self.ancestry)


@dataclass
class Annotation:
    rng: Range          # span of this item inside the payload
    nav: NavExpr
    keyword: str
    arg: str
    mode: str           # strict | permissive (effective at this source position)
    anchor_offset: int  # logical offset of the enclosing comment
    arg_start: int      # logical offset where the arg text begins
    doc: str = ""


@dataclass
class AnnotationCmd:
    keyword: str
    timing: str  # bottom_up | top_down
    handler: Callable  # (focus, env, arg, ctx) -> ctx


@dataclass
class SpecAttachment:
    keyword: str
    payload: str
    focus: object  # forest node


@dataclass
class PlanEntry:
    phase: str  # bottom_up | top_down
    keyword: str
    rule: str   # production display or "token"
    start: int
    end: int


class Context:
    """The state threaded through command execution (commands are Context -> Context)."""

    def __init__(self, doc: str = "", lines: LineIndex | None = None,
                 options: dict | None = None):
        self.registry: dict[str, AnnotationCmd] = {}
        self.definitions: dict[str, object] = {}
        self.markups: list[Markup] = []
        self.diagnostics: list[Diagnostic] = []
        self.mode = "strict"
        self.named_hooks: dict[str, Callable] = {}
        self.spec_attachments: list[SpecAttachment] = []
        self.plan: list[PlanEntry] = []
        self.options = options or {}
        self.doc = doc
        self.lines = lines or LineIndex("")

    def rng(self, start: int, end: int) -> Range:
        return Range(_mkpos(self.lines, start), _mkpos(self.lines, end))


class NavError(Exception):
    pass


class CommandFailure(Exception):
    pass


# -- payload parsing -------------------------------------------------------------

def _scan_words(payload: str):
    """Yield (text, offset) with cartouche groups kept whole (they nest)."""
    out = []
    i = 0
    n = len(payload)
    while i < n:
        c = payload[i]
        if c.isspace():
            i += 1
            continue
        start = i
        if c == CARTOUCHE_OPEN:
            depth = 0
            while i < n:
                if payload[i] == CARTOUCHE_OPEN:
                    depth += 1
                elif payload[i] == CARTOUCHE_CLOSE:
                    depth -= 1
                    if depth == 0:
                        i += 1
                        break
                i += 1
            else:
                raise NavError(f"unterminated {CARTOUCHE_OPEN}...{CARTOUCHE_CLOSE} bracket")
            out.append((payload[start:i], start))
            continue
        while i < n and not payload[i].isspace() and payload[i] != CARTOUCHE_OPEN:
            i += 1
        out.append((payload[start:i], start))
    return out


def parse_nav(word: str) -> NavExpr | None:
    """NavExpr for a well-formed navigation word, None when malformed."""
    m = _NAV_VALID.match(word)
    if m is None or m.group(0) != word:
        return None
    ancestry = tuple("at" if ch == "@" else "amp" for ch in m.group(2))
    return NavExpr(len(m.group(1)), ancestry)


def parse_annotation(payload: str, base_offset: int = 0, mode: str = "strict",
                     doc: str = "", anchor_offset: int = 0,
                     lines: LineIndex | None = None,
                     ) -> tuple[list[Annotation], list[Diagnostic]]:
    """Split a payload into (nav, keyword, arg) items.

    An item's arg extends to the next top-level navigation word or the end of
    the payload; malformed items produce a diagnostic and, in permissive mode,
    the remainder of the payload is skipped.  In strict mode the caller treats
    the diagnostic as fatal for the whole document's annotation pass.
    """
    def rng(a: int, b: int) -> Range:
        return Range(_mkpos(lines, base_offset + a), _mkpos(lines, base_offset + b))

    diags: list[Diagnostic] = []
    try:
        words = _scan_words(payload)
    except NavError as e:
        diags.append(Diagnostic("error", f"malformed annotation: {e}", doc,
                                rng(0, len(payload)), "annotation-syntax"))
        return [], diags
    items: list[Annotation] = []
    i = 0
    while i < len(words):
        text, off = words[i]
        item_start = off
        nav = NavExpr(0, ())
        if _NAV_SHAPED.match(text):
            parsed = parse_nav(text)
            if parsed is None:
                diags.append(Diagnostic(
                    "error",
                    f"malformed navigation prefix {text!r} (pluses must precede @/&)",
                    doc, rng(off, off + len(text)), "annotation-syntax"))
                return items, diags
            nav = parsed
            i += 1
        if i >= len(words):
            diags.append(Diagnostic(
                "error", "navigation expression without a command keyword", doc,
                rng(item_start, len(payload)), "annotation-syntax"))
            return items, diags
        kw_text, kw_off = words[i]
        if not _KEYWORD.match(kw_text):
            diags.append(Diagnostic(
                "error", f"expected an annotation command keyword, got {kw_text!r}",
                doc, rng(kw_off, kw_off + len(kw_text)), "annotation-syntax"))
            return items, diags
        i += 1
        arg_words = []
        while i < len(words) and not _NAV_SHAPED.match(words[i][0]):
            arg_words.append(words[i])
            i += 1
        if arg_words:
            arg_start_rel = arg_words[0][1]
            arg_end_rel = arg_words[-1][1] + len(arg_words[-1][0])
        else:
            arg_start_rel = arg_end_rel = kw_off + len(kw_text)
        item = Annotation(
            rng=rng(item_start, arg_end_rel),
            nav=nav,
            keyword=kw_text,
            arg=payload[arg_start_rel:arg_end_rel],
            mode=mode,
            anchor_offset=anchor_offset,
            arg_start=base_offset + arg_start_rel,
            doc=doc,
        )
        items.append(item)
    return items, diags


def collect_annotations(trivia: list[Trivia], doc: str = "",
                        default_mode: str = "strict",
                        lines: LineIndex | None = None,
                        ) -> tuple[list[Annotation], list[Diagnostic], bool]:
    """All annotation items of a document in source order.

    Returns (items, diagnostics, pass_failed): a malformed item under strict
    mode fails the whole document's annotation pass.
    """
    mode = default_mode
    items: list[Annotation] = []
    diags: list[Diagnostic] = []
    for t in sorted(trivia, key=lambda t: t.rng.start.offset):
        if t.kind != "annotation" or t.inside_directive:
            continue
        if t.global_pragma == "permissive":
            mode = "permissive"
        elif t.global_pragma == "strict":
            mode = "strict"
        got, ds = parse_annotation(t.payload, base_offset=t.payload_start, mode=mode,
                                   doc=doc, anchor_offset=t.rng.start.offset,
                                   lines=lines or t.lines)
        diags.extend(ds)
        if ds and mode == "strict":
            return [], diags, True
        items.extend(got)
    return items, diags, False


# -- navigation resolution ---------------------------------------------------------

def resolve(nav: NavExpr, forest, annotation_pos: int, tokens=None):
    """The focus node for a navigation expression.

    Starts at the last shift leaf strictly before the annotation, advances
    `+` times to the next leaf, then folds ancestry: `@` to the parent reduce,
    `&` to the nearest monadic-rule ancestor.
    """
    leaves = forest.leaves
    if not leaves:
        raise NavError("focus out of range: no tokens before annotation")
    starts = forest.leaf_starts(tokens)
    idx = bisect_left(starts, annotation_pos) - 1
    if idx < 0:
        raise NavError("focus out of range: annotation precedes all tokens")
    idx += nav.plus_count
    if idx >= len(leaves):
        raise NavError("focus out of range: token navigation past the last shift")
    node = leaves[idx]
    for step in nav.ancestry:
        node = node.parent
        if step == "amp":
            while node is not None and not forest.is_monadic(node.rule_id):
                node = node.parent
        if node is None:
            raise NavError("focus out of range: navigation above the root")
    return node


# -- registry and scheduling ---------------------------------------------------------

def register_command(ctx: Context, keyword: str, timing: str,
                     handler: Callable) -> Context:
    """Late-binding registration; re-registration replaces with a warning."""
    assert keyword, "keyword must be nonempty"
    assert timing in ("bottom_up", "top_down"), timing
    if keyword in ctx.registry:
        ctx.diagnostics.append(Diagnostic(
            "warning", f"annotation command '{keyword}' re-registered", ctx.doc,
            None, "command-redefined"))
    ctx.registry[keyword] = AnnotationCmd(keyword, timing, handler)
    return ctx


def schedule_and_run(ctx: Context, annotations: list[Annotation], forest,
                     env_snapshots: list[Env], tokens) -> Context:
    """Resolve foci and execute the two-phase plan over the Context."""
    resolved = []
    for order, a in enumerate(annotations):
        try:
            node = resolve(a.nav, forest, a.anchor_offset, tokens)
        except NavError as e:
            ctx.diagnostics.append(Diagnostic(
                "error" if a.mode == "strict" else "warning",
                f"annotation '{a.keyword}': {e}", a.doc or ctx.doc, a.rng,
                "focus-out-of-range"))
            if a.mode == "strict":
                return ctx
            continue
        rule = (forest.rule_name(node.rule_id) if node.kind == "reduce" else "token")
        ctx.markups.append(Markup(
            "annotation_focus", a.doc or ctx.doc, ctx.rng(node.start, node.end),
            {"keyword": a.keyword, "nav": str(a.nav), "rule": rule}))
        resolved.append((order, a, node))

    def fail(a: Annotation, message: str, code: str) -> bool:
        """Record a handler/lookup failure; True aborts the remaining plan."""
        strict = a.mode == "strict"
        ctx.diagnostics.append(Diagnostic(
            "error" if strict else "warning", message, a.doc or ctx.doc, a.rng, code))
        return strict

    deferred = []
    for order, a, node in sorted(resolved, key=lambda t: (t[2].event_index, t[0])):
        ctx.mode = a.mode
        cmd = ctx.registry.get(a.keyword)
        if cmd is None:
            if fail(a, f"unknown annotation command '{a.keyword}'", "unknown-command"):
                return ctx
            continue
        if cmd.timing == "top_down":
            deferred.append((order, a, node))
            continue
        ctx.plan.append(PlanEntry("bottom_up", a.keyword,
                                  forest.rule_name(node.rule_id)
                                  if node.kind == "reduce" else "token",
                                  node.start, node.end))
        try:
            ctx = cmd.handler(node, env_snapshots[node.event_index], a.arg, ctx)
        except CommandFailure as e:
            if fail(a, f"annotation '{a.keyword}' failed: {e}", "command-failed"):
                return ctx

    for order, a, node in sorted(deferred,
                                 key=lambda t: (forest.preorder_index(t[2]), t[0])):
        ctx.mode = a.mode
        cmd = ctx.registry.get(a.keyword)
        if cmd is None:
            if fail(a, f"unknown annotation command '{a.keyword}'", "unknown-command"):
                return ctx
            continue
        ctx.plan.append(PlanEntry("top_down", a.keyword,
                                  forest.rule_name(node.rule_id)
                                  if node.kind == "reduce" else "token",
                                  node.start, node.end))
        try:
            ctx = cmd.handler(node, env_snapshots[node.event_index], a.arg, ctx)
        except CommandFailure as e:
            if fail(a, f"annotation '{a.keyword}' failed: {e}", "command-failed"):
                return ctx
    return ctx


# -- built-in commands ----------------------------------------------------------------

def strip_cartouche(arg: str) -> str:
    s = arg.strip()
    if s.startswith(CARTOUCHE_OPEN) and s.endswith(CARTOUCHE_CLOSE):
        return s[1:-1]
    return s


def _cmd_highlight(focus, env, arg, ctx: Context) -> Context:
    ctx.markups.append(Markup("highlight", ctx.doc, ctx.rng(focus.start, focus.end), {}))
    return ctx


def _run_named_hook(focus, env, arg, ctx: Context) -> Context:
    name = arg.strip().split()[0] if arg.strip() else ""
    hook = ctx.named_hooks.get(name)
    if hook is None:
        raise CommandFailure(f"no hook named {name!r} is registered")
    return hook(focus, env, ctx) or ctx


def _cmd_spec_keyword(keyword: str):
    def handler(focus, env, arg, ctx: Context) -> Context:
        ctx.spec_attachments.append(SpecAttachment(keyword, strip_cartouche(arg), focus))
        return ctx

    return handler


def _cmd_recursive_c(focus, env, arg, ctx: Context) -> Context:
    """Parse the cartouche argument as C, in the snapshot env or a fresh one.

    Top-level bindings of the nested source are exported into the Context's
    definitions table; its markup merges into the main stream.
    """
    from .parser import get_parser  # deferred: annot is imported by the parser's callers

    s = arg.strip()
    if not (s.startswith(CARTOUCHE_OPEN) and s.endswith(CARTOUCHE_CLOSE)):
        raise CommandFailure(
            f"C expects a {CARTOUCHE_OPEN}code{CARTOUCHE_CLOSE} argument")
    mode = ctx.options.get("recursive_env", "inherit")
    if mode == "inherit":
        env0 = Env(env.frames[:1])  # global scope of the snapshot
    elif mode == "typedefs":
        env0 = env.keep_typedefs_only()
    else:
        env0 = Env.empty()
    code = strip_cartouche(arg)
    lex = tokenize(code, doc=ctx.doc)
    res = get_parser().parse(lex.tokens, lex.trivia, env0=env0, doc=ctx.doc)
    ctx.markups.extend(res.markups)
    for d in res.diagnostics + lex.diagnostics:
        ctx.diagnostics.append(Diagnostic(
            "warning", f"in nested C annotation: {d.message}", ctx.doc, None,
            "nested-c"))
    for b in res.env.global_bindings():
        if env0.lookup(b.name) is not b:
            ctx.definitions[b.name] = b
    return ctx


def make_context(doc: str = "", lines: LineIndex | None = None,
                 options: dict | None = None) -> Context:
    """A Context with the built-in command set registered."""
    ctx = Context(doc, lines, options)
    ctx.registry["highlight"] = AnnotationCmd("highlight", "bottom_up", _cmd_highlight)
    ctx.registry["setup"] = AnnotationCmd("setup", "bottom_up", _run_named_hook)
    ctx.registry["setup_td"] = AnnotationCmd("setup_td", "top_down", _run_named_hook)
    ctx.registry["C"] = AnnotationCmd("C", "bottom_up", _cmd_recursive_c)
    for kw in SEL4_SPEC_KEYWORDS:
        ctx.registry[kw] = AnnotationCmd(kw, "bottom_up", _cmd_spec_keyword(kw))
    return ctx
