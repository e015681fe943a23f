"""Command-line frontend.

Machine-readable output goes to stdout (NDJSON or dump formats); human
diagnostics go to stderr.  Exit codes: 0 success, 1 error diagnostics,
2 usage problems.
"""

from __future__ import annotations

import argparse
import io
import json
import statistics
import sys
import time
from pathlib import Path

from . import c_ast as A
from . import clean as CL
from . import lower as LO
from .env import Env
from .parser import sr_events
from .pipeline import PassOptions, run_pass
from .reports import emit
from .source import SourceFile


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ccheck",
                                 description="C11 frontend toolkit: lex, parse, "
                                 "annotate, lower, run, report, serve")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, with_file=True):
        if with_file:
            p.add_argument("file", help="C source file")
        p.add_argument("--include-path", action="append", default=[],
                       metavar="DIR", help="add an include search directory")
        p.add_argument("--assume-cpp", action="store_true",
                       help="input is already preprocessed; skip expansion")
        p.add_argument("--env-in", metavar="FILE.json",
                       help="seed the identifier environment from a JSON binding list")
        p.add_argument("--env-out", metavar="FILE.json",
                       help="write the resulting global bindings as JSON")
        p.add_argument("--permissive", action="store_true",
                       help="default annotation error handling is permissive")
        p.add_argument("--recursive-env", choices=["inherit", "empty", "typedefs"],
                       default="inherit",
                       help="environment used by nested C annotations")
        return p

    common(sub.add_parser("lex", help="dump tokens as NDJSON"))
    p = common(sub.add_parser("parse", help="parse and optionally dump AST/SR stream"))
    p.add_argument("--dump-ast", action="store_true")
    p.add_argument("--dump-sr", action="store_true")
    p = common(sub.add_parser("lower", help="lower to the core AST"))
    p.add_argument("--dump-core", action="store_true")
    p.add_argument("--dump-specs", action="store_true")
    common(sub.add_parser("annotate", help="print the annotation execution plan"))
    p = common(sub.add_parser("run", help="interpret a function"))
    p.add_argument("--backend", choices=["clean"], default="clean")
    p.add_argument("--call", required=True, metavar="NAME")
    p.add_argument("--args", nargs="*", default=[], metavar="N")
    common(sub.add_parser("report", help="full pipeline; stream all reports as NDJSON"))
    p = common(sub.add_parser("bench", help="timing for parse and full report passes"))
    p.add_argument("--iters", type=int, default=3)
    common(sub.add_parser("serve", help="continuous-check server on stdio"),
           with_file=False)
    return ap


def _load_source(path_str: str) -> SourceFile | None:
    p = Path(path_str)
    if not p.is_file():
        print(f"ccheck: no such file: {path_str}", file=sys.stderr)
        return None
    return SourceFile(p.name, p.read_text(encoding="utf-8"), path=str(p))


def _options(ns) -> PassOptions | None:
    env0 = None
    if getattr(ns, "env_in", None):
        p = Path(ns.env_in)
        if not p.is_file():
            print(f"ccheck: no such file: {ns.env_in}", file=sys.stderr)
            return None
        env0 = Env.from_json(p.read_text(encoding="utf-8"))
    return PassOptions(
        include_paths=list(ns.include_path),
        assume_cpp=ns.assume_cpp,
        default_mode="permissive" if ns.permissive else "strict",
        recursive_env=ns.recursive_env,
        env0=env0,
    )


def _print_diags(result) -> int:
    for d in result.diagnostics:
        print(str(d), file=sys.stderr)
    return 1 if result.error_count else 0


def _maybe_env_out(ns, result) -> None:
    if getattr(ns, "env_out", None) and result.parse is not None:
        Path(ns.env_out).write_text(result.parse.env.to_json(), encoding="utf-8")


def cmd_lex(ns) -> int:
    src = _load_source(ns.file)
    if src is None:
        return 2
    opts = _options(ns)
    if opts is None:
        return 2
    result = run_pass(src, opts, stop_after="lex")
    for t in result.tokens:
        start, end = src.physical_span(t.rng)
        obj = {"kind": t.kind, "name": t.name, "text": t.text,
               "start_line": start.line, "start_col": start.col,
               "end_line": end.line, "end_col": end.col}
        sys.stdout.write(json.dumps(obj, ensure_ascii=False) + "\n")
    return _print_diags(result)


def cmd_parse(ns) -> int:
    src = _load_source(ns.file)
    if src is None:
        return 2
    if ns.dump_ast and ns.dump_sr:
        print("ccheck: --dump-ast and --dump-sr are mutually exclusive",
              file=sys.stderr)
        return 2
    opts = _options(ns)
    if opts is None:
        return 2
    result = run_pass(src, opts, stop_after="parse")
    if ns.dump_ast:
        sys.stdout.write(A.to_sexp(result.parse.ast) + "\n")
    if ns.dump_sr:
        for e in sr_events(result.parse.forest):
            if e[0] == "S":
                sys.stdout.write(f"S {e[1]}\n")
            else:
                sys.stdout.write(f"R {e[1]} {e[2]}\n")
    _maybe_env_out(ns, result)
    return _print_diags(result)


def cmd_lower(ns) -> int:
    src = _load_source(ns.file)
    if src is None:
        return 2
    opts = _options(ns)
    if opts is None:
        return 2
    result = run_pass(src, opts)
    if ns.dump_core:
        sys.stdout.write(LO.core_sexp(result.core) + "\n")
    if ns.dump_specs:
        for fn in result.core.functions:
            for node in LO.iter_core(fn):
                for kw, payloads in sorted(node.meta.items()):
                    for payload in payloads:
                        target = (f"func {fn.name}" if node is fn
                                  else f"{type(node).__name__.lower()} "
                                       f"{node.start}-{node.end}")
                        sys.stdout.write(f"{kw}\t{payload}\t{target}\n")
        for g in result.core.globals:
            for kw, payloads in sorted(g.meta.items()):
                for payload in payloads:
                    sys.stdout.write(f"{kw}\t{payload}\tglobal {g.name}\n")
    _maybe_env_out(ns, result)
    return _print_diags(result)


def cmd_annotate(ns) -> int:
    src = _load_source(ns.file)
    if src is None:
        return 2
    opts = _options(ns)
    if opts is None:
        return 2
    result = run_pass(src, opts)
    for entry in result.ctx.plan:
        start, end = src.physical_span(src.rng(entry.start, entry.end))
        sys.stdout.write(
            f"{entry.phase}\t{entry.keyword}\t{entry.rule}\t"
            f"{start.line}:{start.col}-{end.line}:{end.col}\n")
    _maybe_env_out(ns, result)
    return _print_diags(result)


def cmd_run(ns) -> int:
    src = _load_source(ns.file)
    if src is None:
        return 2
    opts = _options(ns)
    if opts is None:
        return 2
    result = run_pass(src, opts)
    if result.error_count:
        return _print_diags(result)
    try:
        program = result.clean_program()
    except CL.TranslateError as e:
        print(f"ccheck: translate: {e}", file=sys.stderr)
        return 1
    try:
        args = [int(a, 0) for a in ns.args]
    except ValueError:
        print("ccheck: --args must be integers", file=sys.stderr)
        return 2
    value, st = CL.call(program, ns.call, args)
    out = {"result": value, "failed": st.failed,
           "globals": {k: v for k, v in sorted(st.globals.items())}}
    sys.stdout.write(json.dumps(out, ensure_ascii=False) + "\n")
    _print_diags(result)
    return 1 if st.failed else 0


def cmd_report(ns) -> int:
    src = _load_source(ns.file)
    if src is None:
        return 2
    opts = _options(ns)
    if opts is None:
        return 2
    result = run_pass(src, opts)
    for r in result.reports():
        emit(sys.stdout, r)
    _maybe_env_out(ns, result)
    for d in result.diagnostics:
        print(str(d), file=sys.stderr)
    return 1 if result.error_count else 0


def cmd_bench(ns) -> int:
    src = _load_source(ns.file)
    if src is None:
        return 2
    opts = _options(ns)
    if opts is None:
        return 2
    run_pass(src, opts, stop_after="parse")  # warm the tables
    kloc = src.physical.count("\n") / 1000.0
    parse_times = []
    report_times = []
    for i in range(ns.iters):
        t0 = time.perf_counter()
        run_pass(src, opts, stop_after="parse")
        t1 = time.perf_counter()
        result = run_pass(src, opts)
        sink = io.StringIO()
        for r in result.reports():
            emit(sink, r)
        t2 = time.perf_counter()
        parse_times.append(t1 - t0)
        report_times.append(t2 - t1)
        sys.stdout.write(f"iter {i + 1}: parse {t1 - t0:.3f}s report {t2 - t1:.3f}s\n")
    pm = statistics.median(parse_times)
    rm = statistics.median(report_times)
    rate = kloc / pm if pm > 0 else float("inf")
    sys.stdout.write(f"median: parse {pm:.3f}s report {rm:.3f}s "
                     f"({kloc:.1f} kLoC, {rate:.1f} kLoC/s parse)\n")
    return 0


def cmd_serve(ns) -> int:
    from .server import serve_stdio

    opts = _options(ns)
    if opts is None:
        return 2
    return serve_stdio(sys.stdin, sys.stdout, opts)


_COMMANDS = {
    "lex": cmd_lex,
    "parse": cmd_parse,
    "lower": cmd_lower,
    "annotate": cmd_annotate,
    "run": cmd_run,
    "report": cmd_report,
    "bench": cmd_bench,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    ap = build_arg_parser()
    ns = ap.parse_args(argv)
    return _COMMANDS[ns.cmd](ns)


if __name__ == "__main__":
    sys.exit(main())
