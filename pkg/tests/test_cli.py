import json
import subprocess
import sys
from pathlib import Path

import pytest

from ccheck.cli import main

CORPUS = Path(__file__).parent / "corpus"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_lex_ndjson(tmp_path, capsys):
    f = tmp_path / "t.c"
    f.write_text("int x;\n")
    code, out, _ = run_cli(capsys, "lex", str(f))
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert [(l["kind"], l["text"]) for l in lines] == [
        ("keyword", "int"), ("identifier", "x"), ("punctuator", ";")]
    assert lines[0]["start_line"] == 1 and lines[0]["start_col"] == 1


def test_lex_physical_coordinates_over_splices(tmp_path, capsys):
    f = tmp_path / "t.c"
    f.write_text("i\\\nnt x;\n")
    code, out, _ = run_cli(capsys, "lex", str(f))
    first = json.loads(out.splitlines()[0])
    assert (first["start_line"], first["end_line"]) == (1, 2)


def test_parse_missing_file_exits_2(capsys):
    code, _, err = run_cli(capsys, "parse", "missing.c")
    assert code == 2
    assert "no such file" in err


def test_parse_dump_ast(tmp_path, capsys):
    f = tmp_path / "t.c"
    f.write_text("int x = 1;\n")
    code, out, _ = run_cli(capsys, "parse", str(f), "--dump-ast")
    assert code == 0
    assert "(TranslationUnit" in out and "DName" in out


def test_parse_dump_sr_format(tmp_path, capsys):
    f = tmp_path / "t.c"
    f.write_text("int x;\n")
    code, out, _ = run_cli(capsys, "parse", str(f), "--dump-sr")
    assert code == 0
    lines = out.splitlines()
    assert all(line.split()[0] in ("S", "R") for line in lines)
    shifts = [line for line in lines if line.startswith("S ")]
    assert shifts == ["S 0", "S 1", "S 2"]
    # bit-exact across runs
    _, out2, _ = run_cli(capsys, "parse", str(f), "--dump-sr")
    assert out == out2


def test_parse_conflicting_dumps_exit_2(tmp_path, capsys):
    f = tmp_path / "t.c"
    f.write_text("int x;\n")
    code, _, _ = run_cli(capsys, "parse", str(f), "--dump-ast", "--dump-sr")
    assert code == 2


def test_parse_error_exit_1(tmp_path, capsys):
    f = tmp_path / "t.c"
    f.write_text("int x = ;\n")
    code, _, err = run_cli(capsys, "parse", str(f))
    assert code == 1
    assert "syntax error" in err


def test_lower_dump_core_and_specs(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "lower", str(CORPUS / "prime_annotated.c"),
                           "--dump-core", "--dump-specs")
    assert code == 0
    assert "(func prime" in out
    assert "INVARIANT" in out


def test_annotate_plan(tmp_path, capsys):
    f = tmp_path / "t.c"
    f.write_text("int x /*@ highlight */ = 1;\n")
    code, out, _ = run_cli(capsys, "annotate", str(f))
    assert code == 0
    [line] = out.splitlines()
    phase, keyword, rule, rng = line.split("\t")
    assert phase == "bottom_up" and keyword == "highlight"
    # deterministic golden-style output
    _, out2, _ = run_cli(capsys, "annotate", str(f))
    assert out == out2


def test_run_prime(capsys):
    code, out, _ = run_cli(capsys, "run", str(CORPUS / "prime.c"),
                           "--backend", "clean", "--call", "prime", "--args", "97")
    assert code == 0
    obj = json.loads(out)
    assert obj["result"] == 1
    assert obj["failed"] is None
    assert obj["globals"]["k"] == 8


def test_run_assert_failure_exit_1(tmp_path, capsys):
    f = tmp_path / "t.c"
    f.write_text("int f(int n) { assert(n > 0); return n; }\n")
    code, out, _ = run_cli(capsys, "run", str(f), "--call", "f", "--args", "0")
    assert code == 1
    obj = json.loads(out)
    assert "assertion failed" in obj["failed"]


def test_report_stream_schema(capsys):
    code, out, err = run_cli(capsys, "report", str(CORPUS / "prime.c"))
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert lines, "report stream should not be empty"
    for obj in lines:
        assert list(obj.keys()) == ["serial", "doc", "version", "kind", "start_line",
                                    "start_col", "end_line", "end_col", "props"]
    assert not [o for o in lines if o["kind"] == "diagnostic_error"]
    kinds = {o["kind"] for o in lines}
    assert {"keyword", "entity_def", "entity_use", "macro_expansion"} <= kinds


def test_report_env_out(tmp_path, capsys):
    f = tmp_path / "t.c"
    f.write_text("int marker_fn(void) { return 1; }\n")
    envf = tmp_path / "env.json"
    code, _, _ = run_cli(capsys, "report", str(f), "--env-out", str(envf))
    assert code == 0
    bindings = json.loads(envf.read_text())
    assert any(b["name"] == "marker_fn" and b["kind"] == "function"
               for b in bindings)


def test_env_in_seeds_bindings(tmp_path, capsys):
    f = tmp_path / "t.c"
    f.write_text("int f(void) { return external_thing; }\n")
    envf = tmp_path / "env.json"
    envf.write_text('[{"name": "external_thing", "kind": "object", "type_text": "int"}]')
    code, out, _ = run_cli(capsys, "report", str(f), "--env-in", str(envf))
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert not [o for o in lines if o["kind"] == "free_variable"]


def test_bench_output_shape(tmp_path, capsys):
    f = tmp_path / "t.c"
    f.write_text("int f(int a) { return a + 1; }\n" * 20)
    code, out, _ = run_cli(capsys, "bench", str(f), "--iters", "3")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 4  # three timing lines + median
    assert lines[-1].startswith("median:")
    assert "kLoC/s" in lines[-1]


def test_include_path_flag(tmp_path, capsys):
    (tmp_path / "lib.h").write_text("#define LIMIT 10\nint lib_value;\n")
    f = tmp_path / "t.c"
    f.write_text('#include "lib.h"\nint use = LIMIT;\n')
    code, out, err = run_cli(capsys, "report", str(f),
                             "--include-path", str(tmp_path))
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert any(o["kind"] == "macro_expansion" for o in lines)


def test_assume_cpp_skips_expansion(tmp_path, capsys):
    f = tmp_path / "t.c"
    f.write_text("#define N 3\nint x = N;\n")
    code, _, err = run_cli(capsys, "parse", str(f), "--assume-cpp")
    # N stays an identifier: it parses as an initializer expression fine
    assert code == 0


def test_cli_subprocess_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "ccheck.cli", "report", str(CORPUS / "prime.c")],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert proc.stdout.count("\n") > 10


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
