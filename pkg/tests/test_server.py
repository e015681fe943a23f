import io
import json
import random
import subprocess
import sys
import threading
import time

from ccheck.pipeline import PassOptions
from ccheck.server import Session


class Collector:
    def __init__(self):
        self.messages = []
        self._lock = threading.Lock()

    def __call__(self, payload):
        with self._lock:
            self.messages.append(payload)

    def of_kind(self, cmd):
        return [m for m in self.messages if m.get("cmd") == cmd]


def make_session(**kw):
    out = Collector()
    session = Session(out, **kw)
    return session, out


def test_open_produces_reports_then_done():
    session, out = make_session()
    session.handle({"cmd": "open", "doc": "a.c", "version": 1,
                    "text": "int x /*@ highlight */ = 1;\n"})
    session.shutdown()
    kinds = [m.get("kind") for m in out.messages if "kind" in m]
    assert "highlight" in kinds or "annotation_focus" in kinds
    assert out.messages[-1] == {"cmd": "done", "doc": "a.c", "version": 1}
    for m in out.messages:
        if "kind" in m:
            assert m["version"] == 1


def test_stale_update_rejected():
    session, out = make_session()
    session.handle({"cmd": "open", "doc": "a.c", "version": 2, "text": "int x;"})
    session.wait_idle()
    session.handle({"cmd": "update", "doc": "a.c", "version": 2, "text": "int y;"})
    session.handle({"cmd": "update", "doc": "a.c", "version": 1, "text": "int z;"})
    session.shutdown()
    assert len(out.of_kind("stale")) == 2


def test_update_after_close_is_unknown_doc():
    session, out = make_session()
    session.handle({"cmd": "open", "doc": "a.c", "version": 1, "text": "int x;"})
    session.wait_idle()
    session.handle({"cmd": "close", "doc": "a.c"})
    session.handle({"cmd": "update", "doc": "a.c", "version": 2, "text": "int y;"})
    session.shutdown()
    errs = out.of_kind("error")
    assert errs and "unknown document" in errs[0]["message"]


def test_malformed_json_keeps_connection():
    session, out = make_session()
    session.handle_line("this is not json")
    session.handle_line('{"cmd": "open", "doc": "a.c", "version": 1, "text": "int x;"}')
    session.shutdown()
    assert out.of_kind("error")
    assert out.of_kind("done")


def test_superseded_version_yields_cancelled_not_done():
    slow = threading.Event()

    def stall(stage):
        if stage == "parse":
            slow.wait(0.5)

    session, out = make_session(opts=PassOptions(stage_hook=stall))
    session.handle({"cmd": "open", "doc": "a.c", "version": 1, "text": "int a;"})
    time.sleep(0.05)  # let v1 start
    session.handle({"cmd": "update", "doc": "a.c", "version": 2, "text": "int b;"})
    slow.set()
    session.shutdown()
    dones = out.of_kind("done")
    assert [d["version"] for d in dones] == [2]
    assert any(c["version"] == 1 for c in out.of_kind("cancelled"))


def assert_no_message_for_old_version_after_newer(messages):
    seen_newer: dict[str, int] = {}
    for m in messages:
        doc = m.get("doc")
        v = m.get("version")
        if doc is None or v is None:
            continue
        is_result = "kind" in m or m.get("cmd") == "done"
        if not is_result:
            continue
        newest = seen_newer.get(doc, 0)
        assert v >= newest, f"message for v{v} after v{newest}: {m}"
        seen_newer[doc] = max(newest, v)


def test_staleness_over_randomized_interleavings():
    rng = random.Random(7)
    for round_no in range(30):
        delays = [rng.uniform(0, 0.004) for _ in range(5)]

        def jitter(stage, _d=delays, _r=rng):
            time.sleep(_r.choice(_d))

        session, out = make_session(opts=PassOptions(stage_hook=jitter),
                                    max_workers=3)
        for v in range(1, 6):
            session.handle({"cmd": "open" if v == 1 else "update", "doc": "a.c",
                            "version": v, "text": f"int x{v} = {v};\n"})
            time.sleep(rng.uniform(0, 0.003))
        session.shutdown()
        assert_no_message_for_old_version_after_newer(out.messages)
        # liveness: every version ends in done, cancelled, or stale
        seen = {v: None for v in range(1, 6)}
        for m in out.messages:
            if m.get("cmd") in ("done", "cancelled", "stale"):
                seen[m["version"]] = m["cmd"]
        assert all(v is not None for v in seen.values()), seen


def test_documents_are_independent():
    session, out = make_session()
    session.handle({"cmd": "open", "doc": "a.c", "version": 1, "text": "int a;"})
    session.handle({"cmd": "open", "doc": "b.c", "version": 1, "text": "int b;"})
    session.shutdown()
    dones = {(m["doc"], m["version"]) for m in out.of_kind("done")}
    assert dones == {("a.c", 1), ("b.c", 1)}


def test_reports_carry_message_version():
    session, out = make_session()
    session.handle({"cmd": "open", "doc": "a.c", "version": 41, "text": "int x;"})
    session.shutdown()
    kinds = [m for m in out.messages if "kind" in m]
    assert kinds and all(m["version"] == 41 for m in kinds)


def test_serve_stdio_end_to_end():
    script = "\n".join([
        json.dumps({"cmd": "open", "doc": "d.c", "version": 1,
                    "text": "int x /*@ highlight */ = 1;"}),
        json.dumps({"cmd": "shutdown"}),
    ]) + "\n"
    proc = subprocess.run(
        [sys.executable, "-m", "ccheck.cli", "serve"],
        input=script, capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    lines = [json.loads(line) for line in proc.stdout.splitlines()]
    assert lines[-1] == {"cmd": "done", "doc": "d.c", "version": 1}
    assert any(m.get("kind") == "highlight" for m in lines)
