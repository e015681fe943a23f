"""Continuous-check service: NDJSON requests in, report streams out.

Each open/update schedules a full pipeline pass tagged with the document
version.  Every outgoing message for (doc, version) is emitted under the
session lock only while that version is still the latest acknowledged one,
so no message for an old version can follow any message for a newer one.
Superseded passes are cancelled between pipeline stages (best effort) and
acknowledged with a `cancelled` message; delivery filtering alone already
guarantees the staleness invariant.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, IO

from .pipeline import PassOptions, run_pass
from .source import SourceFile


class _Superseded(Exception):
    pass


@dataclass
class DocState:
    latest: int = 0
    last_completed: int = 0
    compute_lock: threading.Lock = field(default_factory=threading.Lock)


class Session:
    """Protocol state machine plus the worker pool running pipeline passes."""

    def __init__(self, emit: Callable[[dict], None],
                 opts: PassOptions | None = None, max_workers: int = 4):
        self._emit_raw = emit
        self.opts = opts or PassOptions()
        self.docs: dict[str, DocState] = {}
        self._lock = threading.Lock()
        self._pool = ThreadPoolExecutor(max_workers=max_workers)
        self._pending: list = []
        self.shutdown_requested = False

    # -- emission under the staleness gate --------------------------------------

    def _emit_if_fresh(self, doc: str, version: int, payload: dict) -> bool:
        with self._lock:
            ds = self.docs.get(doc)
            if ds is None or ds.latest != version:
                return False
            self._emit_raw(payload)
            return True

    def _emit_always(self, payload: dict) -> None:
        with self._lock:
            self._emit_raw(payload)

    # -- protocol ------------------------------------------------------------------

    def handle(self, msg: dict) -> None:
        cmd = msg.get("cmd")
        if cmd in ("open", "update"):
            doc = msg.get("doc")
            version = msg.get("version")
            text = msg.get("text")
            if not isinstance(doc, str) or not isinstance(version, int) \
                    or not isinstance(text, str):
                self._emit_always({"cmd": "error",
                                   "message": "open/update needs doc, version, text"})
                return
            with self._lock:
                ds = self.docs.get(doc)
                if cmd == "update" and ds is None:
                    self._emit_raw({"cmd": "error",
                                    "message": f"unknown document: {doc}"})
                    return
                if ds is None:
                    ds = DocState()
                    self.docs[doc] = ds
                if version <= ds.latest:
                    self._emit_raw({"cmd": "stale", "doc": doc, "version": version})
                    return
                ds.latest = version
            fut = self._pool.submit(self._compute, doc, version, text)
            with self._lock:
                self._pending.append(fut)
            return
        if cmd == "close":
            doc = msg.get("doc")
            with self._lock:
                self.docs.pop(doc, None)
            return
        if cmd == "shutdown":
            self.shutdown_requested = True
            return
        self._emit_always({"cmd": "error", "message": f"unknown command: {cmd!r}"})

    def handle_line(self, line: str) -> None:
        line = line.strip()
        if not line:
            return
        try:
            msg = json.loads(line)
            if not isinstance(msg, dict):
                raise ValueError("not an object")
        except ValueError as e:
            self._emit_always({"cmd": "error", "message": f"malformed request: {e}"})
            return
        self.handle(msg)

    # -- computation ----------------------------------------------------------------

    def _fresh(self, doc: str, version: int) -> bool:
        with self._lock:
            ds = self.docs.get(doc)
            return ds is not None and ds.latest == version

    def _compute(self, doc: str, version: int, text: str) -> None:
        ds_lock = None
        with self._lock:
            ds = self.docs.get(doc)
            if ds is not None:
                ds_lock = ds.compute_lock
        if ds_lock is None:
            return
        with ds_lock:  # per-document serialization
            if not self._fresh(doc, version):
                self._emit_always({"cmd": "cancelled", "doc": doc, "version": version})
                return
            user_hook = self.opts.stage_hook

            def hook(stage: str) -> None:
                if user_hook is not None:
                    user_hook(stage)
                if not self._fresh(doc, version):
                    raise _Superseded()

            src = SourceFile(doc, text, version=version)
            try:
                result = run_pass(src, replace(self.opts, stage_hook=hook))
                reports = result.reports()
            except _Superseded:
                self._emit_always({"cmd": "cancelled", "doc": doc, "version": version})
                return
            for r in reports:
                if not self._emit_if_fresh(doc, version, json.loads(r.to_json())):
                    self._emit_always({"cmd": "cancelled", "doc": doc,
                                       "version": version})
                    return
            if self._emit_if_fresh(doc, version,
                                   {"cmd": "done", "doc": doc, "version": version}):
                with self._lock:
                    ds2 = self.docs.get(doc)
                    if ds2 is not None and ds2.last_completed < version:
                        ds2.last_completed = version
            else:
                self._emit_always({"cmd": "cancelled", "doc": doc, "version": version})

    def wait_idle(self) -> None:
        while True:
            with self._lock:
                pending = [f for f in self._pending if not f.done()]
                self._pending = pending
            if not pending:
                return
            pending[0].result()

    def shutdown(self) -> None:
        self.wait_idle()
        self._pool.shutdown(wait=True)


def serve_stdio(stdin: IO[str], stdout: IO[str], opts: PassOptions | None = None) -> int:
    """Blocking NDJSON loop over stdio; `shutdown` or EOF ends the session."""
    write_lock = threading.Lock()

    def emit(payload: dict) -> None:
        with write_lock:
            stdout.write(json.dumps(payload, ensure_ascii=False) + "\n")
            stdout.flush()

    session = Session(emit, opts)
    for line in stdin:
        session.handle_line(line)
        if session.shutdown_requested:
            break
    session.shutdown()
    return 0
