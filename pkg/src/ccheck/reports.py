"""Markup reports: the single output stream for highlights, entities and diagnostics.

Everything user-visible flows through one NDJSON schema; diagnostics are
reports too, not a separate channel.  Coordinates are 1-based line:col over
the *physical* text.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import IO

from .source import Range, SourceFile

_serials = itertools.count(1)

REPORT_KINDS = frozenset(
    {
        "keyword",
        "entity_def",
        "entity_use",
        "free_variable",
        "typedef_name",
        "type_info",
        "highlight",
        "diagnostic_error",
        "diagnostic_warning",
        "macro_expansion",
        "annotation_focus",
    }
)


def fresh_serial() -> int:
    """Process-unique, strictly increasing serial (atomic under CPython)."""
    return next(_serials)


@dataclass
class Diagnostic:
    """An internal problem record; converted to a diagnostic report on emission."""

    severity: str  # "error" | "warning"
    message: str
    doc: str
    rng: Range | None
    code: str = ""

    def __str__(self) -> str:
        where = f"{self.rng}" if self.rng is not None else "<nopos>"
        return f"{self.severity}: {self.doc}:{where}: {self.message}"


@dataclass
class Markup:
    """A markup item in logical coordinates, produced during a pipeline pass."""

    kind: str
    doc: str
    rng: Range
    props: dict[str, str] = field(default_factory=dict)


@dataclass
class Report:
    serial: int
    doc: str
    version: int
    kind: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int
    props: dict[str, str]

    def to_json(self) -> str:
        obj = {
            "serial": self.serial,
            "doc": self.doc,
            "version": self.version,
            "kind": self.kind,
            "start_line": self.start_line,
            "start_col": self.start_col,
            "end_line": self.end_line,
            "end_col": self.end_col,
            "props": self.props,
        }
        return json.dumps(obj, ensure_ascii=False)


def make_report(src: SourceFile, kind: str, rng: Range, props: dict[str, str]) -> Report:
    """Build a report from a logical range, translating to physical coordinates."""
    assert kind in REPORT_KINDS, kind
    start, end = src.physical_span(rng)
    return Report(
        serial=fresh_serial(),
        doc=src.id,
        version=src.version,
        kind=kind,
        start_line=start.line,
        start_col=start.col,
        end_line=end.line,
        end_col=end.col,
        props=props,
    )


def diagnostic_report(src: SourceFile, d: Diagnostic) -> Report:
    kind = "diagnostic_error" if d.severity == "error" else "diagnostic_warning"
    rng = d.rng if d.rng is not None else src.rng(0, 0)
    props = {"message": d.message}
    if d.code:
        props["code"] = d.code
    return make_report(src, kind, rng, props)


def emit(sink: IO[str], report: Report) -> None:
    """Write one report as an NDJSON line; write failures propagate."""
    sink.write(report.to_json())
    sink.write("\n")
