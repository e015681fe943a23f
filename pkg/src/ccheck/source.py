"""Source text handling: backslash-newline splicing and position mapping.

A source file keeps two views of its text: the *physical* text as stored on
disk, and the *logical* text obtained by removing every backslash-newline
pair.  All lexing and parsing happens over the logical text; reports are
translated back to physical coordinates at emission time.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field

# Only \<LF> and \<CRLF> count as splices; a lone \<CR> does not.
_SPLICE_RE = re.compile(r"\\\r?\n")


class Pos:
    """A position in the logical text: character offset plus 1-based line/col."""

    __slots__ = ("offset", "line", "col")

    def __init__(self, offset: int, line: int, col: int):
        self.offset = offset
        self.line = line
        self.col = col

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Pos)
            and self.offset == other.offset
            and self.line == other.line
            and self.col == other.col
        )

    def __hash__(self) -> int:
        return hash((self.offset, self.line, self.col))

    def __repr__(self) -> str:
        return f"Pos({self.offset},{self.line}:{self.col})"


class Range:
    """Half-open range [start, end) over the logical text."""

    __slots__ = ("start", "end")

    def __init__(self, start: Pos, end: Pos):
        self.start = start
        self.end = end

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Range) and self.start == other.start and self.end == other.end

    def __hash__(self) -> int:
        return hash((self.start, self.end))

    def __repr__(self) -> str:
        return f"{self.start.line}:{self.start.col}-{self.end.line}:{self.end.col}"

    def contains_offset(self, off: int) -> bool:
        return self.start.offset <= off < self.end.offset


@dataclass(frozen=True)
class Segment:
    """One contiguous run of text present in both coordinate systems."""

    logical_start: int
    physical_start: int
    length: int


@dataclass(frozen=True)
class SpliceMap:
    """Ordered, disjoint segments mapping logical offsets to physical ones."""

    segments: tuple[Segment, ...]
    logical_len: int
    physical_len: int
    _log_starts: tuple[int, ...] = field(repr=False, default=())

    @staticmethod
    def build(segments: tuple[Segment, ...], logical_len: int, physical_len: int) -> "SpliceMap":
        starts = tuple(s.logical_start for s in segments)
        return SpliceMap(segments, logical_len, physical_len, starts)

    def _segment_at(self, logical_offset: int) -> Segment:
        idx = bisect.bisect_right(self._log_starts, logical_offset) - 1
        if idx < 0:
            raise ValueError(f"logical offset {logical_offset} before first segment")
        return self.segments[idx]

    def to_physical_offset(self, logical_offset: int) -> int:
        """Map a logical character offset to its physical offset.

        Offsets equal to the logical length map to the physical length, so
        exclusive range ends stay representable.
        """
        if logical_offset < 0 or logical_offset > self.logical_len:
            raise ValueError(f"logical offset {logical_offset} out of range 0..{self.logical_len}")
        if logical_offset == self.logical_len:
            return self.physical_len
        if not self.segments:
            return logical_offset
        seg = self._segment_at(logical_offset)
        return seg.physical_start + (logical_offset - seg.logical_start)

    def to_logical_offset(self, physical_offset: int) -> int:
        """Inverse mapping; physical offsets inside a removed splice map to the
        logical position right after the preceding segment."""
        if physical_offset < 0 or physical_offset > self.physical_len:
            raise ValueError(f"physical offset {physical_offset} out of range")
        if physical_offset == self.physical_len:
            return self.logical_len
        lo = 0
        for seg in self.segments:
            if physical_offset < seg.physical_start:
                return lo
            if physical_offset < seg.physical_start + seg.length:
                return seg.logical_start + (physical_offset - seg.physical_start)
            lo = seg.logical_start + seg.length
        return lo


def splice(physical: str) -> tuple[str, SpliceMap]:
    """Remove every backslash-newline pair, producing the logical text and a map.

    Total over all inputs; with no splices the map is a single identity segment.
    """
    segments: list[Segment] = []
    parts: list[str] = []
    log = 0
    phys = 0
    for m in _SPLICE_RE.finditer(physical):
        length = m.start() - phys
        if length > 0 or not segments:
            segments.append(Segment(log, phys, length))
            parts.append(physical[phys : m.start()])
            log += length
        phys = m.end()
    tail = len(physical) - phys
    if tail > 0 or not segments:
        segments.append(Segment(log, phys, tail))
        parts.append(physical[phys:])
        log += tail
    logical = "".join(parts)
    return logical, SpliceMap.build(tuple(segments), len(logical), len(physical))


class LineIndex:
    """Offset to 1-based line/col conversion for one fixed text."""

    def __init__(self, text: str):
        self.text = text
        starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                starts.append(i + 1)
        self._starts = starts

    def line_col(self, offset: int) -> tuple[int, int]:
        if offset < 0 or offset > len(self.text):
            raise ValueError(f"offset {offset} out of range 0..{len(self.text)}")
        line = bisect.bisect_right(self._starts, offset) - 1
        return line + 1, offset - self._starts[line] + 1

    def pos(self, offset: int) -> Pos:
        line, col = self.line_col(offset)
        return Pos(offset, line, col)


class SourceFile:
    """One version of a document: physical text plus the derived logical view.

    Immutable; edits produce a new version via :meth:`with_text`.
    """

    def __init__(self, doc_id: str, physical: str, version: int = 1, path: str | None = None):
        self.id = doc_id
        self.path = path
        self.physical = physical
        self.version = version
        self.logical, self.splice_map = splice(physical)
        self.logical_lines = LineIndex(self.logical)
        self.physical_lines = LineIndex(self.physical)

    def with_text(self, physical: str) -> "SourceFile":
        return SourceFile(self.id, physical, self.version + 1, self.path)

    def pos(self, offset: int) -> Pos:
        return self.logical_lines.pos(offset)

    def rng(self, start: int, end: int) -> Range:
        return Range(self.pos(start), self.pos(end))

    def to_physical(self, p: Pos) -> Pos:
        """Physical position of a logical one. Out-of-range offsets are caller bugs."""
        phys_off = self.splice_map.to_physical_offset(p.offset)
        return self.physical_lines.pos(phys_off)

    def to_logical(self, physical_offset: int) -> Pos:
        return self.logical_lines.pos(self.splice_map.to_logical_offset(physical_offset))

    def physical_span(self, r: Range) -> tuple[Pos, Pos]:
        """Physical start/end of a logical range.

        The end maps through the last contained character, so a range over a
        spliced token covers the full physical extent including splice bytes,
        while splices just after the range stay outside it.
        """
        start = self.to_physical(r.start)
        if r.end.offset <= r.start.offset:
            return start, start
        last = self.splice_map.to_physical_offset(r.end.offset - 1)
        return start, self.physical_lines.pos(last + 1)

    def __repr__(self) -> str:
        return f"SourceFile({self.id!r} v{self.version}, {len(self.physical)} chars)"
