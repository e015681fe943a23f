import string

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ccheck.source import LineIndex, SourceFile, splice


def test_splice_inside_keyword():
    logical, m = splice("i\\\nn\\\nt x;")
    assert logical == "int x;"
    assert len(m.segments) == 3


def test_splice_identity():
    logical, m = splice("int x;")
    assert logical == "int x;"
    assert len(m.segments) == 1
    assert m.segments[0].length == 6


def test_splice_at_eof():
    logical, m = splice("a\\\n")
    assert logical == "a"
    assert len(m.segments) == 1


def test_splice_crlf():
    logical, _ = splice("in\\\r\nt")
    assert logical == "int"


def test_splice_backslash_cr_alone_is_not_a_splice():
    logical, _ = splice("a\\\rb")
    assert logical == "a\\\rb"


def test_double_backslash_then_newline():
    # only the backslash adjacent to the newline is removed
    logical, _ = splice("a\\\\\nb")
    assert logical == "a\\b"


def test_to_physical_prefix_preserved():
    sf = SourceFile("d", "i\\\nnt")
    assert sf.splice_map.to_physical_offset(0) == 0


def test_to_physical_counts_removed_pair():
    sf = SourceFile("d", "i\\\nnt")
    assert sf.splice_map.to_physical_offset(1) == 3


def test_to_physical_identity_without_splices():
    sf = SourceFile("d", "hello world")
    for off in range(len(sf.physical) + 1):
        assert sf.splice_map.to_physical_offset(off) == off


def test_to_physical_out_of_range():
    sf = SourceFile("d", "ab")
    with pytest.raises(ValueError):
        sf.splice_map.to_physical_offset(5)


def test_physical_span_covers_splice_bytes():
    sf = SourceFile("d", "i\\\nnt x;")
    # logical "int" is [0,3); physically it spans "i\<nl>nt" = [0,5)
    r = sf.rng(0, 3)
    start, end = sf.physical_span(r)
    assert (start.offset, end.offset) == (0, 5)


def test_physical_span_excludes_trailing_splice():
    sf = SourceFile("d", "int\\\n x;")
    r = sf.rng(0, 3)
    start, end = sf.physical_span(r)
    assert (start.offset, end.offset) == (0, 3)


def test_versioning():
    sf = SourceFile("d", "a")
    sf2 = sf.with_text("b")
    assert sf2.version == sf.version + 1
    assert sf2.id == sf.id


def test_line_index():
    li = LineIndex("ab\ncd\n")
    assert li.line_col(0) == (1, 1)
    assert li.line_col(3) == (2, 1)
    assert li.line_col(4) == (2, 2)
    assert li.line_col(6) == (3, 1)


_texts = st.text(alphabet=string.ascii_letters + " \\\n\r;{}", max_size=200)


@given(_texts)
def test_roundtrip_logical_to_physical(physical):
    logical, m = splice(physical)
    for off in range(len(logical) + 1):
        phys = m.to_physical_offset(off)
        assert m.to_logical_offset(phys) == off


@given(_texts)
def test_splice_idempotent(physical):
    logical, _ = splice(physical)
    again, _ = splice(logical)
    assert again == logical


@given(_texts)
def test_reconstruction_from_segments(physical):
    logical, m = splice(physical)
    # interleave segment texts with the physical gap bytes between them
    parts = []
    prev_end = 0
    for seg in m.segments:
        parts.append(physical[prev_end:seg.physical_start])
        parts.append(logical[seg.logical_start:seg.logical_start + seg.length])
        prev_end = seg.physical_start + seg.length
    parts.append(physical[prev_end:])
    assert "".join(parts) == physical


@given(st.text(alphabet=string.ascii_letters + ";", min_size=0, max_size=50),
       st.integers(min_value=0, max_value=49))
def test_lf_only_gap_reinsertion(body, cut):
    # inserting "\<nl>" at a segment boundary of the logical text restores the physical text
    cut = min(cut, len(body))
    physical = body[:cut] + "\\\n" + body[cut:]
    logical, m = splice(physical)
    assert logical == body
    if len(m.segments) == 2:
        a, b = m.segments
        rebuilt = (logical[a.logical_start:a.logical_start + a.length]
                   + "\\\n"
                   + logical[b.logical_start:b.logical_start + b.length])
        assert rebuilt == physical
