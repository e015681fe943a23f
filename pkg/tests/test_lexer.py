import string

from hypothesis import given
from hypothesis import strategies as st

from ccheck.lexer import classify_annotation, tokenize
from ccheck.source import SourceFile, splice


def kinds(res):
    return [(t.kind, t.name or t.text) for t in res.tokens]


def test_tokens_and_annotation_trivia():
    res = tokenize("int x; /*@ highlight */")
    assert kinds(res) == [("keyword", "int"), ("identifier", "x"), ("punctuator", ";")]
    assert len(res.trivia) == 1
    t = res.trivia[0]
    assert t.kind == "annotation"
    assert t.style == "block"
    assert t.payload == " highlight "


def test_comment_style_mixing():
    # per GCC's initial-processing rules, // inside /* */ is inert
    res = tokenize("/* a // b */ 1")
    assert [t.kind for t in res.trivia] == ["block_comment"]
    assert [t.kind for t in res.tokens] == ["integer_lit"]


def test_block_comment_marker_inside_line_comment_is_inert():
    res = tokenize("// has /* no block\n2")
    assert [t.kind for t in res.trivia] == ["line_comment"]
    assert [t.kind for t in res.tokens] == ["integer_lit"]


def test_block_comments_do_not_nest():
    res = tokenize("/* outer /* still outer */ 3")
    assert [t.kind for t in res.trivia] == ["block_comment"]
    assert [t.text for t in res.tokens] == ["3"]


def test_empty_input():
    res = tokenize("")
    assert res.tokens == [] and res.trivia == []


def test_keywords_vs_identifiers():
    res = tokenize("int interior _Bool _Static_assert x")
    assert kinds(res) == [
        ("keyword", "int"),
        ("identifier", "interior"),
        ("keyword", "_Bool"),
        ("keyword", "_Static_assert"),
        ("identifier", "x"),
    ]


def test_typedef_name_not_decided_by_lexer():
    res = tokenize("typedef int T; T x;")
    assert [t.kind for t in res.tokens if t.text == "T"] == ["identifier", "identifier"]


def test_punctuators_maximal_munch():
    res = tokenize("a >>= b >> c > d ... e")
    ops = [t.name for t in res.tokens if t.kind == "punctuator"]
    assert ops == [">>=", ">>", ">", "..."]


def test_digraphs_map_to_canonical():
    res = tokenize("<% <: :> %>")
    assert [t.name for t in res.tokens] == ["{", "[", "]", "}"]
    assert [t.text for t in res.tokens] == ["<%", "<:", ":>", "%>"]


def test_literals():
    res = tokenize("0x1f 077 42u 1.5e-3f '\\n' u8\"hi\" L'x'")
    assert [t.kind for t in res.tokens] == [
        "integer_lit", "integer_lit", "integer_lit", "float_lit",
        "char_lit", "string_lit", "char_lit",
    ]


def test_unterminated_block_comment():
    res = tokenize("int /* oops")
    assert any(d.code == "unterminated-comment" for d in res.diagnostics)
    assert [t.text for t in res.tokens] == ["int"]


def test_unterminated_string_recovers_next_line():
    res = tokenize('char *s = "oops;\nint y;')
    assert any(d.code == "unterminated-literal" for d in res.diagnostics)
    assert [t.text for t in res.tokens][-2:] == ["y", ";"]


def test_stray_character():
    res = tokenize("int a;\n$nope\nint b;")
    assert any(d.code == "stray-character" for d in res.diagnostics)
    assert [t.text for t in res.tokens] == ["int", "a", ";", "int", "b", ";"]


def test_directive_line_trivia():
    res = tokenize("#define N 3\nN;")
    assert res.trivia[0].kind == "directive_line"
    assert res.trivia[0].payload.startswith("#define N 3")
    assert [t.text for t in res.tokens] == ["N", ";"]


def test_directive_spans_spliced_line():
    logical, _ = splice("#define N \\\n 3\nN;")
    res = tokenize(logical)
    assert res.trivia[0].kind == "directive_line"
    assert "3" in res.trivia[0].payload


def test_annotation_inside_directive_is_extracted():
    res = tokenize("#define N 3 /*@ highlight */\n")
    ann = [t for t in res.trivia if t.kind == "annotation"]
    assert len(ann) == 1 and ann[0].inside_directive
    dirs = [t for t in res.trivia if t.kind == "directive_line"]
    assert len(dirs) == 1
    # the comment is blanked in the directive payload, offsets preserved
    assert "highlight" not in dirs[0].payload
    assert len(dirs[0].payload) == dirs[0].rng.end.offset - dirs[0].rng.start.offset


def test_hash_not_at_line_start_is_a_token():
    res = tokenize("a # b")
    assert [t.name for t in res.tokens if t.kind == "punctuator"] == ["#"]


def test_classify_annotation_block():
    res = tokenize("/*@ assert ⟨a > i⟩ */")
    ann = classify_annotation(res.trivia[0])
    assert ann is not None
    assert ann.style == "block"
    assert ann.payload.strip() == "assert ⟨a > i⟩"


def test_classify_annotation_plain_comment_is_none():
    res = tokenize("/* plain */")
    assert classify_annotation(res.trivia[0]) is None


def test_classify_annotation_line_with_nav_prefix():
    res = tokenize("//@ +++@ highlight")
    ann = classify_annotation(res.trivia[0])
    assert ann is not None
    assert ann.style == "line"
    assert ann.payload.strip() == "+++@ highlight"


def test_permissive_pragma_marker():
    res = tokenize("/*@* setup x */")
    ann = classify_annotation(res.trivia[0])
    assert ann.global_pragma == "permissive"
    assert ann.payload.strip() == "setup x"
    res2 = tokenize("/*@ setup x */")
    assert classify_annotation(res2.trivia[0]).global_pragma == "none"


def test_splice_then_lex_equals_plain_lex():
    spliced_logical, _ = splice("i\\\nn\\\nt x;")
    a = tokenize(spliced_logical)
    b = tokenize("int x;")
    assert kinds(a) == kinds(b)


def test_physical_coordinates_of_spliced_token():
    sf = SourceFile("d", "i\\\nn\\\nt x;")
    res = tokenize(sf.logical)
    start, end = sf.physical_span(res.tokens[0].rng)
    assert (start.line, start.col) == (1, 1)
    assert (end.line, end.col) == (3, 2)  # covers the full physical extent


_clean_src = st.text(
    alphabet=string.ascii_letters + string.digits + " \n\t;(){}[]+-*/%<>=!&|^,.:?_\"'",
    max_size=300,
)


@given(_clean_src)
def test_lossless_lexing(src):
    res = tokenize(src)
    covered = [(t.start, t.end, "tok") for t in res.tokens]
    covered += [
        (t.rng.start.offset, t.rng.end.offset, "trv")
        for t in res.trivia
        if not t.inside_directive
    ]
    covered.sort()
    prev = 0
    for a, b, _ in covered:
        assert a >= prev  # no overlap between tokens and top-level trivia
        gap = src[prev:a]
        if not res.diagnostics:
            assert gap.strip(" \t\r\n\v\f") == ""
        prev = max(prev, b)
    if not res.diagnostics:
        assert src[prev:].strip(" \t\r\n\v\f") == ""
    # determinism
    res2 = tokenize(src)
    assert kinds(res) == kinds(res2)
    assert [(t.kind, t.payload) for t in res.trivia] == [(t.kind, t.payload) for t in res2.trivia]


@given(_clean_src)
def test_token_text_matches_range(src):
    res = tokenize(src)
    for t in res.tokens:
        assert t.text == src[t.start:t.end]
        assert t.end > t.start
