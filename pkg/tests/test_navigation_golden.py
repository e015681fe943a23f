import random
import sys
from pathlib import Path

from conftest import corpus_files, parse_text

GOLDEN_DIR = Path(__file__).parent / "golden"
sys.path.insert(0, str(GOLDEN_DIR))

from derive_navigation import derive_focus, describe  # noqa: E402

from ccheck.annot import NavError, parse_nav, resolve  # noqa: E402
from ccheck.lexer import tokenize  # noqa: E402
from ccheck.parser import get_parser, sr_events  # noqa: E402
from ccheck.source import SourceFile  # noqa: E402

NAVS = [("default", 0, ""), ("+", 1, ""), ("@", 0, "@"), ("@@", 0, "@@"), ("&", 0, "&")]


def example():
    text = (GOLDEN_DIR / "navigation_example.c").read_text()
    sf = SourceFile("navigation_example.c", text)
    lex = tokenize(sf.logical, doc=sf.id, lines=sf.logical_lines)
    p = get_parser()
    r = p.parse(lex.tokens, lex.trivia, doc=sf.id, lines=sf.logical_lines)
    assert r.accepted
    return text, p, r


def test_replayed_derivation_matches_golden():
    text, p, r = example()
    pos = text.index("/*@")
    monadic = frozenset(p.monadic_rules)
    lines = []
    for label, plus, anc in NAVS:
        node = derive_focus(sr_events(r.forest), r.tokens, monadic, pos, plus, anc)
        lines.append(f"{label}\t" + describe(node, r.tokens, p.rule_display))
    got = "\n".join(lines) + "\n"
    want = (GOLDEN_DIR / "navigation_table.txt").read_text()
    assert got == want


def test_resolve_matches_golden():
    text, p, r = example()
    pos = text.index("/*@")
    want_lines = (GOLDEN_DIR / "navigation_table.txt").read_text().splitlines()
    for (label, plus, anc), want in zip(NAVS, want_lines):
        nav = parse_nav(("+" * plus) + anc) if (plus or anc) else parse_nav("")
        node = resolve(nav, r.forest, pos, r.tokens)
        if node.kind == "shift":
            got = f"{label}\tshift\t{r.tokens[node.tok_index].text}\t{node.start}-{node.end}"
        else:
            got = f"{label}\treduce\t{p.rule_display(node.rule_id)}\t{node.start}-{node.end}"
        assert got == want


def test_at_monotonicity_over_random_placements():
    # over 200 random (file, token) placements, repeated `@` never shrinks the
    # focus range, and `&` always lands on a monadic rule
    rng = random.Random(1234)
    files = corpus_files()
    placements = 0
    while placements < 200:
        path = rng.choice(files)
        r = parse_text(path.read_text(encoding="utf-8"), doc=path.name)
        if not r.forest.leaves:
            continue
        leaf = rng.choice(r.forest.leaves)
        pos = r.tokens[leaf.tok_index].end + 1  # as if annotated after this token
        placements += 1
        try:
            prev = resolve(parse_nav(""), r.forest, pos, r.tokens)
        except NavError:
            continue
        for k in range(1, 9):
            try:
                node = resolve(parse_nav("@" * k), r.forest, pos, r.tokens)
            except NavError:
                break
            assert node.start <= prev.start and node.end >= prev.end
            prev = node
        try:
            amp = resolve(parse_nav("&"), r.forest, pos, r.tokens)
            assert r.forest.is_monadic(amp.rule_id)
        except NavError:
            pass
