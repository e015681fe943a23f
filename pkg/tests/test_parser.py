from conftest import parse_text

from ccheck import c_ast as A
from ccheck.parser import get_parser, sr_events
from ccheck.pretty import pretty


def test_simple_function():
    r = parse_text("int f(int b){return b+1;}")
    assert r.accepted
    assert len(r.ast.decls) == 1
    fd = r.ast.decls[0]
    assert isinstance(fd, A.FunctionDef)
    assert A.declarator_name(fd.decl) == "f"
    # leaf count equals the number of tokens shifted
    assert len(r.forest.leaves) == len(r.tokens) == 13


def test_typedef_feedback():
    r = parse_text("typedef int T; T x;")
    assert r.accepted
    # the second T (token index 4) shifts as a typedef name
    assert r.typedef_shifts == [4]
    assert r.tokens[4].text == "T"
    second = r.ast.decls[1]
    assert isinstance(second.specs.types[0], A.TypedefUse)


def test_typedef_scope_pops():
    r = parse_text("void f(void) { typedef int T; T x; }\nint T;")
    assert r.accepted
    # the global T after the function is a plain identifier again
    last = r.ast.decls[1]
    assert isinstance(last, A.Declaration)
    assert A.declarator_name(last.inits[0].decl) == "T"


def test_empty_input():
    r = parse_text("")
    assert r.accepted
    assert r.ast.decls == ()
    assert r.forest.leaves == []


def test_sr_events_order_and_replay():
    r = parse_text("void f(void) { 1; }")
    ev = sr_events(r.forest)
    shifts = [e for e in ev if e[0] == "S"]
    assert [e[1] for e in shifts] == list(range(len(r.tokens)))
    # at least one reduce occurs between the last two shifts (expression chain)
    last_shift = max(i for i, e in enumerate(ev) if e[0] == "S")
    prev_shift = max(i for i, e in enumerate(ev[:last_shift]) if e[0] == "S")
    assert any(e[0] == "R" for e in ev[prev_shift + 1:last_shift])
    # replaying events rebuilds the forest shape
    stack = []
    for e in ev:
        if e[0] == "S":
            stack.append(("S", e[1]))
        else:
            arity = e[2]
            children = stack[-arity:] if arity else []
            if arity:
                del stack[-arity:]
            stack.append(("R", e[1], children))
    assert len(stack) == len(r.forest.roots)


def test_forest_reduce_arity_matches_productions():
    r = parse_text("int x = 1 + 2;")
    for ev in sr_events(r.forest):
        if ev[0] == "R":
            assert len(r.forest.productions[ev[1]].rhs) == ev[2]


def test_forest_ranges_nest():
    r = parse_text("int f(int a) { return a * 2 + 1; }")

    def check(node):
        if node.kind == "reduce" and node.children:
            assert node.start == node.children[0].start
            assert node.end == node.children[-1].end
            for c in node.children:
                assert node.start <= c.start <= c.end <= node.end
                check(c)

    for root in r.forest.roots:
        check(root)


def test_ast_forest_coherence():
    r = parse_text("int f(int a) { if (a) { a = a + 1; } return a; }")
    assert r.accepted
    for node in A.walk(r.ast):
        if A.node_sort(node) in ("expr", "stmt", "decl"):
            rnode = r.forest.node_by_ast.get(node.node_id)
            assert rnode is not None, f"unmapped {type(node).__name__}"
            assert (rnode.start, rnode.end) == (node.start, node.end)


def test_node_ids_unique():
    r = parse_text("int f(int a) { return a + a; }")
    ids = [n.node_id for n in A.walk(r.ast)]
    assert len(ids) == len(set(ids))


def test_determinism():
    src = "int f(int n) { int s = 0; for (int i = 0; i < n; i++) s += i; return s; }"
    a = parse_text(src)
    b = parse_text(src)
    assert sr_events(a.forest) == sr_events(b.forest)
    assert A.ast_equal(a.ast, b.ast)


def test_syntax_error_has_expected_set_and_recovers():
    r = parse_text("int x = ;\nint y = 2;")
    errs = [d for d in r.diagnostics if d.code == "syntax-error"]
    assert len(errs) == 1
    assert "expected one of" in errs[0].message
    # parsing resumed: the second declaration is present
    names = [A.declarator_name(d.inits[0].decl) for d in r.ast.decls
             if isinstance(d, A.Declaration) and d.inits]
    assert "y" in names


def test_recovery_abandons_bad_function():
    r = parse_text("int f() { int a = 1 +; }\nint g(void) { return 1; }")
    assert any(d.code == "syntax-error" for d in r.diagnostics)
    fns = [d for d in r.ast.decls if isinstance(d, A.FunctionDef)]
    assert any(A.declarator_name(f.decl) == "g" for f in fns)


def test_unsupported_constructs_rejected_with_diagnostic():
    for kw in ("_Generic", "_Atomic", "_Alignas", "_Alignof"):
        r = parse_text(f"int f(void) {{ {kw} x; return 0; }}\nint ok;")
        codes = [d.code for d in r.diagnostics]
        assert "unsupported-construct" in codes, kw
        msgs = [d.message for d in r.diagnostics if d.code == "unsupported-construct"]
        assert any(kw in m for m in msgs)


def test_dangling_else_binds_to_nearest_if():
    r = parse_text("void f(int a, int b) { if (a) if (b) a = 1; else a = 2; }")
    assert r.accepted
    outer = r.ast.decls[0].body.items[0]
    assert isinstance(outer, A.If)
    assert outer.els is None
    inner = outer.then
    assert isinstance(inner, A.If)
    assert inner.els is not None


def test_register_wrapper_fires_on_reduce():
    from ccheck.parser import CParser
    p = CParser()
    seen = []
    [rule] = [i for i in p.find_rules("jump_statement", rhs0="return")
              if p.tables.productions[i].rhs == ("return", ";")]

    def hook(env, children):
        seen.append(len(children))
        return env, []

    p.register_wrapper(rule, hook)
    parse_text("int f(void) { return; }", parser=p)
    parse_text("int g(void) { return; }", parser=p)
    assert len(seen) == 2


def test_register_wrapper_unknown_rule():
    import pytest
    p = get_parser()
    with pytest.raises(ValueError):
        get_parser().__class__().add_wrapper(10 ** 6, lambda *a: None)
    with pytest.raises(ValueError):
        p.__class__().add_wrapper(0, lambda *a: None)


def test_no_user_wrappers_leaves_output_unchanged():
    from ccheck.parser import CParser
    base = parse_text("int f(void) { return 1; }")
    again = parse_text("int f(void) { return 1; }", parser=CParser())
    assert A.ast_equal(base.ast, again.ast)
    assert sr_events(base.forest) == sr_events(again.forest)


def test_grammar_conflicts_are_only_dangling_else():
    p = get_parser()
    for c in p.tables.conflicts:
        assert c.kind == "shift/reduce"
        assert c.terminal == "else"
    assert len(p.tables.conflicts) == 1


def test_monadic_rules_cover_scope_and_naming():
    p = get_parser()
    names = {p.tables.productions[i].lhs for i in p.monadic_rules}
    assert {"block_open", "block_close", "function_head", "declaration",
            "for_open", "for_statement", "enumerator",
            "labeled_statement"} <= names


def test_pretty_round_trip_fixed_cases():
    cases = [
        "int x = 1;",
        "int f(int a, int b) { return a * (b + 1); }",
        "typedef unsigned long size_type; size_type n = 10;",
        "struct P { int x; int y; }; struct P o = { .x = 1 };",
        "void g(int n) { while (n > 0) { n = n - 1; } }",
    ]
    for src in cases:
        r1 = parse_text(src)
        assert r1.accepted, src
        r2 = parse_text(pretty(r1.ast))
        assert r2.accepted, pretty(r1.ast)
        assert A.ast_equal(r1.ast, r2.ast), src
