import threading

from conftest import parse_text

from ccheck.env import Env
from ccheck.reports import fresh_serial


def markups_of(r, kind):
    return [m for m in r.markups if m.kind == kind]


def test_declare_param_and_lookup_in_body():
    r = parse_text("int f(int b) { return b; }")
    defs = markups_of(r, "entity_def")
    uses = markups_of(r, "entity_use")
    b_defs = [m for m in defs if m.props["name"] == "b"]
    b_uses = [m for m in uses if m.props["name"] == "b"]
    assert len(b_defs) == 1 and b_defs[0].props["kind"] == "param"
    assert len(b_uses) == 1
    assert b_uses[0].props["def_serial"] == b_defs[0].props["def_serial"]
    assert b_uses[0].props["type_text"] == "int"


def test_global_binding():
    r = parse_text("unsigned int k = 0;\nint probe(void) { return k; }")
    k_def = [m for m in markups_of(r, "entity_def") if m.props["name"] == "k"][0]
    assert k_def.props["kind"] == "object"
    assert k_def.props["type_text"] == "unsigned int"
    assert r.env.lookup("k").glob


def test_unknown_identifier_is_free():
    r = parse_text("int f(void) { return z; }")
    free = markups_of(r, "free_variable")
    assert [m.props["name"] for m in free] == ["z"]
    assert r.env.lookup("z") is None


def test_shadowing_inner_wins():
    r = parse_text("int x = 1;\nint f(void) { int x = 2; return x; }")
    defs = {m.props["def_serial"]: m for m in markups_of(r, "entity_def")
            if m.props["name"] == "x"}
    assert len(defs) == 2
    uses = [m for m in markups_of(r, "entity_use") if m.props["name"] == "x"]
    assert len(uses) == 1
    inner_def = max(defs.values(), key=lambda m: int(m.props["def_serial"]))
    assert uses[0].props["def_serial"] == inner_def.props["def_serial"]
    assert any(d.code == "shadow" for d in r.diagnostics)


def test_declare_then_pop_scope():
    env = Env.initial()
    env = env.push_scope()
    env, b = env.declare("tmp", "object", "int")
    assert env.lookup("tmp") is b
    env = env.pop_scope()
    assert env.lookup("tmp") is None


def test_every_use_references_earlier_def():
    src = """
    int g = 10;
    enum Color { RED, GREEN };
    int twice(int v) { return v + v; }
    int main(void) {
        int a = g;
        a = twice(a) + RED;
        return a;
    }
    """
    r = parse_text(src)
    assert r.accepted
    seen = set()
    for m in r.markups:
        if m.kind == "entity_def":
            seen.add(m.props["def_serial"])
        elif m.kind == "entity_use":
            assert m.props["def_serial"] in seen, m.props
    assert markups_of(r, "free_variable") == []


def test_scope_balance():
    src = "int f(int n) { { int a = n; { a++; } } while (n) { n--; } return 0; }"
    r = parse_text(src)
    assert r.accepted
    assert r.env_pushes == r.env_pops
    assert r.env.depth == 1


def test_enum_constants_and_tags():
    r = parse_text("enum Color { RED, GREEN };\nenum Color c = GREEN;")
    assert r.accepted
    defs = markups_of(r, "entity_def")
    kinds = {m.props["name"]: m.props["kind"] for m in defs}
    assert kinds["RED"] == "enum_const" and kinds["Color"] == "tag"
    uses = [m.props["name"] for m in markups_of(r, "entity_use")]
    assert "GREEN" in uses and "Color" in uses


def test_struct_tag_forward_reference():
    r = parse_text("struct Node;\nstruct Node *head;")
    defs = [m for m in markups_of(r, "entity_def") if m.props["name"] == "Node"]
    uses = [m for m in markups_of(r, "entity_use") if m.props["name"] == "Node"]
    assert len(defs) == 1 and len(uses) == 1


def test_typedef_consistency_snapshot_replay():
    # every token shifted as a typedef name has a visible typedef binding in
    # the environment snapshot of its shift event
    r = parse_text("typedef int T;\nT a;\nvoid f(void) { T b = a; }")
    assert r.accepted
    ev = r.forest.events
    for tok_idx in r.typedef_shifts:
        ev_idx = r.forest.leaf(tok_idx).event_index
        assert ev[ev_idx] == ("S", tok_idx)
        env_at = r.envs_by_event[ev_idx]
        assert env_at.is_typedef(r.tokens[tok_idx].text)


def test_labels_separate_namespace():
    r = parse_text("void f(int x) { x: x = 1; goto x; }")
    assert r.accepted
    label_defs = [m for m in markups_of(r, "entity_def") if m.props["kind"] == "label"]
    assert len(label_defs) == 1


def test_incompatible_redeclaration_diagnostic():
    r = parse_text("void f(void) { int a; typedef int a; }")
    assert any(d.code == "incompatible-redeclaration" for d in r.diagnostics)


def test_env_seeding_and_json_round_trip():
    env0 = Env.from_json('[{"name": "ext", "kind": "object", "type_text": "int"}]')
    r = parse_text("int f(void) { return ext; }", env0=env0)
    uses = [m for m in markups_of(r, "entity_use") if m.props["name"] == "ext"]
    assert len(uses) == 1
    dumped = r.env.to_json()
    env2 = Env.from_json(dumped)
    assert env2.lookup("ext") is not None
    assert env2.lookup("f") is not None


def test_keep_typedefs_only_mode():
    env = Env.initial()
    env, _ = env.declare("T", "typedef", "int")
    env, _ = env.declare("x", "object", "int")
    only_t = env.keep_typedefs_only()
    assert only_t.is_typedef("T")
    assert only_t.lookup("x") is None
    assert Env.empty().lookup("T") is None


def test_serials_unique_under_concurrency():
    out: list[int] = []
    lock = threading.Lock()

    def worker():
        got = [fresh_serial() for _ in range(500)]
        with lock:
            out.extend(got)

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(out) == len(set(out)) == 4000


def test_type_text_canonical_forms():
    cases = {
        "int x;": "int",
        "int *p;": "int*",
        "int a[10];": "int[10]",
        "int (*fp)(int, int);": "int(int,int)*",
        "int *m[3];": "int*[3]",
        "unsigned long big;": "unsigned long",
        "const char *s;": "const char*",
    }
    for src, want in cases.items():
        r = parse_text(src)
        assert r.accepted, src
        name = [m for m in r.markups if m.kind == "entity_def"][0]
        assert name.props["type_text"] == want, (src, name.props)
