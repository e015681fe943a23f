"""Deterministic shift-reduce parsing with a recorded Shift/Reduce history.

The engine is table-driven LALR(1); tables are built once per process from
the embedded grammar.  Two details matter for C:

* states whose action row is one uniform reduction reduce *without* reading
  the lookahead, so a completed typedef declaration reclassifies the very
  next identifier token;
* every shift and reduce is appended to an event list, the replayable
  Shift/Reduce history.  The forest view over that history (leaves, parent
  links, AST links) is materialized lazily on first access, off the
  parse-only hot path.

Rule wrappers (hooks on specific productions) fire at each matching
reduction in reduction order; the scoped-environment bookkeeping is itself
installed as a set of wrappers.
"""

from __future__ import annotations

import gc
import threading
from bisect import bisect_right

from . import c_ast as A
from .grammar import GRAMMAR, START_SYMBOL, productions
from .lalr import EOF, Tables, build_tables
from .lexer import KEYWORDS, Token, Trivia
from .reports import Diagnostic, Markup
from .source import LineIndex, Range
from .env import Env, install_env_wrappers


class SNode:
    """A shift leaf: one consumed token."""

    __slots__ = ("tok_index", "parent", "event_index", "start", "end")

    def __init__(self, tok_index: int, event_index: int, start: int, end: int):
        self.tok_index = tok_index
        self.parent = None
        self.event_index = event_index
        self.start = start
        self.end = end

    kind = "shift"

    def __repr__(self) -> str:
        return f"S({self.tok_index})"


class RNode:
    """A reduce node; children are the matched handle, in order."""

    __slots__ = ("rule_id", "children", "parent", "event_index", "start", "end", "ast_id")

    def __init__(self, rule_id: int, children: tuple, event_index: int, start: int, end: int):
        self.rule_id = rule_id
        self.children = children
        self.parent = None
        self.event_index = event_index
        self.start = start
        self.end = end
        self.ast_id = None

    kind = "reduce"

    def __repr__(self) -> str:
        return f"R({self.rule_id},{len(self.children)})"


class SRForest:
    """The parse history: leaves are shifts, internal nodes are reductions.

    Construction stores only the event stream; the node graph is built by
    replaying it on first use.
    """

    def __init__(self, productions, monadic: frozenset[int]):
        self.events: list[tuple] = []  # ("S", tok_idx) | ("R", rule_id, arity)
        self.productions = productions
        self.monadic = monadic
        self.tokens: list[Token] = []
        self._ast_links: dict[int, int] = {}  # node_id -> event index
        self._resets: list[int] = []  # event indices where recovery cleared the stack
        self._built = False
        self._roots: list = []
        self._leaves: list[SNode] = []
        self._node_by_ast: dict[int, RNode] = {}
        self._preorder: dict[int, int] | None = None
        self._leaf_starts: list[int] | None = None

    # -- lazy materialization -------------------------------------------------

    def _build(self) -> None:
        if self._built:
            return
        self._built = True
        stack: list = []
        leaves = self._leaves
        tokens = self.tokens
        resets = set(self._resets)
        node_by_event: list = [None] * len(self.events)
        for idx, ev in enumerate(self.events):
            if idx in resets:
                self._roots.extend(nd for nd in stack if nd.parent is None)
                stack.clear()
            if ev[0] == "S":
                ti = ev[1]
                tok = tokens[ti]
                node = SNode(ti, idx, tok.start, tok.end)
                leaves.append(node)
                stack.append(node)
            else:
                arity = ev[2]
                if arity:
                    children = tuple(stack[-arity:])
                    del stack[-arity:]
                    hs = children[0].start
                    he = children[-1].end
                else:
                    children = ()
                    he = hs = stack[-1].end if stack else 0
                node = RNode(ev[1], children, idx, hs, he)
                for ch in children:
                    ch.parent = node
                stack.append(node)
            node_by_event[idx] = node
        self._roots.extend(nd for nd in stack if nd.parent is None)
        for node_id, ev_idx in self._ast_links.items():
            rnode = node_by_event[ev_idx]
            rnode.ast_id = node_id
            self._node_by_ast[node_id] = rnode

    @property
    def roots(self) -> list:
        self._build()
        return self._roots

    @property
    def leaves(self) -> list[SNode]:
        self._build()
        return self._leaves

    @property
    def node_by_ast(self) -> dict[int, RNode]:
        self._build()
        return self._node_by_ast

    # -- queries ------------------------------------------------------------------

    def leaf(self, tok_index: int) -> SNode:
        leaves = self.leaves
        # after error recovery the leaves are a subsequence of the tokens
        if tok_index < len(leaves) and leaves[tok_index].tok_index == tok_index:
            return leaves[tok_index]
        for lf in leaves:
            if lf.tok_index == tok_index:
                return lf
        raise KeyError(f"token {tok_index} was never shifted")

    def leaf_starts(self, tokens=None) -> list[int]:
        if self._leaf_starts is None:
            toks = tokens if tokens is not None else self.tokens
            self._leaf_starts = [toks[leaf.tok_index].start for leaf in self.leaves]
        return self._leaf_starts

    def is_monadic(self, rule_id: int) -> bool:
        return rule_id in self.monadic

    def rule_name(self, rule_id: int) -> str:
        return str(self.productions[rule_id])

    def preorder_index(self, node) -> int:
        if self._preorder is None:
            order: dict[int, int] = {}
            stack = list(reversed(self.roots))
            n = 0
            while stack:
                cur = stack.pop()
                order[id(cur)] = n
                n += 1
                if isinstance(cur, RNode):
                    stack.extend(reversed(cur.children))
            self._preorder = order
        return self._preorder[id(node)]


def sr_events(forest: SRForest) -> list[tuple]:
    """The exact shift/reduce sequence the engine performed, replayable."""
    return list(forest.events)


class EnvTimeline:
    """Environment snapshots addressable by event index.

    The environment is immutable and only changes at wrapper-firing
    reductions, so storing (event_index, env) change points is enough;
    indexing finds the last change at or before the event.
    """

    def __init__(self, changes: list[tuple[int, Env]], n_events: int):
        self._changes = changes
        self._keys = [c[0] for c in changes]
        self._n = n_events

    def __len__(self) -> int:
        return self._n

    def __getitem__(self, event_index: int) -> Env:
        if event_index < 0:
            event_index += self._n
        idx = bisect_right(self._keys, event_index) - 1
        if idx < 0:
            idx = 0
        return self._changes[idx][1]


class ParseResult:
    def __init__(self, ast, forest, env, markups, diagnostics):
        self.ast: A.TranslationUnit = ast
        self.forest: SRForest = forest
        self.env: Env = env
        self.markups: list[Markup] = markups
        self.diagnostics: list[Diagnostic] = diagnostics
        self.envs_by_event: EnvTimeline = EnvTimeline([(0, env)], 0)
        self.typedef_shifts: list[int] = []  # token indices shifted as typedef names
        self.tokens: list[Token] = []
        self.accepted = False
        self.env_pushes = 0
        self.env_pops = 0

    @property
    def reports(self) -> list[Markup]:
        return self.markups


class _Run:
    """Mutable state threaded through one parse; actions and wrappers see this."""

    def __init__(self, doc: str, lines: LineIndex):
        self.doc = doc
        self.lines = lines
        self.externals: list = []
        self.markups: list[Markup] = []
        self.diagnostics: list[Diagnostic] = []
        self.node_count = 0
        self.env_pushes = 0
        self.env_pops = 0
        self.brace_depth = 0
        self._hs = 0
        self._he = 0

    def mk(self, cls, *args):
        node = cls(*args)
        node.start = self._hs
        node.end = self._he
        node.node_id = self.node_count
        self.node_count += 1
        return node

    def rng(self, start: int, end: int) -> Range:
        return Range(self.lines.pos(start), self.lines.pos(end))

    def diag(self, severity: str, message: str, at, code: str = "") -> None:
        if isinstance(at, A.Node):
            rng = self.rng(at.start, at.end)
        elif isinstance(at, Token):
            rng = at.rng
        elif isinstance(at, Range):
            rng = at
        else:
            rng = self.rng(self._hs, self._he)
        self.diagnostics.append(Diagnostic(severity, message, self.doc, rng, code))

    def markup(self, kind: str, rng: Range, props: dict[str, str], doc: str = "") -> None:
        self.markups.append(Markup(kind, doc or self.doc, rng, props))


_tables_lock = threading.Lock()
_tables: Tables | None = None


def get_tables() -> Tables:
    """The LALR tables, built once per process and shared read-only."""
    global _tables
    with _tables_lock:
        if _tables is None:
            _tables = build_tables(productions(), START_SYMBOL)
        return _tables


class CParser:
    """Wrapper/action registries over the shared tables; instances are cheap,
    so callers who register custom wrappers should make their own."""

    def __init__(self):
        self.tables: Tables = get_tables()
        n = len(self.tables.productions)
        self.actions: list = [None] * n
        self.monadic_rules: set[int] = set()
        self.wrappers: list[list | None] = [None] * n
        for i, (lhs, rhs, action, monadic) in enumerate(GRAMMAR):
            self.actions[i + 1] = action  # +1: production 0 is $accept
            if monadic:
                self.monadic_rules.add(i + 1)
        self._arities = [len(p.rhs) for p in self.tables.productions]
        self._lhs_ids = [self.tables.nonterm_ids.get(p.lhs, -1)
                         for p in self.tables.productions]
        self._r_events = [("R", i, len(p.rhs))
                          for i, p in enumerate(self.tables.productions)]
        t = self.tables.term_ids
        self._ident_t = t["IDENT"]
        self._typedef_t = t["TYPEDEF_NAME"]
        self._eof_t = t[EOF]
        self._lit_t = {
            "integer_lit": t["INT_LIT"],
            "float_lit": t["FLOAT_LIT"],
            "char_lit": t["CHAR_LIT"],
            "string_lit": t["STR_LIT"],
        }
        self._kw_t = {k: t[k] for k in KEYWORDS if k in t}
        self._punct_t = {p: i for p, i in t.items() if not p[0].isalpha() and p not in (EOF,)}
        install_env_wrappers(self)

    # -- wrapper registry ---------------------------------------------------

    def find_rules(self, lhs: str, rhs0: str | None = None) -> list[int]:
        out = []
        for p in self.tables.productions:
            if p.lhs == lhs and (rhs0 is None or (p.rhs and p.rhs[0] == rhs0)):
                out.append(p.index)
        return out

    def add_wrapper(self, rule_id: int, fn) -> None:
        """Internal form: fn(env, vals, run, rnode) -> env."""
        if not 0 < rule_id < len(self.tables.productions):
            raise ValueError(f"unknown rule_id {rule_id}")
        if self.wrappers[rule_id] is None:
            self.wrappers[rule_id] = []
        self.wrappers[rule_id].append(fn)

    def register_wrapper(self, rule_id: int, hook) -> None:
        """Public form: hook(env, children_values) -> (env, markup list)."""

        def adapter(env, vals, run, rnode):
            env2, reports = hook(env, vals)
            run.markups.extend(reports)
            return env2

        self.add_wrapper(rule_id, adapter)

    def rule_display(self, rule_id: int) -> str:
        return str(self.tables.productions[rule_id])

    # -- the engine -----------------------------------------------------------

    def parse(self, tokens: list[Token], trivia: list[Trivia] | None = None,
              env0: Env | None = None, doc: str = "",
              lines: LineIndex | None = None) -> ParseResult:
        if lines is None:
            lines = tokens[0]._lines if tokens else LineIndex("")
        run = _Run(doc, lines)
        env = env0 if env0 is not None else Env.initial()
        forest = SRForest(self.tables.productions, frozenset(self.monadic_rules))
        env_changes: list[tuple[int, Env]] = [(0, env)]
        typedef_shifts: list[int] = []

        tables = self.tables
        action_rows = tables.action
        goto_rows = tables.goto
        default_reduce = tables.default_reduce
        actions = self.actions
        wrappers = self.wrappers
        arities = self._arities
        lhs_ids = self._lhs_ids
        r_events = self._r_events
        fast_rule = [arities[i] == 1 and actions[i] is None and wrappers[i] is None
                     for i in range(len(arities))]
        kw_t = self._kw_t
        punct_t = self._punct_t
        lit_t = self._lit_t
        ident_t = self._ident_t
        typedef_t = self._typedef_t
        eof_t = self._eof_t

        state_stack = [0]
        hs_stack: list[int] = []  # start offsets of the symbols on the stack
        he_stack: list[int] = []  # end offsets
        value_stack: list = []
        events = forest.events
        ast_links = forest._ast_links

        i = 0
        n = len(tokens)
        la_term = None
        la_tok: Token | None = None
        accepted = False
        ast_value = None

        def classify(tok: Token):
            k = tok.kind
            if k == "identifier":
                return typedef_t if env.is_typedef(tok.text) else ident_t
            if k == "keyword":
                t = kw_t.get(tok.name)
                if t is None:
                    run.diag("error", f"unsupported construct: {tok.name}", tok,
                             "unsupported-construct")
                return t
            if k == "punctuator":
                return punct_t.get(tok.name)
            return lit_t.get(k)

        def do_reduce(rule_id: int):
            nonlocal env
            arity = arities[rule_id]
            act = actions[rule_id]
            ws = wrappers[rule_id]
            if arity:
                vals = value_stack[-arity:]
                del value_stack[-arity:]
                del state_stack[-arity:]
                hs = hs_stack[-arity]
                he = he_stack[-1]
                del hs_stack[-arity:]
                del he_stack[-arity:]
            else:
                vals = []
                he = hs = he_stack[-1] if he_stack else 0
            events.append(r_events[rule_id])
            if act is None:
                value = vals[0] if vals else None
            else:
                run._hs = hs
                run._he = he
                value = act(run, vals)
            if ws is not None:
                run._hs = hs
                run._he = he
                for w in ws:
                    env = w(env, vals, run, None)
                env_changes.append((len(events) - 1, env))
            if isinstance(value, A.Node) and value.node_id not in ast_links:
                ast_links[value.node_id] = len(events) - 1
            value_stack.append(value)
            state_stack.append(goto_rows[state_stack[-1]][lhs_ids[rule_id]])
            hs_stack.append(hs)
            he_stack.append(he)

        def recover():
            # Abandon the current external declaration: resynchronize after the
            # next ';' or '}' at file depth 0, then restart at a fresh state.
            nonlocal i, la_term, la_tok, env
            depth = run.brace_depth
            while i < n:
                name = tokens[i].name
                if name == "{":
                    depth += 1
                elif name == "}":
                    depth -= 1
                    if depth <= 0:
                        i += 1
                        break
                elif name == ";" and depth <= 0:
                    i += 1
                    break
                i += 1
            la_term = None
            la_tok = None
            forest._resets.append(len(events))
            state_stack.clear()
            state_stack.append(0)
            hs_stack.clear()
            he_stack.clear()
            value_stack.clear()
            env = env.reset_to_global()
            env_changes.append((len(events), env))
            run.brace_depth = 0

        # the forest materialization builds parent links (reference cycles);
        # keep the cyclic collector away from the allocation-heavy loop
        gc_was_enabled = gc.isenabled()
        gc.disable()
        try:
            while True:
                st = state_stack[-1]
                dr = default_reduce[st]
                if dr is not None:
                    if fast_rule[dr]:
                        events.append(r_events[dr])
                        state_stack[-1] = goto_rows[state_stack[-2]][lhs_ids[dr]]
                        continue
                    do_reduce(dr)
                    continue
                if la_term is None:
                    if i < n:
                        la_tok = tokens[i]
                        la_term = classify(la_tok)
                        if la_term is None:
                            recover()
                            continue
                    else:
                        la_tok = None
                        la_term = eof_t
                act = action_rows[st].get(la_term)
                if act is None:
                    expected = tables.expected_terminals(st)
                    at = la_tok if la_tok is not None else (tokens[-1] if tokens else None)
                    where = at.rng if at is not None else run.rng(0, 0)
                    shown = ", ".join(expected[:12]) + ("..." if len(expected) > 12 else "")
                    got = la_tok.text if la_tok is not None else "end of input"
                    run.diagnostics.append(Diagnostic(
                        "error", f"syntax error: unexpected {got!r}; expected one of: {shown}",
                        la_tok.doc if la_tok is not None and la_tok.doc else doc, where,
                        "syntax-error"))
                    if la_tok is None:
                        break
                    recover()
                    continue
                if act > 0:  # shift
                    events.append(("S", i))
                    value_stack.append(la_tok)
                    state_stack.append(act - 1)
                    hs_stack.append(la_tok.start)
                    he_stack.append(la_tok.end)
                    if la_term == typedef_t:
                        typedef_shifts.append(i)
                        b = env.lookup(la_tok.text)
                        run.markup("typedef_name", la_tok.rng, {"name": la_tok.text},
                                   la_tok.doc)
                        if b is not None:
                            run.markup("entity_use", la_tok.rng,
                                       {"name": la_tok.text, "kind": b.kind,
                                        "type_text": b.type_text,
                                        "def_serial": str(b.serial)},
                                       la_tok.doc)
                    name = la_tok.name
                    if name == "{":
                        run.brace_depth += 1
                    elif name == "}":
                        run.brace_depth -= 1
                    i += 1
                    la_term = None
                    la_tok = None
                    continue
                if act == 0:  # accept
                    accepted = True
                    ast_value = value_stack[-1] if value_stack else None
                    break
                rid = -act - 1
                if fast_rule[rid]:
                    events.append(r_events[rid])
                    state_stack[-1] = goto_rows[state_stack[-2]][lhs_ids[rid]]
                    continue
                do_reduce(rid)
        finally:
            if gc_was_enabled:
                gc.enable()

        forest.tokens = tokens
        if ast_value is None:
            ast_value = A.TranslationUnit(tuple(run.externals))
            ast_value.start = 0
            ast_value.end = tokens[-1].end if tokens else 0
            ast_value.node_id = run.node_count
            run.node_count += 1

        result = ParseResult(ast_value, forest, env, run.markups, run.diagnostics)
        result.envs_by_event = EnvTimeline(env_changes, len(events))
        result.typedef_shifts = typedef_shifts
        result.tokens = tokens
        result.accepted = accepted and not any(
            d.severity == "error" for d in run.diagnostics)
        result.env_pushes = run.env_pushes
        result.env_pops = run.env_pops
        return result


_parser_lock = threading.Lock()
_parser: CParser | None = None


def get_parser() -> CParser:
    """The shared parser instance; tables are built on first use."""
    global _parser
    with _parser_lock:
        if _parser is None:
            _parser = CParser()
        return _parser
