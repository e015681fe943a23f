"""LALR(1) table construction.

Builds the shift/reduce automaton at program start from a grammar description:
LR(0) canonical collection, then kernel lookaheads via spontaneous generation
and propagation, then table assembly.  Shift/reduce conflicts resolve in favor
of shifting (recorded, so tests can assert the only one left is the dangling
else); reduce/reduce picks the earlier production.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

EOF = "$end"
_HASH = -1  # dummy lookahead used during propagation discovery


@dataclass(frozen=True)
class Production:
    index: int
    lhs: str
    rhs: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.lhs} -> {' '.join(self.rhs) or '<empty>'}"


@dataclass
class Conflict:
    kind: str  # "shift/reduce" | "reduce/reduce"
    state: int
    terminal: str
    chosen: str
    dropped: str


class Tables:
    """The runtime-facing result: integer-coded ACTION/GOTO plus metadata.

    Action encoding: a > 0 shift to state a-1; a < 0 reduce production -a-1;
    a == 0 accept.
    """

    def __init__(self, n_states: int, term_ids: dict[str, int], nonterm_ids: dict[str, int],
                 productions: list[Production]):
        self.term_ids = term_ids
        self.nonterm_ids = nonterm_ids
        self.term_names = {v: k for k, v in term_ids.items()}
        self.productions = productions
        self.action: list[dict[int, int]] = [dict() for _ in range(n_states)]
        self.goto: list[dict[int, int]] = [dict() for _ in range(n_states)]
        self.default_reduce: list[int | None] = [None] * n_states
        self.conflicts: list[Conflict] = []

    def expected_terminals(self, state: int) -> list[str]:
        return sorted(self.term_names[t] for t in self.action[state])

    def finalize_defaults(self) -> None:
        # A state whose actions are one uniform reduction can reduce without
        # consulting the lookahead; this also lets typedef feedback from a
        # just-finished declaration affect the very next token.
        for s, row in enumerate(self.action):
            if not row:
                continue
            vals = set(row.values())
            if len(vals) == 1:
                a = next(iter(vals))
                if a < 0:
                    self.default_reduce[s] = -a - 1


def build_tables(prods_in: list[tuple[str, tuple[str, ...]]], start: str) -> Tables:
    # -- numbering ---------------------------------------------------------
    lhs_set = {lhs for lhs, _ in prods_in}
    symbols: set[str] = set(lhs_set)
    for _, rhs in prods_in:
        symbols.update(rhs)
    terminals = sorted(symbols - lhs_set) + [EOF]
    nonterminals = sorted(lhs_set) + ["$accept"]
    term_ids = {t: i for i, t in enumerate(terminals)}
    nonterm_ids = {n: i for i, n in enumerate(nonterminals)}

    productions = [Production(0, "$accept", (start,))]
    for lhs, rhs in prods_in:
        productions.append(Production(len(productions), lhs, tuple(rhs)))
    prods_by_lhs: dict[str, list[Production]] = {}
    for p in productions:
        prods_by_lhs.setdefault(p.lhs, []).append(p)

    # -- nullable / FIRST ---------------------------------------------------
    nullable: set[str] = set()
    changed = True
    while changed:
        changed = False
        for p in productions:
            if p.lhs not in nullable and all(s in nullable for s in p.rhs):
                nullable.add(p.lhs)
                changed = True
    first: dict[str, frozenset[int]] = {t: frozenset([term_ids[t]]) for t in terminals}
    fsets: dict[str, set[int]] = {n: set() for n in nonterminals}
    changed = True
    while changed:
        changed = False
        for p in productions:
            target = fsets[p.lhs]
            before = len(target)
            for s in p.rhs:
                if s in term_ids:
                    target.add(term_ids[s])
                    break
                target |= fsets[s]
                if s not in nullable:
                    break
            if len(target) != before:
                changed = True
    for n in nonterminals:
        first[n] = frozenset(fsets[n])

    def first_of_seq(seq: Iterable[str], tail: frozenset[int]) -> frozenset[int]:
        out: set[int] = set()
        for s in seq:
            out |= first[s]
            if s not in nullable:
                return frozenset(out)
        return frozenset(out | tail)

    # -- LR(0) collection ---------------------------------------------------
    # items are (prod_index, dot); states are frozensets of kernel items
    def lr0_closure(kernel: frozenset[tuple[int, int]]) -> set[tuple[int, int]]:
        out = set(kernel)
        work = list(kernel)
        seen_nt: set[str] = set()
        while work:
            pi, dot = work.pop()
            rhs = productions[pi].rhs
            if dot < len(rhs):
                nxt = rhs[dot]
                if nxt in nonterm_ids and nxt not in seen_nt:
                    seen_nt.add(nxt)
                    for q in prods_by_lhs.get(nxt, ()):
                        item = (q.index, 0)
                        if item not in out:
                            out.add(item)
                            work.append(item)
        return out

    start_kernel = frozenset({(0, 0)})
    states: list[frozenset[tuple[int, int]]] = [start_kernel]
    state_ids: dict[frozenset[tuple[int, int]], int] = {start_kernel: 0}
    transitions: list[dict[str, int]] = []
    i = 0
    while i < len(states):
        kernel = states[i]
        closure = lr0_closure(kernel)
        moves: dict[str, set[tuple[int, int]]] = {}
        for pi, dot in closure:
            rhs = productions[pi].rhs
            if dot < len(rhs):
                moves.setdefault(rhs[dot], set()).add((pi, dot + 1))
        row: dict[str, int] = {}
        for sym, items in moves.items():
            tgt = frozenset(items)
            if tgt not in state_ids:
                state_ids[tgt] = len(states)
                states.append(tgt)
            row[sym] = state_ids[tgt]
        transitions.append(row)
        i += 1

    # -- lookaheads: spontaneous + propagation ------------------------------
    def lr1_closure(seed: list[tuple[int, int, frozenset[int]]]):
        """Close a set of (prod, dot, lookahead-set) items."""
        las: dict[tuple[int, int], set[int]] = {}
        work: list[tuple[int, int]] = []
        for pi, dot, la in seed:
            cur = las.setdefault((pi, dot), set())
            if not la <= cur:
                cur |= la
                work.append((pi, dot))
        while work:
            pi, dot = work.pop()
            rhs = productions[pi].rhs
            if dot >= len(rhs):
                continue
            nxt = rhs[dot]
            if nxt not in nonterm_ids:
                continue
            tail = frozenset(las[(pi, dot)])
            la_new = first_of_seq(rhs[dot + 1:], tail)
            for q in prods_by_lhs.get(nxt, ()):
                key = (q.index, 0)
                cur = las.setdefault(key, set())
                if not la_new <= cur:
                    cur |= la_new
                    work.append(key)
        return las

    kernel_la: dict[tuple[int, int, int], set[int]] = {}  # (state, prod, dot) -> lookaheads
    propagate: dict[tuple[int, int, int], list[tuple[int, int, int]]] = {}
    eof_id = term_ids[EOF]
    kernel_la[(0, 0, 0)] = {eof_id}

    for s, kernel in enumerate(states):
        for pi, dot in kernel:
            kernel_la.setdefault((s, pi, dot), set())
            las = lr1_closure([(pi, dot, frozenset([_HASH]))])
            for (qi, qdot), laset in las.items():
                rhs = productions[qi].rhs
                if qdot >= len(rhs):
                    continue
                sym = rhs[qdot]
                tgt_state = transitions[s][sym]
                tgt_key = (tgt_state, qi, qdot + 1)
                for la in laset:
                    if la == _HASH:
                        propagate.setdefault((s, pi, dot), []).append(tgt_key)
                    else:
                        kernel_la.setdefault(tgt_key, set()).add(la)

    changed = True
    while changed:
        changed = False
        for src, targets in propagate.items():
            src_las = kernel_la.get(src)
            if not src_las:
                continue
            for tgt in targets:
                cur = kernel_la.setdefault(tgt, set())
                before = len(cur)
                cur |= src_las
                if len(cur) != before:
                    changed = True

    # -- table assembly ------------------------------------------------------
    tables = Tables(len(states), term_ids, nonterm_ids, productions)

    for s, kernel in enumerate(states):
        row = tables.action[s]
        for sym, tgt in transitions[s].items():
            if sym in term_ids:
                row[term_ids[sym]] = tgt + 1
            else:
                tables.goto[s][nonterm_ids[sym]] = tgt
        seed = [(pi, dot, frozenset(kernel_la.get((s, pi, dot), ()))) for pi, dot in kernel]
        las = lr1_closure(seed)
        for (pi, dot), laset in sorted(las.items()):
            rhs = productions[pi].rhs
            if dot < len(rhs):
                continue
            for la in sorted(laset):
                if la == _HASH:
                    continue
                if pi == 0:
                    row[la] = 0  # accept
                    continue
                code = -pi - 1
                prev = row.get(la)
                if prev is None:
                    row[la] = code
                elif prev > 0:
                    tables.conflicts.append(Conflict(
                        "shift/reduce", s, tables.term_names[la],
                        f"shift to {prev - 1}", str(productions[pi])))
                elif prev == 0:
                    pass
                elif prev != code:
                    keep, drop = (prev, code) if -prev < -code else (code, prev)
                    row[la] = keep
                    tables.conflicts.append(Conflict(
                        "reduce/reduce", s, tables.term_names[la],
                        str(productions[-keep - 1]), str(productions[-drop - 1])))

    tables.finalize_defaults()
    return tables
