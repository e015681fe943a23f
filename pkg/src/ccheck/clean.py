"""An executable state-exception semantics for CoreC: break/return flags,
stack-lifted locals, unbounded integer values.

Values live on the mathematical integers; overflow is observable only through
explicit `assert` statements.  Every procedure entry pushes one slot on every
local's stack (and the result stack); exit pops them, so direct recursion
works through stack depth.  Failure (assert violation, empty-stack read,
missing return value) is terminal: a failed state executes nothing further.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import lower as L
from .reports import Diagnostic

EvalFn = Callable[["CleanState"], int]


class CleanFailure(Exception):
    """Raised internally to unwind evaluation into the terminal failed state."""


class FlagViolation(AssertionError):
    """Instrumentation: a store write happened while a control flag was set."""


@dataclass
class CleanState:
    break_val: bool = False
    return_val: bool = False
    globals: dict = field(default_factory=dict)
    locals: dict = field(default_factory=dict)  # name -> stack (list)
    result: list = field(default_factory=list)
    failed: str | None = None
    instrument: bool = False
    write_log: list = field(default_factory=list)

    def flags_set(self) -> bool:
        return self.break_val or self.return_val or self.failed is not None

    def note_write(self, name: str) -> None:
        if self.instrument:
            if self.break_val or self.return_val or self.failed is not None:
                raise FlagViolation(
                    f"store write to '{name}' under break/return/failed flags")
            self.write_log.append(name)


# -- statements -------------------------------------------------------------------

class SAssign:
    __slots__ = ("kind", "name", "index", "value")

    def __init__(self, kind: str, name: str, index: EvalFn | None, value: EvalFn):
        self.kind = kind  # "local" | "global"
        self.name = name
        self.index = index
        self.value = value


class SIf:
    __slots__ = ("cond", "then", "els")

    def __init__(self, cond: EvalFn, then, els):
        self.cond = cond
        self.then = then
        self.els = els


class SWhile:
    __slots__ = ("cond", "body")

    def __init__(self, cond: EvalFn, body):
        self.cond = cond
        self.body = body


class SReturn:
    __slots__ = ("value",)

    def __init__(self, value: EvalFn | None):
        self.value = value


class SBreak:
    __slots__ = ()


class SSkip:
    __slots__ = ()


class SSeq:
    __slots__ = ("stmts",)

    def __init__(self, stmts):
        self.stmts = stmts


class SCallStmt:
    __slots__ = ("value",)

    def __init__(self, value: EvalFn):
        self.value = value


class SAssert:
    __slots__ = ("cond", "label")

    def __init__(self, cond: EvalFn, label: str):
        self.cond = cond
        self.label = label


@dataclass
class CleanProc:
    name: str
    params: tuple[str, ...]
    locals: tuple[tuple[str, bool, int | None], ...]  # (name, is_array, size)
    body: object
    returns_value: bool


@dataclass
class CleanProgram:
    procs: dict[str, CleanProc] = field(default_factory=dict)
    global_init: dict = field(default_factory=dict)
    constants: dict[str, int] = field(default_factory=dict)

    def initial_state(self) -> CleanState:
        st = CleanState()
        for name, v in self.global_init.items():
            st.globals[name] = list(v) if isinstance(v, list) else v
        names = set()
        for p in self.procs.values():
            names.update(p.params)
            names.update(n for n, _, _ in p.locals)
        st.locals = {n: [] for n in names}
        return st


# -- integer semantics ----------------------------------------------------------------

def c_div(a: int, b: int) -> int:
    if b == 0:
        raise CleanFailure("division by zero")
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


def c_mod(a: int, b: int) -> int:
    return a - c_div(a, b) * b


def c_shl(a: int, b: int) -> int:
    if b < 0:
        raise CleanFailure("negative shift")
    return a << b


def c_shr(a: int, b: int) -> int:
    if b < 0:
        raise CleanFailure("negative shift")
    return a >> b


_BINOPS: dict[str, Callable[[int, int], int]] = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": c_div,
    "%": c_mod,
    "<<": c_shl,
    ">>": c_shr,
    "<": lambda a, b: 1 if a < b else 0,
    ">": lambda a, b: 1 if a > b else 0,
    "<=": lambda a, b: 1 if a <= b else 0,
    ">=": lambda a, b: 1 if a >= b else 0,
    "==": lambda a, b: 1 if a == b else 0,
    "!=": lambda a, b: 1 if a != b else 0,
    "&": lambda a, b: a & b,
    "^": lambda a, b: a ^ b,
    "|": lambda a, b: a | b,
}

_UNOPS: dict[str, Callable[[int], int]] = {
    "-": lambda a: -a,
    "+": lambda a: a,
    "~": lambda a: ~a,
    "!": lambda a: 1 if a == 0 else 0,
}


# -- translation -------------------------------------------------------------------------

@dataclass
class TranslateError(Exception):
    message: str

    def __str__(self) -> str:
        return self.message


class Translator:
    def __init__(self, core: L.CoreProgram, constants: dict[str, int] | None = None):
        self.core = core
        self.constants = dict(constants or {})
        self.program = CleanProgram(constants=self.constants)
        self.diagnostics: list[Diagnostic] = []
        self._untranslatable = {f.name for f in core.functions if not f.translatable}

    def translate(self) -> CleanProgram:
        for g in self.core.globals:
            if g.is_array:
                size = g.size if g.size is not None else (
                    len(g.init) if isinstance(g.init, list) else 0)
                vals = list(g.init) if isinstance(g.init, list) else []
                vals += [0] * (size - len(vals))
                self.program.global_init[g.name] = vals
            else:
                self.program.global_init[g.name] = g.init if g.init is not None else None
        for f in self.core.functions:
            if not f.translatable:
                continue
            self.program.procs[f.name] = self._proc(f)
        return self.program

    def _proc(self, f: L.CoreFunc) -> CleanProc:
        local_names = {n for n, _, _, _ in f.locals} | set(n for n, _ in f.params)
        env = _ProcEnv(self, f.name, local_names)
        body = env.stmt(f.body)
        returns_value = f.ret_type.strip() != "void"
        return CleanProc(f.name, tuple(n for n, _ in f.params),
                         tuple((n, a, s) for n, _, a, s in f.locals), body,
                         returns_value)


class _ProcEnv:
    def __init__(self, tr: Translator, fn_name: str, local_names: set[str]):
        self.tr = tr
        self.fn = fn_name
        self.local_names = local_names

    # expressions compile to state -> value closures, so an assignment carries
    # exactly the paper-shaped `assign (lambda state: ...)` payload
    def expr(self, e: L.CoreNode) -> EvalFn:
        if isinstance(e, L.CInt):
            v = e.value
            return lambda st: v
        if isinstance(e, L.CVar):
            name = e.name
            if name in self.local_names:
                def read_local(st: CleanState) -> int:
                    stack = st.locals.get(name)
                    if not stack:
                        raise CleanFailure(f"read of '{name}' with an empty local stack")
                    v = stack[-1]
                    if v is None:
                        raise CleanFailure(f"read of uninitialized local '{name}'")
                    return v
                return read_local
            program = self.tr.program

            def read_global(st: CleanState) -> int:
                if name in st.globals:
                    v = st.globals[name]
                    if v is None:
                        raise CleanFailure(f"read of uninitialized global '{name}'")
                    return v
                if name in program.constants:
                    return program.constants[name]
                raise CleanFailure(f"unbound variable '{name}'")
            return read_global
        if isinstance(e, L.CBin):
            op = e.op
            left = self.expr(e.left)
            right = self.expr(e.right)
            if op == "&&":
                return lambda st: 1 if left(st) != 0 and right(st) != 0 else 0
            if op == "||":
                return lambda st: 1 if left(st) != 0 or right(st) != 0 else 0
            fn = _BINOPS[op]
            return lambda st: fn(left(st), right(st))
        if isinstance(e, L.CUn):
            fn = _UNOPS.get(e.op)
            if fn is None:
                raise TranslateError(f"operator '{e.op}' has no Clean semantics")
            sub = self.expr(e.operand)
            return lambda st: fn(sub(st))
        if isinstance(e, L.CCall):
            name = e.fn
            if name in self.tr._untranslatable:
                raise TranslateError(
                    f"'{self.fn}' calls untranslatable function '{name}'")
            args = [self.expr(a) for a in e.args]
            program = self.tr.program

            def do_call(st: CleanState) -> int:
                vals = [a(st) for a in args]
                v = call_proc(program, st, name, vals)
                if v is None:
                    raise CleanFailure(f"'{name}' produced no result value")
                return v
            return do_call
        if isinstance(e, L.CIndex):
            if not isinstance(e.base, L.CVar):
                raise TranslateError("indexing requires a named array")
            name = e.base.name
            idx = self.expr(e.index)
            is_local = name in self.local_names

            def read_elem(st: CleanState) -> int:
                arr = self._array(st, name, is_local)
                i = idx(st)
                if not 0 <= i < len(arr):
                    raise CleanFailure(f"index {i} out of bounds for '{name}'")
                return arr[i]
            return read_elem
        if isinstance(e, L.CMember):
            raise TranslateError("member access has no Clean semantics")
        raise TranslateError(f"expression {type(e).__name__} has no Clean semantics")

    @staticmethod
    def _array(st: CleanState, name: str, is_local: bool) -> list:
        if is_local:
            stack = st.locals.get(name)
            if not stack:
                raise CleanFailure(f"read of '{name}' with an empty local stack")
            arr = stack[-1]
        else:
            arr = st.globals.get(name)
        if not isinstance(arr, list):
            raise CleanFailure(f"'{name}' is not an array")
        return arr

    def stmt(self, s: L.CoreNode):
        if isinstance(s, L.CSkip):
            return SSkip()
        if isinstance(s, L.CSeq):
            return SSeq(tuple(self.stmt(x) for x in s.stmts))
        if isinstance(s, L.CAssign):
            value = self.expr(s.value)
            if isinstance(s.target, L.CVar):
                name = s.target.name
                kind = "local" if name in self.local_names else "global"
                return SAssign(kind, name, None, value)
            if isinstance(s.target, L.CIndex) and isinstance(s.target.base, L.CVar):
                name = s.target.base.name
                kind = "local" if name in self.local_names else "global"
                return SAssign(kind, name, self.expr(s.target.index), value)
            raise TranslateError("unsupported assignment target")
        if isinstance(s, L.CIf):
            return SIf(self.expr(s.cond), self.stmt(s.then), self.stmt(s.els))
        if isinstance(s, L.CWhile):
            return SWhile(self.expr(s.cond), self.stmt(s.body))
        if isinstance(s, L.CReturn):
            return SReturn(self.expr(s.expr) if s.expr is not None else None)
        if isinstance(s, L.CBreak):
            return SBreak()
        if isinstance(s, L.CCallStmt):
            e = s.call
            if e.fn in self.tr._untranslatable:
                raise TranslateError(
                    f"'{self.fn}' calls untranslatable function '{e.fn}'")
            args = [self.expr(a) for a in e.args]
            program = self.tr.program
            name = e.fn

            def run_call(st: CleanState):
                call_proc(program, st, name, [a(st) for a in args])
                return 0
            return SCallStmt(run_call)
        if isinstance(s, L.CAssert):
            return SAssert(self.expr(s.expr), f"{self.fn}:{s.start}-{s.end}")
        raise TranslateError(f"statement {type(s).__name__} has no Clean semantics")


def translate(core: L.CoreProgram,
              constants: dict[str, int] | None = None) -> CleanProgram:
    """Build the Clean program; raises TranslateError on untranslatable references."""
    return Translator(core, constants).translate()


# -- execution -------------------------------------------------------------------------

def exec_stmt(state: CleanState, stmt) -> CleanState:
    """Execute one statement; flag-aware sequencing and loops."""
    if state.failed is not None:
        return state
    try:
        _exec(state, stmt)
    except CleanFailure as e:
        state.failed = str(e)
    return state


def _exec(st: CleanState, s) -> None:
    if isinstance(s, SSkip):
        return
    if isinstance(s, SSeq):
        for sub in s.stmts:
            if st.break_val or st.return_val or st.failed is not None:
                return
            _exec(st, sub)
        return
    if isinstance(s, SAssign):
        v = s.value(st)
        st.note_write(s.name)
        if s.index is None:
            if s.kind == "local":
                stack = st.locals.get(s.name)
                if not stack:
                    raise CleanFailure(
                        f"write to '{s.name}' with an empty local stack")
                stack[-1] = v
            else:
                if s.name not in st.globals:
                    raise CleanFailure(f"write to unbound global '{s.name}'")
                st.globals[s.name] = v
        else:
            arr = _ProcEnv._array(st, s.name, s.kind == "local")
            i = s.index(st)
            if not 0 <= i < len(arr):
                raise CleanFailure(f"index {i} out of bounds for '{s.name}'")
            arr[i] = v
        return
    if isinstance(s, SIf):
        if s.cond(st) != 0:
            _exec(st, s.then)
        else:
            _exec(st, s.els)
        return
    if isinstance(s, SWhile):
        while True:
            if st.break_val or st.return_val or st.failed is not None:
                break
            if s.cond(st) == 0:
                break
            _exec(st, s.body)
        if st.break_val:
            st.break_val = False  # break binds to the nearest loop
        return
    if isinstance(s, SReturn):
        if s.value is not None:
            v = s.value(st)
            st.note_write("result")
            if not st.result:
                raise CleanFailure("return outside any call frame")
            st.result[-1] = v
        st.return_val = True
        return
    if isinstance(s, SBreak):
        st.break_val = True
        return
    if isinstance(s, SCallStmt):
        s.value(st)  # result value, if any, is discarded
        return
    if isinstance(s, SAssert):
        if s.cond(st) == 0:
            raise CleanFailure(f"assertion failed at {s.label}")
        return
    raise CleanFailure(f"unknown statement {type(s).__name__}")


def call_proc(program: CleanProgram, st: CleanState, name: str, args: list):
    """Push a frame, run the body, read the result head, pop, clear return_val."""
    proc = program.procs.get(name)
    if proc is None:
        raise CleanFailure(f"call to unknown function '{name}'")
    if len(args) != len(proc.params):
        raise CleanFailure(
            f"'{name}' expects {len(proc.params)} argument(s), got {len(args)}")
    for p, v in zip(proc.params, args):
        st.locals.setdefault(p, []).append(v)
    for lname, is_array, size in proc.locals:
        st.locals.setdefault(lname, []).append([0] * (size or 0) if is_array else None)
    st.result.append(None)
    try:
        _exec(st, proc.body)
    finally:
        value = st.result.pop()
        for p in proc.params:
            st.locals[p].pop()
        for lname, _, _ in proc.locals:
            st.locals[lname].pop()
        st.return_val = False
    if st.failed is not None:
        raise CleanFailure(st.failed)
    if value is None and proc.returns_value:
        raise CleanFailure(f"'{name}' returned without a result value")
    return value


def call(program: CleanProgram, name: str, args: list,
         instrument: bool = False) -> tuple[object, CleanState]:
    """Run one procedure from a fresh initial state.

    Returns (value, final state); failures land in state.failed with value None.
    """
    st = program.initial_state()
    st.instrument = instrument
    try:
        value = call_proc(program, st, name, list(args))
    except CleanFailure as e:
        if st.failed is None:
            st.failed = str(e)
        return None, st
    return value, st
