"""Lowering from the C11 AST to CoreC, the reduced core for semantic back-ends.

CoreC keeps int-like scalars, opaque pointers and arrays of scalars; `for`,
`do`, compound assignment and `++`/`--` are desugared away.  Unsupported
constructs (goto, switch, varargs, member access, address arithmetic, ...)
produce one diagnostic each, naming the construct and its range, and mark the
enclosing function untranslatable; lowering always continues with the rest of
the translation unit.

`assert(e);` call statements become CoreC assert statements, the executable
overflow-check idiom of the imperative back-end.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import c_ast as A
from .annot import SpecAttachment
from .env import base_type_text, find_dname, type_text
from .preproc import parse_int_literal
from .reports import Diagnostic
from .source import LineIndex, Range


@dataclass(eq=False)
class CoreNode:
    def __post_init__(self):
        self.start = 0
        self.end = 0
        self.meta: dict[str, list[str]] = {}


# expressions
@dataclass(eq=False)
class CInt(CoreNode):
    value: int


@dataclass(eq=False)
class CVar(CoreNode):
    name: str


@dataclass(eq=False)
class CBin(CoreNode):
    op: str
    left: CoreNode
    right: CoreNode


@dataclass(eq=False)
class CUn(CoreNode):
    op: str
    operand: CoreNode


@dataclass(eq=False)
class CCall(CoreNode):
    fn: str
    args: tuple[CoreNode, ...]


@dataclass(eq=False)
class CIndex(CoreNode):
    base: CoreNode
    index: CoreNode


@dataclass(eq=False)
class CMember(CoreNode):
    base: CoreNode
    name: str
    arrow: bool


# statements
@dataclass(eq=False)
class CAssign(CoreNode):
    target: CoreNode  # CVar or CIndex
    value: CoreNode


@dataclass(eq=False)
class CIf(CoreNode):
    cond: CoreNode
    then: CoreNode
    els: CoreNode


@dataclass(eq=False)
class CWhile(CoreNode):
    cond: CoreNode
    body: CoreNode


@dataclass(eq=False)
class CReturn(CoreNode):
    expr: CoreNode | None


@dataclass(eq=False)
class CBreak(CoreNode):
    pass


@dataclass(eq=False)
class CSkip(CoreNode):
    pass


@dataclass(eq=False)
class CSeq(CoreNode):
    stmts: tuple[CoreNode, ...]


@dataclass(eq=False)
class CCallStmt(CoreNode):
    call: CCall


@dataclass(eq=False)
class CAssert(CoreNode):
    expr: CoreNode


@dataclass(eq=False)
class CoreGlobal(CoreNode):
    name: str
    type_text: str
    is_array: bool
    size: int | None
    init: object  # int | list[int] | None


@dataclass(eq=False)
class CoreFunc(CoreNode):
    name: str
    params: tuple[tuple[str, str], ...]  # (name, type_text)
    ret_type: str
    body: CoreNode
    locals: tuple[tuple[str, str, bool, int | None], ...] = ()
    translatable: bool = True


@dataclass
class CoreProgram:
    globals: list[CoreGlobal] = field(default_factory=list)
    functions: list[CoreFunc] = field(default_factory=list)

    def function(self, name: str) -> CoreFunc | None:
        for f in self.functions:
            if f.name == name:
                return f
        return None


_SUPPORTED_BINOPS = frozenset(
    {"+", "-", "*", "/", "%", "<<", ">>", "<", ">", "<=", ">=", "==", "!=",
     "&", "^", "|", "&&", "||"})

_CHAR_ESCAPES = {"n": 10, "t": 9, "r": 13, "0": 0, "\\": 92, "'": 39, '"': 34,
                 "a": 7, "b": 8, "f": 12, "v": 11}


def char_value(text: str) -> int | None:
    body = text[text.index("'") + 1:-1]
    if len(body) == 1:
        return ord(body)
    if len(body) == 2 and body[0] == "\\" and body[1] in _CHAR_ESCAPES:
        return _CHAR_ESCAPES[body[1]]
    return None


class Lowerer:
    def __init__(self, doc: str = "", lines: LineIndex | None = None):
        self.doc = doc
        self.lines = lines
        self.diagnostics: list[Diagnostic] = []
        self._fn_ok = True
        self._locals: list[tuple[str, str, bool, int | None]] = []
        self._local_names: set[str] = set()

    def rng(self, node) -> Range | None:
        if self.lines is None:
            return None
        return Range(self.lines.pos(node.start), self.lines.pos(node.end))

    def unsupported(self, construct: str, node) -> None:
        self._fn_ok = False
        self.diagnostics.append(Diagnostic(
            "warning", f"unsupported: {construct}", self.doc, self.rng(node),
            "untranslatable"))

    def mk(self, cls, node, *args):
        out = cls(*args)
        out.start = node.start
        out.end = node.end
        return out

    # -- expressions --------------------------------------------------------

    def expr(self, e: A.Node) -> CoreNode:
        if isinstance(e, A.IntLit):
            return self.mk(CInt, e, parse_int_literal(e.text))
        if isinstance(e, A.CharLit):
            v = char_value(e.text)
            if v is None:
                self.unsupported("multi-character literal", e)
                v = 0
            return self.mk(CInt, e, v)
        if isinstance(e, A.Ident):
            return self.mk(CVar, e, e.name)
        if isinstance(e, A.Binary):
            if e.op not in _SUPPORTED_BINOPS:
                self.unsupported(f"operator '{e.op}' in expression", e)
                return self.mk(CInt, e, 0)
            return self.mk(CBin, e, e.op, self.expr(e.left), self.expr(e.right))
        if isinstance(e, A.Unary):
            if e.op in ("-", "+", "~", "!") and not e.postfix:
                return self.mk(CUn, e, e.op, self.expr(e.operand))
            if e.op in ("&", "*"):
                self.unsupported("pointer address-of/dereference", e)
                return self.mk(CInt, e, 0)
            self.unsupported(f"'{e.op}' inside an expression", e)
            return self.mk(CInt, e, 0)
        if isinstance(e, A.Call):
            if not isinstance(e.fn, A.Ident):
                self.unsupported("call through a function pointer", e)
                return self.mk(CInt, e, 0)
            return self.mk(CCall, e, e.fn.name, tuple(self.expr(a) for a in e.args))
        if isinstance(e, A.Index):
            return self.mk(CIndex, e, self.expr(e.base), self.expr(e.index))
        if isinstance(e, A.Member):
            self.unsupported("member access (no memory model)", e)
            return self.mk(CMember, e, self.expr(e.base), e.name, e.arrow)
        if isinstance(e, A.Cast):
            # int-like casts are identity under unbounded integer values
            return self.expr(e.expr)
        if isinstance(e, A.Assign):
            self.unsupported("assignment inside an expression", e)
            return self.mk(CInt, e, 0)
        if isinstance(e, A.Cond):
            self.unsupported("conditional expression", e)
            return self.mk(CInt, e, 0)
        self.unsupported(f"{type(e).__name__} expression", e)
        return self.mk(CInt, e, 0)

    def lvalue(self, e: A.Node) -> CoreNode:
        if isinstance(e, A.Ident):
            return self.mk(CVar, e, e.name)
        if isinstance(e, A.Index):
            return self.mk(CIndex, e, self.expr(e.base), self.expr(e.index))
        self.unsupported("assignment target", e)
        return self.mk(CVar, e, "<bad>")

    # -- statements ----------------------------------------------------------

    _COMPOUND_OPS = {"+=": "+", "-=": "-", "*=": "*", "/=": "/", "%=": "%",
                     "<<=": "<<", ">>=": ">>", "&=": "&", "^=": "^", "|=": "|"}

    def stmt_expr(self, e: A.Node) -> CoreNode:
        """An expression in statement position."""
        if isinstance(e, A.Assign):
            target = self.lvalue(e.target)
            if e.op == "=":
                return self.mk(CAssign, e, target, self.expr(e.value))
            base = self._COMPOUND_OPS[e.op]
            read = self.expr(e.target)
            return self.mk(CAssign, e, target,
                           self.mk(CBin, e, base, read, self.expr(e.value)))
        if isinstance(e, A.Unary) and e.op in ("++", "--"):
            target = self.lvalue(e.operand)
            read = self.expr(e.operand)
            op = "+" if e.op == "++" else "-"
            one = self.mk(CInt, e, 1)
            return self.mk(CAssign, e, target, self.mk(CBin, e, op, read, one))
        if isinstance(e, A.Call):
            if isinstance(e.fn, A.Ident) and e.fn.name == "assert" and len(e.args) == 1:
                return self.mk(CAssert, e, self.expr(e.args[0]))
            call = self.expr(e)
            if isinstance(call, CCall):
                return self.mk(CCallStmt, e, call)
            return self.mk(CSkip, e)
        if isinstance(e, A.Binary) and e.op == ",":
            return self.mk(CSeq, e, (self.stmt_expr(e.left), self.stmt_expr(e.right)))
        if self._has_calls(e):
            self.unsupported("effectful expression statement", e)
            return self.mk(CSkip, e)
        return self.mk(CSkip, e)  # value-discarding pure expression

    def _has_calls(self, e: A.Node) -> bool:
        return any(isinstance(n, A.Call) for n in A.walk(e))

    def local_decl(self, d: A.Declaration) -> CoreNode:
        out: list[CoreNode] = []
        if "typedef" in d.specs.storage:
            return self.mk(CSkip, d)
        for idecl in d.inits:
            name = A.declarator_name(idecl.decl)
            if name is None:
                continue
            if A.declarator_kind(idecl.decl) == "function":
                continue  # local prototypes produce no storage
            is_array, size, bad = self._shape(idecl.decl)
            if bad:
                self.unsupported(f"declarator shape for '{name}'", idecl)
                continue
            if name in self._local_names:
                self.unsupported(
                    f"duplicate local name '{name}' (shadowing across blocks)", idecl)
                continue
            self._local_names.add(name)
            self._locals.append((name, type_text(d.specs, idecl.decl), is_array, size))
            if idecl.init is not None:
                if isinstance(idecl.init, A.InitList):
                    self.unsupported("aggregate initializer for a local", idecl)
                    continue
                dn = find_dname(idecl.decl)
                var = self.mk(CVar, dn if dn is not None else idecl, name)
                out.append(self.mk(CAssign, idecl, var, self.expr(idecl.init)))
        if not out:
            return self.mk(CSkip, d)
        if len(out) == 1:
            return out[0]
        return self.mk(CSeq, d, tuple(out))

    def _shape(self, decl: A.Node) -> tuple[bool, int | None, bool]:
        """(is_array, size, malformed) for a supported declarator."""
        d = decl
        pointers = 0
        while isinstance(d, A.DPointer):
            pointers += 1
            d = d.inner
        if isinstance(d, A.DName):
            return False, None, False
        if isinstance(d, A.DArray) and isinstance(d.inner, A.DName) and pointers == 0:
            if d.size is None:
                return True, None, True
            if isinstance(d.size, A.IntLit):
                return True, parse_int_literal(d.size.text), False
            return True, None, True
        return False, None, True

    def stmt(self, s: A.Node) -> CoreNode:
        if isinstance(s, A.Compound):
            parts = []
            for item in s.items:
                if isinstance(item, A.Declaration):
                    parts.append(self.local_decl(item))
                elif isinstance(item, A.StaticAssert):
                    parts.append(self.mk(CSkip, item))
                else:
                    parts.append(self.stmt(item))
            if not parts:
                return self.mk(CSkip, s)
            return self.mk(CSeq, s, tuple(parts))
        if isinstance(s, A.ExprStmt):
            if s.expr is None:
                return self.mk(CSkip, s)
            return self.stmt_expr(s.expr)
        if isinstance(s, A.If):
            els = self.stmt(s.els) if s.els is not None else self.mk(CSkip, s)
            return self.mk(CIf, s, self.expr(s.cond), self.stmt(s.then), els)
        if isinstance(s, A.While):
            return self.mk(CWhile, s, self.expr(s.cond), self.stmt(s.body))
        if isinstance(s, A.DoWhile):
            first = self.stmt(s.body)
            again = self.stmt(s.body)
            loop = self.mk(CWhile, s, self.expr(s.cond), again)
            return self.mk(CSeq, s, (first, loop))
        if isinstance(s, A.For):
            return self.lower_for(s)
        if isinstance(s, A.Return):
            return self.mk(CReturn, s, self.expr(s.expr) if s.expr is not None else None)
        if isinstance(s, A.Break):
            return self.mk(CBreak, s)
        if isinstance(s, A.Continue):
            self.unsupported("continue", s)
            return self.mk(CSkip, s)
        if isinstance(s, A.Goto):
            self.unsupported("goto", s)
            return self.mk(CSkip, s)
        if isinstance(s, A.Label):
            self.unsupported("label", s)
            return self.stmt(s.stmt)
        if isinstance(s, (A.Switch, A.Case, A.Default)):
            self.unsupported("switch", s)
            return self.mk(CSkip, s)
        self.unsupported(f"{type(s).__name__} statement", s)
        return self.mk(CSkip, s)

    def lower_for(self, s: A.For) -> CoreNode:
        if isinstance(s.init, A.Declaration):
            init = self.local_decl(s.init)
        else:
            init = (self.stmt_expr(s.init.expr) if s.init.expr is not None
                    else self.mk(CSkip, s.init))
        cond = (self.expr(s.cond.expr) if s.cond.expr is not None
                else self.mk(CInt, s, 1))
        body = self.stmt(s.body)
        for inner in A.walk(s.body):
            if isinstance(inner, A.Continue):
                # already reported as unsupported; name the for-specific hazard too
                self.diagnostics.append(Diagnostic(
                    "warning", "unsupported: continue inside a desugared for loop",
                    self.doc, self.rng(inner), "untranslatable"))
        if s.step is not None:
            step = self.stmt_expr(s.step)
            body = self.mk(CSeq, s, (body, step))
        loop = self.mk(CWhile, s, cond, body)
        return self.mk(CSeq, s, (init, loop))

    # -- top level -------------------------------------------------------------

    def global_decl(self, d: A.Declaration, program: CoreProgram) -> None:
        if "typedef" in d.specs.storage:
            return
        has_struct = any(isinstance(t, A.StructSpec) for t in d.specs.types)
        for idecl in d.inits:
            name = A.declarator_name(idecl.decl)
            if name is None:
                continue
            if A.declarator_kind(idecl.decl) == "function":
                continue  # prototypes contribute no storage
            if has_struct:
                self.diagnostics.append(Diagnostic(
                    "warning", f"unsupported: struct-typed global '{name}'", self.doc,
                    self.rng(idecl), "untranslatable"))
                continue
            is_array, size, bad = self._shape(idecl.decl)
            if bad:
                self.diagnostics.append(Diagnostic(
                    "warning", f"unsupported: declarator shape for global '{name}'",
                    self.doc, self.rng(idecl), "untranslatable"))
                continue
            init = self._global_init(idecl, is_array)
            g = self.mk(CoreGlobal, idecl, name, type_text(d.specs, idecl.decl),
                        is_array, size, init)
            program.globals.append(g)

    def _global_init(self, idecl: A.InitDeclarator, is_array: bool):
        init = idecl.init
        if init is None:
            return None
        if is_array and isinstance(init, A.InitList):
            vals = []
            for item in init.items:
                if item.designators or not isinstance(item.value, A.IntLit):
                    self.diagnostics.append(Diagnostic(
                        "warning", "unsupported: non-constant or designated array "
                        "initializer", self.doc, self.rng(item), "untranslatable"))
                    return None
                vals.append(parse_int_literal(item.value.text))
            return vals
        e = self._const_value(init)
        if e is None:
            self.diagnostics.append(Diagnostic(
                "warning", "unsupported: non-constant global initializer", self.doc,
                self.rng(idecl), "untranslatable"))
        return e

    def _const_value(self, e: A.Node) -> int | None:
        if isinstance(e, A.IntLit):
            return parse_int_literal(e.text)
        if isinstance(e, A.CharLit):
            return char_value(e.text)
        if isinstance(e, A.Unary) and e.op == "-" and isinstance(e.operand, A.IntLit):
            return -parse_int_literal(e.operand.text)
        return None

    def function(self, fd: A.FunctionDef) -> CoreFunc:
        self._fn_ok = True
        self._locals = []
        self._local_names = set()
        params = []
        fdecl = A.innermost_func_declarator(fd.decl)
        if fdecl is not None:
            if fdecl.vararg:
                self.unsupported("variadic parameters", fd)
            for p in fdecl.params:
                pname = A.declarator_name(p.decl)
                if pname is None:
                    continue  # (void) or unnamed
                params.append((pname, type_text(p.specs, p.decl)))
                self._local_names.add(pname)
        body = self.stmt(fd.body)
        fn = self.mk(CoreFunc, fd, A.declarator_name(fd.decl) or "<anon>",
                     tuple(params), base_type_text(fd.specs), body,
                     tuple(self._locals), self._fn_ok)
        return fn


def lower(ast: A.TranslationUnit, doc: str = "",
          lines: LineIndex | None = None) -> tuple[CoreProgram, list[Diagnostic]]:
    lw = Lowerer(doc, lines)
    program = CoreProgram()
    for d in ast.decls:
        if isinstance(d, A.FunctionDef):
            program.functions.append(lw.function(d))
        elif isinstance(d, A.Declaration):
            lw.global_decl(d, program)
        # _Static_assert contributes nothing at runtime
    return program, lw.diagnostics


# -- spec attachment ---------------------------------------------------------------


def iter_core(node: CoreNode):
    yield node
    for f in vars(node).values():
        if isinstance(f, CoreNode):
            yield from iter_core(f)
        elif isinstance(f, tuple):
            for item in f:
                if isinstance(item, CoreNode):
                    yield from iter_core(item)


def attach_specs(program: CoreProgram, attachments: list[SpecAttachment],
                 doc: str = "", lines: LineIndex | None = None,
                 ) -> list[Diagnostic]:
    """Place each spec payload on the minimal containing CoreC node.

    FNSPEC goes to the enclosing function, INVARIANT/INV to the nearest
    enclosing while loop.
    """
    diags: list[Diagnostic] = []

    def rng_of(focus) -> Range | None:
        if lines is None:
            return None
        return Range(lines.pos(focus.start), lines.pos(focus.end))

    for att in attachments:
        fs, fe = att.focus.start, att.focus.end
        containing_fn = None
        for fn in program.functions:
            if fn.start <= fs and fe <= fn.end:
                containing_fn = fn
                break
        if att.keyword == "FNSPEC":
            target = containing_fn
        elif att.keyword in ("INVARIANT", "INV"):
            target = None
            if containing_fn is not None:
                for nd in iter_core(containing_fn):
                    if isinstance(nd, CWhile) and nd.start <= fs and fe <= nd.end:
                        if target is None or (nd.end - nd.start) <= (target.end - target.start):
                            target = nd
        else:
            candidates = []
            for fn in program.functions:
                candidates.extend(iter_core(fn))
            candidates.extend(program.globals)
            target = None
            for nd in candidates:
                if nd.start <= fs and fe <= nd.end:
                    if target is None or (nd.end - nd.start) <= (target.end - target.start):
                        target = nd
        if target is None:
            diags.append(Diagnostic(
                "error", f"{att.keyword}: no containing core node for this focus",
                doc, rng_of(att.focus), "spec-unattached"))
            continue
        if isinstance(target, CoreFunc) and not target.translatable:
            diags.append(Diagnostic(
                "warning", f"{att.keyword}: target function '{target.name}' is "
                "untranslatable", doc, rng_of(att.focus), "spec-on-untranslatable"))
        target.meta.setdefault(att.keyword, []).append(att.payload)
    return diags


# -- core pretty printing -------------------------------------------------------------


def core_sexp(node, indent: int = 0) -> str:
    pad = "  " * indent
    if node is None:
        return pad + "nil"
    if isinstance(node, CoreProgram):
        gs = "\n".join(core_sexp(g, indent + 2) for g in node.globals)
        fs = "\n".join(core_sexp(f, indent + 2) for f in node.functions)
        return (f"{pad}(program\n{pad}  (globals\n{gs}\n{pad}  )\n"
                f"{pad}  (functions\n{fs}\n{pad}  ))")
    meta = ""
    if getattr(node, "meta", None):
        parts = "; ".join(f"{k}: {', '.join(vs)}" for k, vs in sorted(node.meta.items()))
        meta = f" [spec {parts}]"
    if isinstance(node, CoreGlobal):
        return f"{pad}(global {node.name} {node.type_text!r} init={node.init!r}){meta}"
    if isinstance(node, CoreFunc):
        ps = " ".join(f"({n} {t})" for n, t in node.params)
        ls = " ".join(f"({n} {'array' if a else 'scalar'})" for n, t, a, _ in node.locals)
        header = (f"{pad}(func {node.name} ret={node.ret_type!r} "
                  f"params=({ps}) locals=({ls})"
                  f"{' UNTRANSLATABLE' if not node.translatable else ''}{meta}")
        return header + "\n" + core_sexp(node.body, indent + 1) + ")"
    if isinstance(node, CInt):
        return f"{pad}(int {node.value}){meta}"
    if isinstance(node, CVar):
        return f"{pad}(var {node.name}){meta}"
    if isinstance(node, CBin):
        return (f"{pad}(bin {node.op!r}\n{core_sexp(node.left, indent + 1)}\n"
                f"{core_sexp(node.right, indent + 1)}){meta}")
    if isinstance(node, CUn):
        return f"{pad}(un {node.op!r}\n{core_sexp(node.operand, indent + 1)}){meta}"
    if isinstance(node, CCall):
        args = "\n".join(core_sexp(a, indent + 1) for a in node.args)
        return f"{pad}(call {node.fn}" + (f"\n{args}" if args else "") + f"){meta}"
    if isinstance(node, CIndex):
        return (f"{pad}(index\n{core_sexp(node.base, indent + 1)}\n"
                f"{core_sexp(node.index, indent + 1)}){meta}")
    if isinstance(node, CMember):
        return f"{pad}(member {node.name}){meta}"
    if isinstance(node, CAssign):
        return (f"{pad}(assign\n{core_sexp(node.target, indent + 1)}\n"
                f"{core_sexp(node.value, indent + 1)}){meta}")
    if isinstance(node, CIf):
        return (f"{pad}(if\n{core_sexp(node.cond, indent + 1)}\n"
                f"{core_sexp(node.then, indent + 1)}\n"
                f"{core_sexp(node.els, indent + 1)}){meta}")
    if isinstance(node, CWhile):
        return (f"{pad}(while\n{core_sexp(node.cond, indent + 1)}\n"
                f"{core_sexp(node.body, indent + 1)}){meta}")
    if isinstance(node, CReturn):
        if node.expr is None:
            return f"{pad}(return){meta}"
        return f"{pad}(return\n{core_sexp(node.expr, indent + 1)}){meta}"
    if isinstance(node, CBreak):
        return f"{pad}(break){meta}"
    if isinstance(node, CSkip):
        return f"{pad}(skip){meta}"
    if isinstance(node, CSeq):
        inner = "\n".join(core_sexp(s, indent + 1) for s in node.stmts)
        return f"{pad}(seq\n{inner}){meta}"
    if isinstance(node, CCallStmt):
        return f"{pad}(call-stmt\n{core_sexp(node.call, indent + 1)}){meta}"
    if isinstance(node, CAssert):
        return f"{pad}(assert\n{core_sexp(node.expr, indent + 1)}){meta}"
    return f"{pad}(? {type(node).__name__})"
