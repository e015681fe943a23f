"""C11 abstract syntax.

Every node carries a logical source span (start, end) and a parse-unique
node_id, assigned by the parser when the node is created at a reduction.
Parentheses are transparent: `(x)` is the node for `x`.
"""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass(eq=False)
class Node:
    def __post_init__(self):
        self.start = 0
        self.end = 0
        self.node_id = -1

    def children(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, Node):
                yield v
            elif isinstance(v, tuple):
                for item in v:
                    if isinstance(item, Node):
                        yield item


# -- expressions -------------------------------------------------------------

@dataclass(eq=False)
class Ident(Node):
    name: str


@dataclass(eq=False)
class IntLit(Node):
    text: str


@dataclass(eq=False)
class FloatLit(Node):
    text: str


@dataclass(eq=False)
class CharLit(Node):
    text: str


@dataclass(eq=False)
class StrLit(Node):
    parts: tuple[str, ...]


@dataclass(eq=False)
class Unary(Node):
    op: str
    operand: Node
    postfix: bool = False


@dataclass(eq=False)
class Binary(Node):
    op: str
    left: Node
    right: Node


@dataclass(eq=False)
class Assign(Node):
    op: str
    target: Node
    value: Node


@dataclass(eq=False)
class Cond(Node):
    cond: Node
    then: Node
    els: Node


@dataclass(eq=False)
class Call(Node):
    fn: Node
    args: tuple[Node, ...]


@dataclass(eq=False)
class Index(Node):
    base: Node
    index: Node


@dataclass(eq=False)
class Member(Node):
    base: Node
    arrow: bool
    name: str


@dataclass(eq=False)
class Cast(Node):
    to: "TypeName"
    expr: Node


@dataclass(eq=False)
class SizeofExpr(Node):
    expr: Node


@dataclass(eq=False)
class SizeofType(Node):
    to: "TypeName"


@dataclass(eq=False)
class CompoundLit(Node):
    to: "TypeName"
    init: "InitList"


# -- specifiers, declarators, declarations -----------------------------------

@dataclass(eq=False)
class TypedefUse(Node):
    name: str


@dataclass(eq=False)
class StructSpec(Node):
    kind: str  # struct | union
    tag: str | None
    members: tuple["StructDecl", ...] | None  # None = reference without body


@dataclass(eq=False)
class StructDecl(Node):
    specs: "DeclSpecs"
    declarators: tuple["StructDeclarator", ...]


@dataclass(eq=False)
class StructDeclarator(Node):
    decl: Node | None
    width: Node | None


@dataclass(eq=False)
class EnumSpec(Node):
    tag: str | None
    enumerators: tuple["Enumerator", ...] | None


@dataclass(eq=False)
class Enumerator(Node):
    name: str
    value: Node | None


@dataclass(eq=False)
class DeclSpecs(Node):
    storage: tuple[str, ...]
    quals: tuple[str, ...]
    funcspecs: tuple[str, ...]
    types: tuple[Node | str, ...]  # keyword strings or Struct/Enum/TypedefUse nodes


@dataclass(eq=False)
class DName(Node):
    name: str


@dataclass(eq=False)
class DAbstract(Node):
    pass


@dataclass(eq=False)
class DPointer(Node):
    quals: tuple[str, ...]
    inner: Node


@dataclass(eq=False)
class DArray(Node):
    inner: Node
    size: Node | None


@dataclass(eq=False)
class DFunc(Node):
    inner: Node
    params: tuple["ParamDecl", ...]
    vararg: bool


@dataclass(eq=False)
class ParamDecl(Node):
    specs: DeclSpecs
    decl: Node | None


@dataclass(eq=False)
class TypeName(Node):
    specs: DeclSpecs
    decl: Node | None


@dataclass(eq=False)
class DesignIndex(Node):
    index: Node


@dataclass(eq=False)
class DesignField(Node):
    name: str


@dataclass(eq=False)
class InitItem(Node):
    designators: tuple[Node, ...] | None
    value: Node


@dataclass(eq=False)
class InitList(Node):
    items: tuple[InitItem, ...]


@dataclass(eq=False)
class InitDeclarator(Node):
    decl: Node
    init: Node | None


@dataclass(eq=False)
class Declaration(Node):
    specs: DeclSpecs
    inits: tuple[InitDeclarator, ...]


@dataclass(eq=False)
class StaticAssert(Node):
    cond: Node
    message: StrLit


@dataclass(eq=False)
class FunctionDef(Node):
    specs: DeclSpecs
    decl: Node
    body: "Compound"


@dataclass(eq=False)
class TranslationUnit(Node):
    decls: tuple[Node, ...]


# -- statements ---------------------------------------------------------------

@dataclass(eq=False)
class Compound(Node):
    items: tuple[Node, ...]


@dataclass(eq=False)
class ExprStmt(Node):
    expr: Node | None


@dataclass(eq=False)
class If(Node):
    cond: Node
    then: Node
    els: Node | None


@dataclass(eq=False)
class Switch(Node):
    cond: Node
    body: Node


@dataclass(eq=False)
class While(Node):
    cond: Node
    body: Node


@dataclass(eq=False)
class DoWhile(Node):
    body: Node
    cond: Node


@dataclass(eq=False)
class For(Node):
    init: Node  # Declaration or ExprStmt
    cond: "ExprStmt"
    step: Node | None
    body: Node


@dataclass(eq=False)
class Return(Node):
    expr: Node | None


@dataclass(eq=False)
class Break(Node):
    pass


@dataclass(eq=False)
class Continue(Node):
    pass


@dataclass(eq=False)
class Goto(Node):
    label: str


@dataclass(eq=False)
class Label(Node):
    name: str
    stmt: Node


@dataclass(eq=False)
class Case(Node):
    expr: Node
    stmt: Node


@dataclass(eq=False)
class Default(Node):
    stmt: Node


_EXPR_TYPES = (Ident, IntLit, FloatLit, CharLit, StrLit, Unary, Binary, Assign, Cond,
               Call, Index, Member, Cast, SizeofExpr, SizeofType, CompoundLit)
_STMT_TYPES = (Compound, ExprStmt, If, Switch, While, DoWhile, For, Return, Break,
               Continue, Goto, Label, Case, Default)
_DECL_TYPES = (Declaration, StaticAssert, FunctionDef)


def node_sort(n: Node) -> str:
    if isinstance(n, _EXPR_TYPES):
        return "expr"
    if isinstance(n, _STMT_TYPES):
        return "stmt"
    if isinstance(n, _DECL_TYPES):
        return "decl"
    return "other"


def walk(n: Node):
    yield n
    for c in n.children():
        yield from walk(c)


def to_sexp(n: Node | str | None, with_pos: bool = False, indent: int = 0) -> str:
    """Deterministic s-expression dump; without positions it is the structural
    form used for AST equality."""
    pad = "  " * indent
    if n is None:
        return pad + "nil"
    if isinstance(n, str):
        return pad + n
    head = type(n).__name__
    if with_pos:
        head += f"@{n.start}:{n.end}"
    parts: list[str] = []
    for f in fields(n):
        v = getattr(n, f.name)
        if isinstance(v, Node):
            parts.append(to_sexp(v, with_pos, indent + 1))
        elif isinstance(v, tuple):
            if all(isinstance(x, str) for x in v):
                parts.append("  " * (indent + 1) + "(" + " ".join(v) + ")")
            else:
                inner = "\n".join(to_sexp(x, with_pos, indent + 2) for x in v)
                parts.append("  " * (indent + 1) + "(" + (("\n" + inner + "\n" + "  " * (indent + 1)) if v else "") + ")")
        elif v is None:
            parts.append("  " * (indent + 1) + "nil")
        else:
            parts.append("  " * (indent + 1) + repr(v))
    if not parts:
        return f"{pad}({head})"
    return f"{pad}({head}\n" + "\n".join(parts) + ")"


def ast_equal(a: Node | None, b: Node | None) -> bool:
    """Structural equality ignoring positions and node ids."""
    if a is None or b is None:
        return a is b
    return to_sexp(a) == to_sexp(b)


def declarator_name(d: Node | None) -> str | None:
    """The declared identifier, reached through pointer/array/function wrappers."""
    while d is not None:
        if isinstance(d, DName):
            return d.name
        if isinstance(d, (DPointer, DArray, DFunc)):
            d = d.inner
        else:
            return None
    return None


def declarator_kind(d: Node | None) -> str:
    """'function' when the wrapper adjacent to the name is a function declarator."""
    path: list[Node] = []
    cur = d
    while cur is not None and not isinstance(cur, (DName, DAbstract)):
        path.append(cur)
        cur = getattr(cur, "inner", None)
    if path and isinstance(path[-1], DFunc):
        return "function"
    return "object"


def innermost_func_declarator(d: Node | None) -> DFunc | None:
    """The function declarator that applies to the defined name, if any."""
    path: list[Node] = []
    cur = d
    while cur is not None and not isinstance(cur, (DName, DAbstract)):
        path.append(cur)
        cur = getattr(cur, "inner", None)
    if path and isinstance(path[-1], DFunc):
        return path[-1]
    return None
