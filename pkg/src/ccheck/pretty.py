"""Deterministic C11 pretty printing for round-trip checks.

Expressions are printed fully parenthesized; since parentheses are
transparent in the AST, re-parsing the output reproduces the input tree
structurally.  Specifier categories print grouped (storage, function
specifiers, qualifiers, types) which keeps per-category order and therefore
structural equality.
"""

from __future__ import annotations

from . import c_ast as A

_ATOMIC = (A.Ident, A.IntLit, A.FloatLit, A.CharLit, A.StrLit, A.Call, A.Index,
           A.Member, A.CompoundLit)


def fmt_expr(e: A.Node) -> str:
    if isinstance(e, A.Ident):
        return e.name
    if isinstance(e, (A.IntLit, A.FloatLit, A.CharLit)):
        return e.text
    if isinstance(e, A.StrLit):
        return " ".join(e.parts)
    if isinstance(e, A.Unary):
        if e.postfix:
            return f"{fx(e.operand)}{e.op}"
        return f"{e.op}{fx(e.operand)}"
    if isinstance(e, A.Binary):
        return f"{fx(e.left)} {e.op} {fx(e.right)}"
    if isinstance(e, A.Assign):
        return f"{fx(e.target)} {e.op} {fx(e.value)}"
    if isinstance(e, A.Cond):
        return f"{fx(e.cond)} ? {fx(e.then)} : {fx(e.els)}"
    if isinstance(e, A.Call):
        return f"{fx(e.fn)}({', '.join(fmt_expr(a) for a in e.args)})"
    if isinstance(e, A.Index):
        return f"{fx(e.base)}[{fmt_expr(e.index)}]"
    if isinstance(e, A.Member):
        return f"{fx(e.base)}{'->' if e.arrow else '.'}{e.name}"
    if isinstance(e, A.Cast):
        return f"({fmt_type_name(e.to)}){fx(e.expr)}"
    if isinstance(e, A.SizeofExpr):
        return f"sizeof {fx(e.expr)}"
    if isinstance(e, A.SizeofType):
        return f"sizeof({fmt_type_name(e.to)})"
    if isinstance(e, A.CompoundLit):
        return f"({fmt_type_name(e.to)}) {fmt_init(e.init)}"
    raise TypeError(f"not an expression node: {type(e).__name__}")


def fx(e: A.Node) -> str:
    """Format as an operand: parenthesized unless atomic."""
    s = fmt_expr(e)
    if isinstance(e, _ATOMIC):
        return s
    return f"({s})"


def fmt_specs(s: A.DeclSpecs) -> str:
    words: list[str] = []
    words.extend(s.storage)
    words.extend(s.funcspecs)
    words.extend(s.quals)
    for t in s.types:
        if isinstance(t, str):
            words.append(t)
        elif isinstance(t, A.TypedefUse):
            words.append(t.name)
        elif isinstance(t, A.StructSpec):
            words.append(fmt_struct(t))
        elif isinstance(t, A.EnumSpec):
            words.append(fmt_enum(t))
    return " ".join(words)


def fmt_struct(t: A.StructSpec) -> str:
    head = t.kind + (f" {t.tag}" if t.tag else "")
    if t.members is None:
        return head
    body = " ".join(fmt_struct_decl(m) for m in t.members)
    return f"{head} {{ {body} }}"


def fmt_struct_decl(m: A.Node) -> str:
    if isinstance(m, A.StaticAssert):
        return fmt_static_assert(m)
    parts = []
    for sd in m.declarators:
        s = fmt_declarator(sd.decl) if sd.decl is not None else ""
        if sd.width is not None:
            s += f" : {fmt_expr(sd.width)}"
        parts.append(s.strip())
    if parts:
        return f"{fmt_specs(m.specs)} {', '.join(parts)};"
    return f"{fmt_specs(m.specs)};"


def fmt_enum(t: A.EnumSpec) -> str:
    head = "enum" + (f" {t.tag}" if t.tag else "")
    if t.enumerators is None:
        return head
    items = ", ".join(
        e.name if e.value is None else f"{e.name} = {fmt_expr(e.value)}"
        for e in t.enumerators)
    return f"{head} {{ {items} }}"


def fmt_declarator(d: A.Node | None) -> str:
    if d is None or isinstance(d, A.DAbstract):
        return ""
    if isinstance(d, A.DName):
        return d.name
    if isinstance(d, A.DPointer):
        quals = "".join(f"{q} " for q in d.quals)
        return f"*{quals}{fmt_declarator(d.inner)}"
    if isinstance(d, A.DArray):
        base = fmt_declarator(d.inner)
        if isinstance(d.inner, A.DPointer):
            base = f"({base})"
        return f"{base}[{fmt_expr(d.size) if d.size is not None else ''}]"
    if isinstance(d, A.DFunc):
        base = fmt_declarator(d.inner)
        if isinstance(d.inner, A.DPointer):
            base = f"({base})"
        params = ", ".join(fmt_param(p) for p in d.params)
        if d.vararg:
            params = f"{params}, ..." if params else "..."
        return f"{base}({params})"
    raise TypeError(f"not a declarator: {type(d).__name__}")


def fmt_param(p: A.ParamDecl) -> str:
    d = fmt_declarator(p.decl)
    s = fmt_specs(p.specs)
    return f"{s} {d}".strip()


def fmt_type_name(t: A.TypeName) -> str:
    d = fmt_declarator(t.decl)
    s = fmt_specs(t.specs)
    return f"{s} {d}".strip() if d else s


def fmt_init(v: A.Node) -> str:
    if isinstance(v, A.InitList):
        items = []
        for it in v.items:
            prefix = ""
            if it.designators:
                for dz in it.designators:
                    if isinstance(dz, A.DesignIndex):
                        prefix += f"[{fmt_expr(dz.index)}]"
                    else:
                        prefix += f".{dz.name}"
                prefix += " = "
            items.append(prefix + fmt_init(it.value))
        return "{ " + ", ".join(items) + " }" if items else "{ }"
    return fmt_expr(v)


def fmt_static_assert(d: A.StaticAssert) -> str:
    return f"_Static_assert({fmt_expr(d.cond)}, {' '.join(d.message.parts)});"


def fmt_declaration(d: A.Declaration) -> str:
    specs = fmt_specs(d.specs)
    if not d.inits:
        return f"{specs};"
    parts = []
    for idecl in d.inits:
        s = fmt_declarator(idecl.decl)
        if idecl.init is not None:
            s += f" = {fmt_init(idecl.init)}"
        parts.append(s)
    return f"{specs} {', '.join(parts)};"


def fmt_stmt(s: A.Node, indent: int) -> str:
    pad = "    " * indent
    if isinstance(s, A.Compound):
        if not s.items:
            return pad + "{\n" + pad + "}"
        inner = "\n".join(
            fmt_block_item(item, indent + 1) for item in s.items)
        return pad + "{\n" + inner + "\n" + pad + "}"
    if isinstance(s, A.ExprStmt):
        return pad + (f"{fmt_expr(s.expr)};" if s.expr is not None else ";")
    if isinstance(s, A.If):
        out = pad + f"if ({fmt_expr(s.cond)})\n" + fmt_stmt_nested(s.then, indent)
        if s.els is not None:
            out += "\n" + pad + "else\n" + fmt_stmt_nested(s.els, indent)
        return out
    if isinstance(s, A.Switch):
        return pad + f"switch ({fmt_expr(s.cond)})\n" + fmt_stmt_nested(s.body, indent)
    if isinstance(s, A.While):
        return pad + f"while ({fmt_expr(s.cond)})\n" + fmt_stmt_nested(s.body, indent)
    if isinstance(s, A.DoWhile):
        return (pad + "do\n" + fmt_stmt_nested(s.body, indent) + "\n"
                + pad + f"while ({fmt_expr(s.cond)});")
    if isinstance(s, A.For):
        init = (fmt_declaration(s.init) if isinstance(s.init, A.Declaration)
                else (f"{fmt_expr(s.init.expr)};" if s.init.expr is not None else ";"))
        cond = f" {fmt_expr(s.cond.expr)};" if s.cond.expr is not None else ";"
        step = f" {fmt_expr(s.step)}" if s.step is not None else ""
        return pad + f"for ({init}{cond}{step})\n" + fmt_stmt_nested(s.body, indent)
    if isinstance(s, A.Return):
        return pad + (f"return {fmt_expr(s.expr)};" if s.expr is not None else "return;")
    if isinstance(s, A.Break):
        return pad + "break;"
    if isinstance(s, A.Continue):
        return pad + "continue;"
    if isinstance(s, A.Goto):
        return pad + f"goto {s.label};"
    if isinstance(s, A.Label):
        return pad + f"{s.name}:\n" + fmt_stmt(s.stmt, indent)
    if isinstance(s, A.Case):
        return pad + f"case {fmt_expr(s.expr)}:\n" + fmt_stmt(s.stmt, indent)
    if isinstance(s, A.Default):
        return pad + "default:\n" + fmt_stmt(s.stmt, indent)
    raise TypeError(f"not a statement: {type(s).__name__}")


def fmt_stmt_nested(s: A.Node, indent: int) -> str:
    # bodies of if/while/for: compounds stay at the same brace level
    if isinstance(s, A.Compound):
        return fmt_stmt(s, indent)
    return fmt_stmt(s, indent + 1)


def fmt_block_item(item: A.Node, indent: int) -> str:
    pad = "    " * indent
    if isinstance(item, A.Declaration):
        return pad + fmt_declaration(item)
    if isinstance(item, A.StaticAssert):
        return pad + fmt_static_assert(item)
    return fmt_stmt(item, indent)


def pretty(node: A.Node) -> str:
    """Valid C text for a translation unit (or any single node)."""
    if isinstance(node, A.TranslationUnit):
        parts = []
        for d in node.decls:
            if isinstance(d, A.FunctionDef):
                parts.append(f"{fmt_specs(d.specs)} {fmt_declarator(d.decl)}\n"
                             + fmt_stmt(d.body, 0))
            elif isinstance(d, A.Declaration):
                parts.append(fmt_declaration(d))
            elif isinstance(d, A.StaticAssert):
                parts.append(fmt_static_assert(d))
        return "\n\n".join(parts) + ("\n" if parts else "")
    if isinstance(node, A.Declaration):
        return fmt_declaration(node)
    if isinstance(node, A.FunctionDef):
        return f"{fmt_specs(node.specs)} {fmt_declarator(node.decl)}\n" + fmt_stmt(node.body, 0)
    return fmt_stmt(node, 0)
