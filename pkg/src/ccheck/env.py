"""Scoped identifier environment: kinds, canonical type text, serials.

The environment is a value (persistent stack of frames) threaded through the
parse; snapshots taken at shift/reduce events are therefore free to share.
C's three namespaces are kept apart: ordinary identifiers, struct/union/enum
tags, and labels (function-wide).

`install_env_wrappers` wires the scoping behaviour onto the grammar: scope
open/close, declarator naming, typedef and tag introduction, occurrence
markup.  Those are exactly the rules tagged monadic in the grammar.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import c_ast as A
from .reports import fresh_serial


@dataclass(frozen=True)
class Binding:
    name: str
    kind: str  # object | function | typedef | enum_const | param | label | tag
    type_text: str
    serial: int
    glob: bool
    doc: str = ""
    def_start: int = 0
    def_end: int = 0


class Frame:
    __slots__ = ("ordinary", "tags", "labels")

    def __init__(self, ordinary: dict, tags: dict, labels: dict | None):
        self.ordinary = ordinary
        self.tags = tags
        self.labels = labels  # non-None only for function scopes


class Env:
    """Immutable scope stack; every mutation returns a new Env."""

    __slots__ = ("frames", "function_scope_pending")

    def __init__(self, frames: tuple[Frame, ...], pending: bool = False):
        self.frames = frames
        self.function_scope_pending = pending

    @staticmethod
    def initial() -> "Env":
        return Env((Frame({}, {}, None),))

    @staticmethod
    def empty() -> "Env":
        return Env.initial()

    def keep_typedefs_only(self) -> "Env":
        """Global typedefs survive; everything else is dropped."""
        kept = {n: b for n, b in self.frames[0].ordinary.items() if b.kind == "typedef"}
        return Env((Frame(kept, {}, None),))

    @property
    def depth(self) -> int:
        return len(self.frames)

    def push_scope(self, labels: bool = False) -> "Env":
        return Env(self.frames + (Frame({}, {}, {} if labels else None),),
                   self.function_scope_pending)

    def pop_scope(self) -> "Env":
        assert len(self.frames) > 1, "cannot pop the global scope"
        return Env(self.frames[:-1], self.function_scope_pending)

    def with_pending_function_scope(self, flag: bool) -> "Env":
        return Env(self.frames, flag)

    def reset_to_global(self) -> "Env":
        return Env(self.frames[:1], False)

    def declare(self, name: str, kind: str, type_text: str, doc: str = "",
                start: int = 0, end: int = 0) -> tuple["Env", Binding]:
        b = Binding(name, kind, type_text, fresh_serial(), len(self.frames) == 1,
                    doc, start, end)
        top = self.frames[-1]
        nf = Frame(dict(top.ordinary), top.tags, top.labels)
        nf.ordinary[name] = b
        return Env(self.frames[:-1] + (nf,), self.function_scope_pending), b

    def lookup(self, name: str) -> Binding | None:
        for fr in reversed(self.frames):
            b = fr.ordinary.get(name)
            if b is not None:
                return b
        return None

    def lookup_here(self, name: str) -> Binding | None:
        return self.frames[-1].ordinary.get(name)

    def lookup_outer(self, name: str) -> Binding | None:
        for fr in reversed(self.frames[:-1]):
            b = fr.ordinary.get(name)
            if b is not None:
                return b
        return None

    def is_typedef(self, name: str) -> bool:
        for fr in reversed(self.frames):
            b = fr.ordinary.get(name)
            if b is not None:
                return b.kind == "typedef"
        return False

    def declare_tag(self, name: str, kind_word: str, doc: str = "",
                    start: int = 0, end: int = 0) -> tuple["Env", Binding]:
        b = Binding(name, "tag", f"{kind_word} {name}", fresh_serial(),
                    len(self.frames) == 1, doc, start, end)
        top = self.frames[-1]
        nf = Frame(top.ordinary, dict(top.tags), top.labels)
        nf.tags[name] = b
        return Env(self.frames[:-1] + (nf,), self.function_scope_pending), b

    def lookup_tag(self, name: str) -> Binding | None:
        for fr in reversed(self.frames):
            b = fr.tags.get(name)
            if b is not None:
                return b
        return None

    def declare_label(self, name: str, doc: str = "", start: int = 0,
                      end: int = 0) -> tuple["Env", Binding | None]:
        for idx in range(len(self.frames) - 1, -1, -1):
            fr = self.frames[idx]
            if fr.labels is not None:
                b = Binding(name, "label", "", fresh_serial(), False, doc, start, end)
                nf = Frame(fr.ordinary, fr.tags, dict(fr.labels))
                nf.labels[name] = b
                return Env(self.frames[:idx] + (nf,) + self.frames[idx + 1:],
                           self.function_scope_pending), b
        return self, None  # label outside any function scope

    def lookup_label(self, name: str) -> Binding | None:
        for fr in reversed(self.frames):
            if fr.labels is not None and name in fr.labels:
                return fr.labels[name]
        return None

    def global_bindings(self) -> list[Binding]:
        return sorted(self.frames[0].ordinary.values(), key=lambda b: b.serial)

    def to_json(self) -> str:
        out = [{"name": b.name, "kind": b.kind, "type_text": b.type_text}
               for b in self.global_bindings()]
        return json.dumps(out, indent=2)

    @staticmethod
    def from_json(text: str) -> "Env":
        env = Env.initial()
        for item in json.loads(text):
            env, _ = env.declare(item["name"], item.get("kind", "object"),
                                 item.get("type_text", ""))
        return env


# -- canonical type printing ---------------------------------------------------

def base_type_text(specs: A.DeclSpecs) -> str:
    words: list[str] = list(specs.quals)
    for t in specs.types:
        if isinstance(t, str):
            words.append(t)
        elif isinstance(t, A.TypedefUse):
            words.append(t.name)
        elif isinstance(t, A.StructSpec):
            words.append(f"{t.kind} {t.tag}" if t.tag else f"{t.kind} <anon>")
        elif isinstance(t, A.EnumSpec):
            words.append(f"enum {t.tag}" if t.tag else "enum <anon>")
    return " ".join(words) if words else "int"


def type_text(specs: A.DeclSpecs, declarator: A.Node | None) -> str:
    """Canonical printed type, e.g. `int`, `int*`, `int[10]`, `int(int,int)`.

    Declarator wrappers are appended walking from the outermost structure
    inward, so `int *a[3]` prints as `int*[3]`.
    """
    out = base_type_text(specs)
    d = declarator
    while d is not None and not isinstance(d, (A.DName, A.DAbstract)):
        if isinstance(d, A.DPointer):
            out += "*"
            d = d.inner
        elif isinstance(d, A.DArray):
            if d.size is None:
                out += "[]"
            elif isinstance(d.size, A.IntLit):
                out += f"[{d.size.text}]"
            else:
                out += "[?]"
            d = d.inner
        elif isinstance(d, A.DFunc):
            args = ",".join(type_text(p.specs, p.decl) for p in d.params)
            if d.vararg:
                args = args + ",..." if args else "..."
            out += f"({args})"
            d = d.inner
        else:
            break
    return out


def find_dname(d: A.Node | None) -> A.DName | None:
    while d is not None:
        if isinstance(d, A.DName):
            return d
        d = getattr(d, "inner", None)
    return None


# -- built-in wrappers ----------------------------------------------------------

def _def_markups(run, b: Binding, tok) -> None:
    props = {"name": b.name, "kind": b.kind, "type_text": b.type_text,
             "def_serial": str(b.serial)}
    run.markup("entity_def", tok.rng, props, tok.doc)
    if b.type_text:
        run.markup("type_info", tok.rng, {"type_text": b.type_text}, tok.doc)


def _use_markup(run, b: Binding, tok) -> None:
    run.markup("entity_use", tok.rng,
               {"name": b.name, "kind": b.kind, "type_text": b.type_text,
                "def_serial": str(b.serial)}, tok.doc)


def _declare_checked(env: Env, run, name: str, kind: str, ttext: str, tok) -> Env:
    prev_here = env.lookup_here(name)
    if prev_here is not None and prev_here.kind != kind:
        run.diag("error",
                 f"'{name}' redeclared as {kind}; previous declaration was "
                 f"{prev_here.kind}", tok, "incompatible-redeclaration")
    elif prev_here is not None and env.depth > 1:
        run.diag("warning", f"redeclaration of '{name}'", tok, "redeclaration")
    elif env.lookup_outer(name) is not None:
        run.diag("warning", f"'{name}' shadows an outer declaration", tok, "shadow")
    env, b = env.declare(name, kind, ttext, tok.doc, tok.start, tok.end)
    _def_markups(run, b, tok)
    return env


def _hook_declaration(env: Env, vals, run, rnode) -> Env:
    specs: A.DeclSpecs = vals[0]
    inits = vals[1] if len(vals) == 3 else []
    is_typedef = "typedef" in specs.storage
    for idecl in inits:
        d = idecl.decl
        name = A.declarator_name(d)
        if name is None:
            continue
        kind = "typedef" if is_typedef else A.declarator_kind(d)
        dn = find_dname(d)
        tok = getattr(dn, "tok", None)
        if tok is None:
            continue
        env = _declare_checked(env, run, name, kind, type_text(specs, d), tok)
    return env


def _hook_function_head(env: Env, vals, run, rnode) -> Env:
    specs, decl = vals[0], vals[1]
    name = A.declarator_name(decl)
    dn = find_dname(decl)
    tok = getattr(dn, "tok", None)
    if name is not None and tok is not None:
        env = _declare_checked(env, run, name, "function", type_text(specs, decl), tok)
    env = env.push_scope(labels=True)
    run.env_pushes += 1
    fd = A.innermost_func_declarator(decl)
    if fd is not None:
        for p in fd.params:
            pname = A.declarator_name(p.decl)
            pdn = find_dname(p.decl)
            ptok = getattr(pdn, "tok", None)
            if pname is None or ptok is None:
                continue
            env = _declare_checked(env, run, pname, "param",
                                   type_text(p.specs, p.decl), ptok)
    return env.with_pending_function_scope(True)


def _hook_block_open(env: Env, vals, run, rnode) -> Env:
    if env.function_scope_pending:
        return env.with_pending_function_scope(False)
    run.env_pushes += 1
    return env.push_scope()


def _hook_block_close(env: Env, vals, run, rnode) -> Env:
    run.env_pops += 1
    return env.pop_scope()


def _hook_for_open(env: Env, vals, run, rnode) -> Env:
    run.env_pushes += 1
    return env.push_scope()


def _hook_for_close(env: Env, vals, run, rnode) -> Env:
    run.env_pops += 1
    return env.pop_scope()


def _hook_enumerator(env: Env, vals, run, rnode) -> Env:
    return _declare_checked(env, run, vals[0].text, "enum_const", "int", vals[0])


def _hook_tag(kind_of) -> object:
    def hook(env: Env, vals, run, rnode) -> Env:
        tok = vals[1]
        word = kind_of(vals)
        has_body = len(vals) > 2
        existing = env.lookup_tag(tok.text)
        if has_body or existing is None:
            env, b = env.declare_tag(tok.text, word, tok.doc, tok.start, tok.end)
            _def_markups(run, b, tok)
        else:
            _use_markup(run, existing, tok)
        return env

    return hook


def _hook_label(env: Env, vals, run, rnode) -> Env:
    tok = vals[0]
    env, b = env.declare_label(tok.text, tok.doc, tok.start, tok.end)
    if b is not None:
        _def_markups(run, b, tok)
    return env


def _hook_goto(env: Env, vals, run, rnode) -> Env:
    tok = vals[1]
    b = env.lookup_label(tok.text)
    if b is not None:
        _use_markup(run, b, tok)
    # forward references stay silent: labels resolve function-wide
    return env


def _hook_use(env: Env, vals, run, rnode) -> Env:
    tok = vals[0]
    b = env.lookup(tok.text)
    if b is not None:
        _use_markup(run, b, tok)
    else:
        run.markup("free_variable", tok.rng, {"name": tok.text}, tok.doc)
    return env


def install_env_wrappers(parser) -> None:
    for rid in parser.find_rules("declaration", rhs0="declaration_specifiers"):
        parser.add_wrapper(rid, _hook_declaration)
    for rid in parser.find_rules("function_head"):
        parser.add_wrapper(rid, _hook_function_head)
    for rid in parser.find_rules("block_open"):
        parser.add_wrapper(rid, _hook_block_open)
    for rid in parser.find_rules("block_close"):
        parser.add_wrapper(rid, _hook_block_close)
    for rid in parser.find_rules("for_open"):
        parser.add_wrapper(rid, _hook_for_open)
    for rid in parser.find_rules("for_statement"):
        parser.add_wrapper(rid, _hook_for_close)
    for rid in parser.find_rules("enumerator"):
        parser.add_wrapper(rid, _hook_enumerator)
    for p in parser.tables.productions:
        if p.lhs == "struct_or_union_specifier" and "any_identifier" in p.rhs:
            parser.add_wrapper(p.index, _hook_tag(lambda vals: vals[0]))
        elif p.lhs == "enum_specifier" and "any_identifier" in p.rhs:
            parser.add_wrapper(p.index, _hook_tag(lambda vals: "enum"))
    for rid in parser.find_rules("labeled_statement", rhs0="IDENT"):
        parser.add_wrapper(rid, _hook_label)
    for rid in parser.find_rules("primary_expression", rhs0="IDENT"):
        parser.add_wrapper(rid, _hook_use)
    for rid in parser.find_rules("jump_statement", rhs0="goto"):
        parser.add_wrapper(rid, _hook_goto)
