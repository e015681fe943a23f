"""Restricted, deterministic preprocessing: define/undef/include plus expansion.

Covers the common subset of macro expansion only: object-like and
function-like macros with hide-set based re-expansion control.  Conditionals,
stringize/paste and builtin macros are out; sources needing a full cpp are
expected to arrive pre-expanded (`--assume-cpp`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .lexer import Token, Trivia, tokenize
from .reports import Diagnostic
from .source import Range, SourceFile

MAX_INCLUDE_DEPTH = 16


@dataclass
class Macro:
    name: str
    params: list[str] | None  # None = object-like
    body: list[Token]
    def_range: Range
    doc: str


@dataclass
class MacroTable:
    macros: dict[str, Macro] = field(default_factory=dict)

    def define(self, m: Macro) -> bool:
        """Install a macro; returns True when an existing entry was replaced."""
        replaced = m.name in self.macros
        self.macros[m.name] = m
        return replaced

    def undef(self, name: str) -> None:
        self.macros.pop(name, None)

    def lookup(self, name: str) -> Macro | None:
        return self.macros.get(name)

    def numeric_constants(self) -> dict[str, int]:
        """Object-like macros whose body is one integer literal, as named constants."""
        out = {}
        for m in self.macros.values():
            if m.params is None and len(m.body) == 1 and m.body[0].kind == "integer_lit":
                try:
                    out[m.name] = parse_int_literal(m.body[0].text)
                except ValueError:
                    pass
        return out


def parse_int_literal(text: str) -> int:
    t = text.rstrip("uUlL")
    if t.lower().startswith("0x"):
        return int(t, 16)
    if t.startswith("0") and len(t) > 1:
        return int(t, 8)
    return int(t)


@dataclass
class Directive:
    kind: str  # define | undef | include | other
    name: str  # macro name, include target, or the directive word for `other`
    params: list[str] | None
    body: list[Token]
    rng: Range
    doc: str
    system_include: bool = False  # <...> vs "..."


def scan_directives(trivia: list[Trivia], doc: str = "") -> tuple[list[Directive], list[Diagnostic]]:
    """Parse each directive_line trivia record into a Directive, in source order."""
    out: list[Directive] = []
    diags: list[Diagnostic] = []
    for t in trivia:
        if t.kind != "directive_line":
            continue
        d = _parse_directive(t, doc or t.doc)
        if isinstance(d, Diagnostic):
            diags.append(d)
        elif d is not None:
            out.append(d)
    return out, diags


def _parse_directive(t: Trivia, doc: str) -> Directive | Diagnostic | None:
    text = t.payload
    body_src = text[1:]  # strip '#'
    base = t.payload_start + 1
    lex = tokenize(body_src)
    toks = lex.tokens
    for tok in toks:  # rebase offsets into the enclosing document
        tok.start += base
        tok.end += base
        tok.doc = doc
        if t.lines is not None:
            tok._lines = t.lines
    if not toks:
        return None  # null directive ("#"), standard and harmless
    head = toks[0]
    word = head.text
    if word == "define":
        if len(toks) < 2 or toks[1].kind not in ("identifier", "keyword"):
            return Diagnostic("error", "malformed #define: missing macro name", doc, t.rng,
                              "bad-directive")
        name_tok = toks[1]
        params: list[str] | None = None
        body_start = 2
        # function-like only when '(' is adjacent to the name
        if (len(toks) > 2 and toks[2].kind == "punctuator" and toks[2].name == "("
                and toks[2].start == name_tok.end):
            params = []
            i = 3
            if i < len(toks) and toks[i].name == ")":
                i += 1
            else:
                while i < len(toks):
                    if toks[i].kind != "identifier":
                        return Diagnostic("error", "malformed #define: bad parameter list",
                                          doc, t.rng, "bad-directive")
                    params.append(toks[i].text)
                    i += 1
                    if i < len(toks) and toks[i].name == ",":
                        i += 1
                        continue
                    break
                if i >= len(toks) or toks[i].name != ")":
                    return Diagnostic("error", "malformed #define: unterminated parameter list",
                                      doc, t.rng, "bad-directive")
                i += 1
            body_start = i
        body = toks[body_start:]
        for b in body:
            if b.kind == "punctuator" and b.name in ("#", "##"):
                return Diagnostic("error", f"'{b.name}' in macro body is not supported "
                                  "(stringize/paste are outside the supported subset)",
                                  doc, t.rng, "unsupported-directive")
        return Directive("define", name_tok.text, params, body, name_tok.rng, doc)
    if word == "undef":
        if len(toks) != 2 or toks[1].kind not in ("identifier", "keyword"):
            return Diagnostic("error", "malformed #undef", doc, t.rng, "bad-directive")
        return Directive("undef", toks[1].text, None, [], t.rng, doc)
    if word == "include":
        rest = body_src[head.end - base:].strip()
        if rest.startswith('"') and rest.endswith('"') and len(rest) > 2:
            return Directive("include", rest[1:-1], None, [], t.rng, doc)
        if rest.startswith("<") and rest.endswith(">") and len(rest) > 2:
            return Directive("include", rest[1:-1], None, [], t.rng, doc, system_include=True)
        return Diagnostic("error", "malformed #include: expected \"file\" or <file>",
                          doc, t.rng, "bad-directive")
    return Directive("other", word, None, toks[1:], t.rng, doc)


class _XToken:
    """A token paired with its hide set during expansion."""

    __slots__ = ("tok", "hide")

    def __init__(self, tok: Token, hide: frozenset[str]):
        self.tok = tok
        self.hide = hide


_EMPTY: frozenset[str] = frozenset()


class Preprocessor:
    """Drives directive evaluation and macro expansion over one document's stream."""

    def __init__(self, resolver: Callable[[str], SourceFile | None] | None = None):
        self.table = MacroTable()
        self.resolver = resolver
        self.diagnostics: list[Diagnostic] = []
        self.expansions: list[tuple[str, Range, str]] = []  # (macro, invocation range, doc)
        self.define_events: list[Directive] = []

    def process(self, tokens: list[Token], directives: list[Directive],
                depth: int = 0) -> list[Token]:
        """Apply directives at their positions and expand the segments between them.

        A macro call may not straddle a directive line.
        """
        out: list[Token] = []
        idx = 0
        for d in sorted(directives, key=lambda d: d.rng.start.offset):
            boundary = d.rng.start.offset
            j = idx
            while j < len(tokens) and tokens[j].start < boundary:
                j += 1
            if j > idx:
                out.extend(x.tok for x in self.expand([_XToken(t, _EMPTY) for t in tokens[idx:j]]))
            idx = j
            out.extend(self.apply_directive(d, depth))
        if idx < len(tokens):
            out.extend(x.tok for x in self.expand([_XToken(t, _EMPTY) for t in tokens[idx:]]))
        return out

    def apply_directive(self, d: Directive, depth: int = 0) -> list[Token]:
        """Evaluate one directive; include returns the spliced-in token stream."""
        if d.kind == "define":
            replaced = self.table.define(Macro(d.name, d.params, d.body, d.rng, d.doc))
            if replaced:
                self.diagnostics.append(Diagnostic(
                    "warning", f"macro '{d.name}' redefined", d.doc, d.rng, "macro-redefined"))
            self.define_events.append(d)
            return []
        if d.kind == "undef":
            self.table.undef(d.name)
            return []
        if d.kind == "include":
            return self.include(d, depth)
        self.diagnostics.append(Diagnostic(
            "warning", f"unsupported directive '#{d.name}' ignored", d.doc, d.rng,
            "unsupported-directive"))
        return []

    def include(self, d: Directive, depth: int) -> list[Token]:
        if depth >= MAX_INCLUDE_DEPTH:
            self.diagnostics.append(Diagnostic(
                "error", f"include depth exceeds {MAX_INCLUDE_DEPTH}", d.doc, d.rng,
                "include-depth"))
            return []
        src = self.resolver(d.name) if self.resolver else None
        if src is None:
            self.diagnostics.append(Diagnostic(
                "error", f"cannot resolve include '{d.name}'", d.doc, d.rng,
                "include-unresolved"))
            return []
        lex = tokenize(src.logical, doc=src.id, lines=src.logical_lines)
        for tok in lex.tokens:
            tok.doc = src.id
        self.diagnostics.extend(lex.diagnostics)
        dirs, ddiags = scan_directives(lex.trivia, src.id)
        self.diagnostics.extend(ddiags)
        return self.process(lex.tokens, dirs, depth + 1)

    def expand(self, xtokens: list[_XToken]) -> list[_XToken]:
        """Hide-set based expansion; terminates because hide sets only grow and are
        bounded by the set of defined macro names."""
        macros = self.table.macros
        if not macros:
            return xtokens
        out: list[_XToken] = []
        pending = list(reversed(xtokens))
        while pending:
            xt = pending.pop()
            tok = xt.tok
            if tok.kind != "identifier" or tok.text in xt.hide:
                out.append(xt)
                continue
            macro = macros.get(tok.text)
            if macro is None:
                out.append(xt)
                continue
            if macro.params is None:
                hide = xt.hide | {macro.name}
                self._record_expansion(macro, tok)
                for b in reversed(macro.body):
                    pending.append(_XToken(self._clone_at(b, tok, macro.name), hide))
                continue
            if not pending or pending[-1].tok.name != "(":
                out.append(xt)  # function-like name without arguments stays put
                continue
            args, consumed, close_hide, err = self._collect_args(pending)
            if err:
                self.diagnostics.append(Diagnostic(
                    "error", f"unterminated call to macro '{macro.name}'", tok.doc, tok.rng,
                    "macro-call"))
                out.append(xt)
                continue
            if len(macro.params) == 0 and args == [[]]:
                args = []
            if len(args) != len(macro.params):
                self.diagnostics.append(Diagnostic(
                    "error",
                    f"macro '{macro.name}' expects {len(macro.params)} argument(s), "
                    f"got {len(args)}", tok.doc, tok.rng, "macro-arity"))
                out.append(xt)
                continue
            del pending[len(pending) - consumed:]
            hide = (xt.hide & close_hide) | {macro.name}
            self._record_expansion(macro, tok)
            binding = {p: self.expand(a) for p, a in zip(macro.params, args)}
            expansion: list[_XToken] = []
            for b in macro.body:
                if b.kind == "identifier" and b.text in binding:
                    for a in binding[b.text]:
                        expansion.append(_XToken(a.tok, a.hide | hide))
                else:
                    expansion.append(_XToken(self._clone_at(b, tok, macro.name), hide))
            pending.extend(reversed(expansion))
        return out

    @staticmethod
    def _collect_args(pending: list[_XToken]):
        """Scan '(' args ')' from the top of the pending stack without consuming it.

        Returns (args, consumed_count, closing_hide_set, error_flag).
        """
        args: list[list[_XToken]] = [[]]
        depth = 0
        consumed = 0
        for j in range(len(pending) - 1, -1, -1):
            xt = pending[j]
            consumed += 1
            name = xt.tok.name
            if name == "(":
                depth += 1
                if depth == 1:
                    continue
            elif name == ")":
                depth -= 1
                if depth == 0:
                    if args == [[]] and not args[0]:
                        args = [[]]
                    return args, consumed, xt.hide, False
            elif name == "," and depth == 1:
                args.append([])
                continue
            args[-1].append(xt)
        return [], 0, _EMPTY, True

    def _record_expansion(self, macro: Macro, tok: Token) -> None:
        self.expansions.append((macro.name, tok.rng, tok.doc))

    @staticmethod
    def _clone_at(body_tok: Token, site: Token, macro: str) -> Token:
        t = Token(body_tok.kind, body_tok.name, body_tok.text, site.start, site.end,
                  site._lines, site.doc)
        t.origin = (macro, site.rng)
        return t


def preprocess(src: SourceFile, tokens: list[Token], trivia: list[Trivia],
               resolver: Callable[[str], SourceFile | None] | None = None,
               ) -> tuple[list[Token], Preprocessor]:
    """Scan directives from trivia and run the expansion pass over the tokens."""
    pp = Preprocessor(resolver)
    directives, diags = scan_directives(trivia, src.id)
    pp.diagnostics.extend(diags)
    out = pp.process(tokens, directives)
    return out, pp
