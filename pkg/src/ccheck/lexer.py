"""C11 lexer over logical (spliced) text.

Produces a token stream plus a separate trivia channel for comments,
annotations and directive lines.  Lexing is lossless: every character of the
input belongs to a token, a trivia record, or whitespace.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .reports import Diagnostic
from .source import LineIndex, Pos, Range

# ISO 9899:2011 6.4.1
KEYWORDS = frozenset(
    """auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile while
    _Alignas _Alignof _Atomic _Bool _Complex _Generic _Imaginary _Noreturn
    _Static_assert _Thread_local""".split()
)

# Lexed as keywords, rejected by the parser with a structured diagnostic.
UNSUPPORTED_KEYWORDS = frozenset({"_Generic", "_Atomic", "_Alignas", "_Alignof"})

_DIGRAPHS = {"<:": "[", ":>": "]", "<%": "{", "%>": "}", "%:": "#", "%:%:": "##"}

_PUNCT_SPELLINGS = [
    "%:%:",
    "...", "<<=", ">>=",
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "*=", "/=", "%=", "+=", "-=", "&=", "^=", "|=", "##",
    "<:", ":>", "<%", "%>", "%:",
    "[", "]", "(", ")", "{", "}", ".", "&", "*", "+", "-", "~", "!",
    "/", "%", "<", ">", "^", "|", "?", ":", ";", "=", ",", "#",
]

_WS = re.compile(r"[ \t\r\n\v\f]+")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_FLOAT = re.compile(r"(?:(?:[0-9]+\.[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?|[0-9]+[eE][+-]?[0-9]+)[flFL]?")
_INT = re.compile(r"(?:0[xX][0-9a-fA-F]+|[0-9]+)(?:[uU][lL]{0,2}|[lL]{1,2}[uU]?)?")
_STR = re.compile(r'(?:u8|[LuU])?"(?:[^"\\\n]|\\.)*"')
_STR_OPEN = re.compile(r'(?:u8|[LuU])?"')
_CHAR = re.compile(r"[LuU]?'(?:[^'\\\n]|\\.)+'")
_CHAR_OPEN = re.compile(r"[LuU]?'")
_PUNCT = re.compile("|".join(re.escape(p) for p in _PUNCT_SPELLINGS))


class Token:
    """One lexical unit; `name` carries the keyword or canonical punctuator."""

    __slots__ = ("kind", "name", "text", "start", "end", "doc", "origin", "_lines", "_rng")

    def __init__(self, kind: str, name: str, text: str, start: int, end: int,
                 lines: LineIndex, doc: str = ""):
        self.kind = kind
        self.name = name
        self.text = text
        self.start = start
        self.end = end
        self.doc = doc
        self.origin: tuple[str, Range] | None = None  # (macro name, invocation range)
        self._lines = lines
        self._rng: Range | None = None

    @property
    def rng(self) -> Range:
        if self._rng is None:
            self._rng = Range(self._lines.pos(self.start), self._lines.pos(self.end))
        return self._rng

    def with_origin(self, macro: str, invocation: Range) -> "Token":
        t = Token(self.kind, self.name, self.text, self.start, self.end, self._lines, self.doc)
        t.origin = (macro, invocation)
        t._rng = self._rng
        return t

    def __repr__(self) -> str:
        label = self.name or self.text
        return f"Token({self.kind}:{label!r}@{self.start})"


@dataclass
class Trivia:
    kind: str  # block_comment | line_comment | annotation | directive_line
    payload: str
    rng: Range
    style: str = ""  # for annotations: block | line
    global_pragma: str = "none"  # none | strict | permissive
    payload_start: int = 0  # logical offset where payload begins
    inside_directive: bool = False
    doc: str = ""
    lines: LineIndex | None = None  # index of the enclosing logical text


@dataclass
class AnnotationComment:
    """The classification result for a comment that opens with `@`."""

    style: str  # block | line
    global_pragma: str
    payload: str
    payload_start: int
    rng: Range


class LexResult:
    def __init__(self, tokens: list[Token], trivia: list[Trivia], diagnostics: list[Diagnostic]):
        self.tokens = tokens
        self.trivia = trivia
        self.diagnostics = diagnostics


def classify_annotation(t: Trivia) -> AnnotationComment | None:
    """Return the annotation record iff the comment opens with `@`.

    A `*` immediately after `/*@` (or `//@`) switches the document to
    permissive error handling; plain `@` keeps the strict default.
    """
    if t.kind == "annotation":
        return AnnotationComment(t.style, t.global_pragma, t.payload, t.payload_start, t.rng)
    return None


def _annotation_fields(body: str, body_start: int) -> tuple[str, str, int]:
    # body starts right after the '@'
    if body.startswith("*"):
        return "permissive", body[1:], body_start + 1
    return "none", body, body_start


def tokenize(src: str, doc: str = "", lines: LineIndex | None = None) -> LexResult:
    """Lex logical text into tokens and trivia.

    Errors (unterminated comment/literal, stray characters) produce a
    diagnostic and lexing resumes at the next line.
    """
    if lines is None:
        lines = LineIndex(src)
    tokens: list[Token] = []
    trivia: list[Trivia] = []
    diags: list[Diagnostic] = []
    n = len(src)
    i = 0
    line_start = True  # nothing but whitespace/comments since the last newline

    def rng(a: int, b: int) -> Range:
        return Range(lines.pos(a), lines.pos(b))

    def skip_to_next_line(j: int) -> int:
        nl = src.find("\n", j)
        return n if nl < 0 else nl + 1

    def block_comment(j: int, inside_directive: bool = False) -> int:
        close = src.find("*/", j + 2)
        if close < 0:
            diags.append(Diagnostic("error", "unterminated block comment", doc, rng(j, n),
                                    "unterminated-comment"))
            end = n
            inner_end = n
        else:
            end = close + 2
            inner_end = close
        inner = src[j + 2 : inner_end]
        if inner.startswith("@"):
            pragma, payload, pstart = _annotation_fields(inner[1:], j + 3)
            trivia.append(Trivia("annotation", payload, rng(j, end), "block", pragma,
                                 pstart, inside_directive, doc, lines))
        elif not inside_directive:
            trivia.append(Trivia("block_comment", inner, rng(j, end), "", "none",
                                 j + 2, False, doc, lines))
        return end

    def line_comment(j: int, inside_directive: bool = False) -> int:
        nl = src.find("\n", j)
        end = n if nl < 0 else nl
        inner = src[j + 2 : end]
        if inner.startswith("@"):
            pragma, payload, pstart = _annotation_fields(inner[1:], j + 3)
            trivia.append(Trivia("annotation", payload, rng(j, end), "line", pragma,
                                 pstart, inside_directive, doc, lines))
        elif not inside_directive:
            trivia.append(Trivia("line_comment", inner, rng(j, end), "", "none",
                                 j + 2, False, doc, lines))
        return end

    def directive(j: int) -> int:
        # Spans '#' to end of line; comments inside are blanked in the payload
        # (annotations among them become their own trivia records).
        buf: list[str] = []
        k = j
        while k < n:
            c = src[k]
            if c == "\n":
                break
            if c == "/" and src.startswith("/*", k):
                end = block_comment(k, inside_directive=True)
                buf.append(" " * (end - k))
                k = end
                continue
            if c == "/" and src.startswith("//", k):
                end = line_comment(k, inside_directive=True)
                buf.append(" " * (end - k))
                k = end
                continue
            if c == '"' or c == "'":
                pat = _STR if c == '"' else _CHAR
                m = pat.match(src, k)
                if m:
                    buf.append(m.group())
                    k = m.end()
                    continue
            buf.append(c)
            k += 1
        trivia.append(Trivia("directive_line", "".join(buf), rng(j, k), "", "none",
                             j, False, doc, lines))
        return k

    while i < n:
        c = src[i]
        m = _WS.match(src, i)
        if m:
            if "\n" in m.group():
                line_start = True
            i = m.end()
            continue
        if c == "/":
            if src.startswith("/*", i):
                i = block_comment(i)
                continue
            if src.startswith("//", i):
                i = line_comment(i)
                continue
        if c == "#" and line_start:
            i = directive(i)
            continue
        line_start = False
        if c == '"' or c == "'" or c in "uUL":
            m = _STR.match(src, i)
            if m:
                tokens.append(Token("string_lit", "", m.group(), i, m.end(), lines, doc))
                i = m.end()
                continue
            m = _CHAR.match(src, i)
            if m:
                tokens.append(Token("char_lit", "", m.group(), i, m.end(), lines, doc))
                i = m.end()
                continue
            mo = _STR_OPEN.match(src, i) or (_CHAR_OPEN.match(src, i) if c != '"' else None)
            if mo and (c in "\"'" or mo.end() > i + 1):
                end = skip_to_next_line(i)
                what = "string" if '"' in mo.group() else "character"
                diags.append(Diagnostic("error", f"unterminated {what} literal", doc,
                                        rng(i, min(end, n)), "unterminated-literal"))
                i = end
                line_start = True
                continue
        if c.isdigit() or (c == "." and i + 1 < n and src[i + 1].isdigit()):
            m = _FLOAT.match(src, i)
            if m:
                tokens.append(Token("float_lit", "", m.group(), i, m.end(), lines, doc))
                i = m.end()
                continue
            m = _INT.match(src, i)
            tokens.append(Token("integer_lit", "", m.group(), i, m.end(), lines, doc))
            i = m.end()
            continue
        if c.isalpha() or c == "_":
            m = _IDENT.match(src, i)
            text = m.group()
            if text in KEYWORDS:
                tokens.append(Token("keyword", text, text, i, m.end(), lines, doc))
            else:
                tokens.append(Token("identifier", "", text, i, m.end(), lines, doc))
            i = m.end()
            continue
        if c == "\\" and i + 1 < n and src[i + 1] in "uU":
            end = skip_to_next_line(i)
            diags.append(Diagnostic("error", "universal character names are not supported", doc,
                                    rng(i, i + 2), "ucn-unsupported"))
            i = end
            line_start = True
            continue
        m = _PUNCT.match(src, i)
        if m:
            text = m.group()
            name = _DIGRAPHS.get(text, text)
            tokens.append(Token("punctuator", name, text, i, m.end(), lines, doc))
            i = m.end()
            continue
        end = skip_to_next_line(i)
        diags.append(Diagnostic("error", f"stray character {c!r}", doc, rng(i, i + 1),
                                "stray-character"))
        i = end
        line_start = True
    return LexResult(tokens, trivia, diags)
