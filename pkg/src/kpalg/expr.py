"""Element expressions: ``2*s(a.x)*st(b) - p(v) + 1/2*st(f)``.

Grammar (whitespace insignificant)::

    element := '0' | ['+'|'-'] term (('+'|'-') term)*
    term    := [coeff '*'] factor ('*' factor)*
    factor  := 'p(' vertex ')' | 's(' path ')' | 'st(' path ')'
    path    := id ('.' id)*
    coeff   := integer | integer '/' integer
"""

from __future__ import annotations

import re

from .algebra import Element, KPAlgebra
from .kgraph import Path

_TOKEN = re.compile(r"\s*(?:([A-Za-z0-9_]+)|(\S))")


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only whitespace left
            break
        if m.group(1) is not None:
            tokens.append(("id", m.group(1), m.start(1) + 1))
        elif m.group(2) is not None:
            ch = m.group(2)
            if ch not in "()+-*/.":
                raise ExprSyntaxError(f"unexpected character {ch!r}", m.start(2) + 1)
            tokens.append((ch, ch, m.start(2) + 1))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, algebra: KPAlgebra, text: str):
        self.algebra = algebra
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, offset: int = 0) -> tuple[str, str, int]:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ExprSyntaxError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def element(self) -> Element:
        if [t[0] for t in self.tokens] == ["id", "end"] and self.tokens[0][1] == "0":
            return self.algebra.zero()
        total = self.algebra.zero()
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take(self.peek()[0])[0] == "-" else 1
        while True:
            term = self.term()
            total = total + (term if sign > 0 else -term)
            kind = self.peek()[0]
            if kind == "end":
                return total
            if kind not in ("+", "-"):
                tok = self.peek()
                raise ExprSyntaxError(f"expected '+', '-' or end, found {tok[1]!r}", tok[2])
            sign = -1 if self.take(kind)[0] == "-" else 1

    def term(self) -> Element:
        ring = self.algebra.ring
        coeff = ring.one
        kind, value, col = self.peek()
        if kind == "id" and value.isdigit() and self.peek(1)[0] in ("*", "/"):
            self.i += 1
            text = value
            if self.peek()[0] == "/":
                self.take("/")
                den = self.take("id")
                if not den[1].isdigit():
                    raise ExprSyntaxError(f"expected integer denominator, found {den[1]!r}", den[2])
                text = f"{value}/{den[1]}"
            coeff = ring.parse_scalar(text)
            self.take("*")
        result = self.factor()
        while self.peek()[0] == "*":
            self.take("*")
            result = result.mul(self.factor())
        return result.scale(coeff)

    def factor(self) -> Element:
        kind, name, col = self.peek()
        if kind != "id" or name not in ("p", "s", "st"):
            raise ExprSyntaxError(f"expected p(, s( or st(, found {name or 'end of input'!r}", col)
        self.i += 1
        self.take("(")
        ids = [self.take("id")[1]]
        while self.peek()[0] == ".":
            self.take(".")
            ids.append(self.take("id")[1])
        self.take(")")
        if name == "p":
            if len(ids) != 1:
                raise ExprSyntaxError("p( ) takes a single vertex", col)
            return self.algebra.p(ids[0])
        g = self.algebra.graph
        path = g.vertex(ids[0]) if len(ids) == 1 and ids[0] in g.vertices else g.canonicalize(ids)
        return self.algebra.s(path) if name == "s" else self.algebra.st(path)


def parse_element(algebra: KPAlgebra, text: str) -> Element:
    return _Parser(algebra, text).element()


def _format_pair(alpha: Path, beta: Path) -> str:
    if alpha.is_vertex and beta.is_vertex:
        return f"p({alpha.range})"
    if beta.is_vertex:
        return f"s({alpha})"
    if alpha.is_vertex:
        return f"st({beta})"
    return f"s({alpha})*st({beta})"


def format_element(a: Element, compact: bool = True) -> str:
    """Serialize in normal form with sorted terms; ``compact`` lowers the ghost degree where possible."""
    a = a.compact() if compact else a.normalize()
    if not a.terms:
        return "0"
    ring = a.ring
    parts = []
    for (alpha, beta), c in a.sorted_terms():
        negative = ring.kind != "Fp" and c < 0
        body = f"{ring.format(-c if negative else c)}*{_format_pair(alpha, beta)}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts)
