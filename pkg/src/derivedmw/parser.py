"""Polynomial expression parser (precedence climbing).

Grammar::

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ('^' exponent)?
    exponent:= INT ('^' exponent)?          (right associative)
    atom    := NUMBER | IDENT | '(' expr ')'

NUMBER is an integer or ``a/b`` written without spaces; there is no division
operator and no implicit multiplication.  Offsets in diagnostics are byte
offsets into the UTF-8 encoded input.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError, UndeclaredIdentifierError
from .polycore import MultiPoly, PolyRing

MAX_EXPONENT = 1000
MAX_DEPTH = 100

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


def _byte_offset(text: str, i: int) -> int:
    return len(text[:i].encode("utf-8"))


def tokenize(text: str) -> list:
    """(kind, value, char offset) triples ending with an ('end', None, len) token."""
    out = []
    i = 0
    n = len(text)
    while True:
        while i < n and text[i].isspace():
            i += 1
        if i >= n:
            break
        m = _TOKEN.match(text, i)
        if m is None or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", _byte_offset(text, i), text)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        out.append((kind, m.group(kind), start))
        i = m.end()
    out.append(("end", None, n))
    return out


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.toks = tokenize(text)
        self.pos = 0
        self.depth = 0

    def peek(self):
        return self.toks[self.pos]

    def advance(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, _byte_offset(self.text, tok[2]), self.text)

    def parse(self) -> MultiPoly:
        v = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise self.error(f"unexpected {tok[1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self):
        v = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.advance()
            v = v * self.unary()
        return v

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.advance()
            self._enter()
            v = self.unary()
            self.depth -= 1
            return -v if tok[1] == "-" else v
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            return base ** self.exponent()
        return base

    def exponent(self) -> int:
        tok = self.advance()
        if tok[0] != "num" or "/" in tok[1]:
            raise self.error("exponent must be a non-negative integer literal", tok)
        e = int(tok[1])
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            self._enter()
            inner = self.exponent()
            self.depth -= 1
            if e > 1 and inner > 20:
                raise self.error(f"exponent exceeds {MAX_EXPONENT}", tok)
            e = e ** inner
        if e > MAX_EXPONENT:
            raise self.error(f"exponent exceeds {MAX_EXPONENT}", tok)
        return e

    def atom(self):
        tok = self.advance()
        kind, val, _ = tok
        if kind == "num":
            if "/" in val:
                a, b = val.split("/")
                if int(b) == 0:
                    raise self.error("zero denominator", tok)
                return self.ring.const(Fraction(int(a), int(b)))
            return self.ring.const(int(val))
        if kind == "id":
            if val not in self.ring.names:
                raise UndeclaredIdentifierError(val, _byte_offset(self.text, tok[2]), self.text)
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            self._enter()
            v = self.expr()
            self.depth -= 1
            close = self.advance()
            if close[0] != "op" or close[1] != ")":
                raise self.error("expected ')'", close)
            return v
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"expected an operand, found {val!r}", tok)

    def _enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self.error("expression nested too deeply")


def parse_poly(text: str, ring) -> MultiPoly:
    """Parse ``text`` over ``ring`` (a PolyRing or a sequence of variable names)."""
    if not isinstance(ring, PolyRing):
        ring = PolyRing(ring)
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {type(text).__name__}", 0, None)
    return _Parser(text, ring).parse()


__all__ = ["parse_poly", "tokenize", "MAX_EXPONENT"]
