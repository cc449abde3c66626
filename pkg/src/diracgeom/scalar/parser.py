"""Recursive-descent parser for exact rational-function expressions.

Grammar (whitespace is insignificant, implicit multiplication is rejected)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('+' | '-') unary | factor
    factor  := base ('^' integer)?
    base    := integer | identifier | '(' expr ')'

A rational literal ``3/4`` is read as the quotient of two integer bases,
which yields the same value. Unary sign is accepted so that every printed
canonical form reads back.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from ..errors import ParseError, UnknownVariableInText
from .expr import ScalarExpr
from .poly import Poly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok[2], self.text)

    def parse(self) -> ScalarExpr:
        value = self.expr()
        if self.peek()[0] != "end":
            tok = self.peek()
            if tok[0] in ("int", "name", "("):
                self.fail("implicit multiplication is not allowed")
            self.fail(f"unexpected {tok[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] in ("*", "/"):
            op_tok = self.take()
            rhs = self.unary()
            if op_tok[0] == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by the zero polynomial", op_tok[2], self.text)
                value = value / rhs
        return value

    def unary(self):
        if self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            value = self.unary()
            return -value if op == "-" else value
        return self.factor()

    def factor(self):
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                self.fail("exponent must be a non-negative integer literal")
            self.take()
            k = int(tok[1])
            if k == 0 and base.is_zero():
                return ScalarExpr.one(self.variables)
            base = base ** k
        return base

    def base(self):
        tok = self.take()
        kind = tok[0]
        if kind == "int":
            return ScalarExpr.constant(self.variables, int(tok[1]))
        if kind == "name":
            if tok[1] not in self.variables:
                raise UnknownVariableInText(f"unknown variable {tok[1]!r}", tok[2], self.text)
            return ScalarExpr.var(self.variables, tok[1])
        if kind == "(":
            value = self.expr()
            if self.peek()[0] != ")":
                self.fail("expected ')'")
            self.take()
            return value
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected {tok[1]!r}", tok)


def parse_expr(text: str, variables: Sequence[str]) -> ScalarExpr:
    """Parse ``text`` into a canonical rational function over ``variables``."""
    return _Parser(text, variables).parse()


def parse_poly(text: str, variables: Sequence[str]) -> Poly:
    value = parse_expr(text, variables)
    if not value.is_polynomial():
        raise ParseError("expected a polynomial", 0, text)
    return value.num.scale(1 / value.den.constant_value())


def parse_rational(text: str) -> Fraction:
    """Parse a rational constant such as ``-3/4`` or ``2``."""
    value = parse_expr(text, ())
    return value.constant_value()

