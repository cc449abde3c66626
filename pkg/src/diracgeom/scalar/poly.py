"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..errors import DivisionByZero, UnknownVariable, VariableMismatch
from ._gcd import int_poly_gcd

Exponents = tuple


def grlex_key(e: Exponents):
    return (sum(e), e)


def _to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


class Poly:
    """Polynomial over the rationals in a fixed ordered set of variables.

    Terms live in a dict ``{exponent tuple: Fraction}`` that never stores a
    zero coefficient. ``terms()`` yields them in decreasing graded-lex order.
    """

    __slots__ = ("variables", "_t", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponents, object] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match {n} variables")
            c = _to_fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self._t = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "Poly":
        p = object.__new__(cls)
        p.variables = variables
        p._t = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> "Poly":
        variables = tuple(variables)
        c = _to_fraction(c)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Poly":
        return cls._raw(tuple(variables), {})

    @classmethod
    def one(cls, variables: Sequence[str]) -> "Poly":
        return cls.constant(variables, 1)

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "Poly":
        variables = tuple(variables)
        try:
            i = variables.index(name)
        except ValueError:
            raise UnknownVariable(name) from None
        e = [0] * len(variables)
        e[i] = 1
        return cls._raw(variables, {tuple(e): Fraction(1)})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def terms(self) -> list:
        return sorted(self._t.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def as_dict(self) -> dict:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and not any(next(iter(self._t))))

    def constant_value(self) -> Fraction:
        return self._t.get((0,) * self.nvars, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def degree(self) -> int:
        return max((sum(e) for e in self._t), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._t), default=-1)

    def leading_term(self):
        e = max(self._t, key=grlex_key)
        return e, self._t[e]

    def leading_coefficient(self) -> Fraction:
        return self.leading_term()[1] if self._t else Fraction(0)

    # -- ring structure ---------------------------------------------------

    def _check(self, other: "Poly"):
        if other.variables is not self.variables and other.variables != self.variables:
            raise VariableMismatch(f"{self.variables} vs {other.variables}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if len(self._t) < len(other._t):
            a, b = other._t, self._t
        else:
            a, b = self._t, other._t
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.variables, {e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._t, other._t
        if not a or not b:
            return Poly._raw(self.variables, {})
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly._raw(self.variables, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = _to_fraction(c)
        if not c:
            return Poly._raw(self.variables, {})
        return Poly._raw(self.variables, {e: v * c for e, v in self._t.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.one(self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.variables == other.variables and self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._t.items())))
        return self._hash

    def __bool__(self):
        return bool(self._t)

    # -- division and gcd ---------------------------------------------------

    def divexact(self, other: "Poly") -> "Poly":
        """Exact quotient; raises ``ArithmeticError`` if ``other`` does not divide."""
        self._check(other)
        if not other._t:
            raise DivisionByZero("division by the zero polynomial")
        if other.is_constant():
            return self.scale(1 / other.constant_value())
        lt_e, lt_c = other.leading_term()
        r = dict(self._t)
        q = {}
        while r:
            e = max(r, key=grlex_key)
            c = r[e]
            m = tuple(x - y for x, y in zip(e, lt_e))
            if any(x < 0 for x in m):
                raise ArithmeticError("polynomial division is not exact")
            f = c / lt_c
            q[m] = f
            for e2, c2 in other._t.items():
                t = tuple(x + y for x, y in zip(m, e2))
                s = r.get(t, 0) - f * c2
                if s:
                    r[t] = s
                else:
                    r.pop(t, None)
        return Poly._raw(self.variables, q)

    def content_and_primitive(self):
        """Split into a rational content and an integer primitive polynomial."""
        if not self._t:
            return Fraction(0), {}
        den = 1
        for c in self._t.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = {e: int(c * den) for e, c in self._t.items()}
        g = 0
        for v in ints.values():
            g = math.gcd(g, v)
        return Fraction(g, den), {e: v // g for e, v in ints.items()}

    def gcd(self, other: "Poly") -> "Poly":
        """Greatest common divisor, normalized to leading coefficient 1."""
        self._check(other)
        if not self._t:
            return other.monic() if other._t else other
        if not other._t:
            return self.monic()
        n = self.nvars
        if self.is_constant() or other.is_constant():
            return Poly.one(self.variables)
        if self.is_monomial() or other.is_monomial():
            mono, rest = (self, other) if self.is_monomial() else (other, self)
            e = next(iter(mono._t))
            for e2 in rest._t:
                e = tuple(min(x, y) for x, y in zip(e, e2))
            return Poly._raw(self.variables, {e: Fraction(1)})
        _, a = self.content_and_primitive()
        _, b = other.content_and_primitive()
        g = int_poly_gcd(a, b, n)
        return Poly(self.variables, g).monic()

    def monic(self) -> "Poly":
        if not self._t:
            return self
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        return self.scale(1 / lc)

    def lcm(self, other: "Poly") -> "Poly":
        if not self._t or not other._t:
            return Poly.zero(self.variables)
        g = self.gcd(other)
        return (self.divexact(g) * other).monic()

    # -- calculus and evaluation -------------------------------------------

    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self._t.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = c * k
        return Poly._raw(self.variables, out)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        total = Fraction(0)
        for e, c in self._t.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def compose(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute ``images[i]`` for variable ``i``; images share one variable set."""
        if len(images) != self.nvars:
            raise ValueError("one image per variable is required")
        target = images[0].variables if images else ()
        result = Poly.zero(target)
        cache = {}
        for e, c in self._t.items():
            t = Poly.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    t = t * cache[key]
            result = result + t
        return result

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, {list(self.variables)})"

    def __str__(self):
        return format_poly(self)


def _format_monomial(variables, e) -> str:
    parts = []
    for name, k in zip(variables, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def _format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for idx, (e, c) in enumerate(p.terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = _format_monomial(p.variables, e)
        if not mono:
            body = _format_coefficient(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coefficient(a)}*{mono}"
        if idx == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def poly_from_terms(variables: Sequence[str], terms: Iterable[tuple]) -> Poly:
    acc = {}
    for e, c in terms:
        acc[tuple(e)] = acc.get(tuple(e), 0) + _to_fraction(c)
    return Poly(variables, acc)
