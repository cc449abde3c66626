"""Normalized rational functions over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import DenominatorVanishes, DivisionByZero, UnknownVariable
from .poly import Poly, format_poly

Point = tuple  # tuple of Fractions, one per ambient variable


def as_point(coords) -> Point:
    return tuple(c if isinstance(c, Fraction) else Fraction(c) for c in coords)


class ScalarExpr:
    """Quotient ``num/den`` with ``gcd(num, den) = 1`` and ``den`` monic.

    Monic means the graded-lex leading coefficient of ``den`` is exactly 1,
    so two equal rational functions always have identical ``num`` and ``den``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.one(num.variables)
        num._check(den)
        if den.is_zero():
            raise DivisionByZero("denominator is the zero polynomial")
        if num.is_zero():
            self.num, self.den = num, Poly.one(num.variables)
            return
        if not den.is_constant():
            g = num.gcd(den)
            if not g.is_constant():
                num, den = num.divexact(g), den.divexact(g)
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num, self.den = num, den

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "ScalarExpr":
        x = object.__new__(cls)
        x.num, x.den = num, den
        return x

    @classmethod
    def from_poly(cls, p: Poly) -> "ScalarExpr":
        return cls._raw(p, Poly.one(p.variables))

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> "ScalarExpr":
        return cls.from_poly(Poly.constant(variables, c))

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "ScalarExpr":
        return cls.from_poly(Poly.zero(variables))

    @classmethod
    def one(cls, variables: Sequence[str]) -> "ScalarExpr":
        return cls.from_poly(Poly.one(variables))

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "ScalarExpr":
        return cls.from_poly(Poly.var(variables, name))

    @property
    def variables(self) -> tuple:
        return self.num.variables

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def __bool__(self):
        return not self.num.is_zero()

    # -- field operations -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ScalarExpr):
            self.num._check(other.num)
            return other
        if isinstance(other, Poly):
            self.num._check(other)
            return ScalarExpr.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return ScalarExpr.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den.is_constant() and other.den.is_constant():
            return ScalarExpr._raw(self.num + other.num, self.den)
        if self.den == other.den:
            return ScalarExpr(self.num + other.num, self.den)
        g = self.den.gcd(other.den)
        b1 = self.den.divexact(g)
        d1 = other.den.divexact(g)
        num = self.num * d1 + other.num * b1
        return ScalarExpr(num, b1 * other.den)

    __radd__ = __add__

    def __neg__(self):
        return ScalarExpr._raw(-self.num, self.den)

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
        if self.num.is_zero() or other.num.is_zero():
            return ScalarExpr.zero(self.variables)
        if self.den.is_constant() and other.den.is_constant():
            return ScalarExpr._raw(self.num * other.num, self.den)
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = a.gcd(d)
        g2 = c.gcd(b)
        if not g1.is_constant():
            a, d = a.divexact(g1), d.divexact(g1)
        if not g2.is_constant():
            c, b = c.divexact(g2), b.divexact(g2)
        num, den = a * c, b * d
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        return ScalarExpr._raw(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "ScalarExpr":
        if self.num.is_zero():
            raise DivisionByZero("inverse of the zero expression")
        num, den = self.den, self.num
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        return ScalarExpr._raw(num, den)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("integer exponent required")
        if k < 0:
            return self.inverse() ** (-k)
        return ScalarExpr._raw(self.num ** k, self.den ** k)

    def __eq__(self, other):
        if isinstance(other, ScalarExpr):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den.is_constant() and self.num == other
        if isinstance(other, Poly):
            return self.den.is_constant() and self.num == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    # -- calculus and evaluation -------------------------------------------

    def diff(self, name: str) -> "ScalarExpr":
        try:
            i = self.variables.index(name)
        except ValueError:
            raise UnknownVariable(name) from None
        return self.diff_index(i)

    def diff_index(self, i: int) -> "ScalarExpr":
        dn = self.num.diff(i)
        if self.den.is_constant():
            return ScalarExpr._raw(dn, self.den)
        dd = self.den.diff(i)
        if dd.is_zero():
            return ScalarExpr(dn, self.den)
        # with g = gcd(d, d'), d = g*d1 and d' = g*d2:
        # (n/d)' = (n' d - n d') / d^2 = (n' d1 - n d2) / (d d1)
        g = self.den.gcd(dd)
        d1, d2 = self.den.divexact(g), dd.divexact(g)
        return ScalarExpr(dn * d1 - self.num * d2, self.den * d1)

    def evaluate(self, point) -> Fraction:
        point = as_point(point)
        d = self.den.evaluate(point)
        if d == 0:
            raise DenominatorVanishes(f"{self} is undefined at {tuple(str(c) for c in point)}")
        return self.num.evaluate(point) / d

    def compose(self, images: Sequence[Poly]) -> "ScalarExpr":
        """Substitute polynomials for the variables (pullback along a polynomial map)."""
        num = self.num.compose(images)
        den = self.den.compose(images)
        if den.is_zero():
            raise DenominatorVanishes(f"denominator of {self} vanishes identically after substitution")
        return ScalarExpr(num, den)

    def __str__(self):
        if self.den.is_constant():
            return format_poly(self.num)
        # display with an integer, primitive denominator; value is unchanged
        content, _ = self.den.content_and_primitive()
        num, den = self.num.scale(1 / content), self.den.scale(1 / content)
        n, d = format_poly(num), format_poly(den)
        if not num.is_monomial():
            n = f"({n})"
        if not (den.is_monomial() and den.leading_coefficient() == 1
                and sum(1 for k in den.leading_term()[0] if k) == 1):
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"ScalarExpr({str(self)!r})"
