"""Exact arithmetic kernel: rationals, sparse polynomials, rational functions."""

from fractions import Fraction

from .expr import Point, ScalarExpr, as_point
from .parser import parse_expr, parse_poly, parse_rational
from .poly import Poly, format_poly

Rational = Fraction


def differentiate(f: ScalarExpr, var: str) -> ScalarExpr:
    return f.diff(var)


def evaluate(f: ScalarExpr, p) -> Fraction:
    return f.evaluate(p)


__all__ = [
    "Fraction",
    "Rational",
    "Poly",
    "ScalarExpr",
    "Point",
    "as_point",
    "parse_expr",
    "parse_poly",
    "parse_rational",
    "differentiate",
    "evaluate",
    "format_poly",
]
