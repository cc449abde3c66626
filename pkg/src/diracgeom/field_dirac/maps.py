"""Polynomial maps between coordinate spaces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import DenominatorVanishes, DimensionMismatch, SingularPoint
from ..linalg import FunctionField, Matrix
from ..scalar import Poly, ScalarExpr, as_point, parse_poly


@dataclass(frozen=True)
class PolyMap:
    """``phi: R^m -> R^n`` with polynomial components in the source variables."""

    source_vars: tuple
    target_vars: tuple
    components: tuple

    def __post_init__(self):
        if len(self.components) != len(self.target_vars):
            raise DimensionMismatch(f"{len(self.components)} components for {len(self.target_vars)} targets")
        for c in self.components:
            if c.variables != tuple(self.source_vars):
                raise DimensionMismatch("component is not a polynomial in the source variables")

    @classmethod
    def make(cls, source_vars: Sequence[str], target_vars: Sequence[str], components: Sequence) -> "PolyMap":
        """Components may be Polys, polynomial ScalarExprs, constants or expression strings."""
        src = tuple(source_vars)
        comps = []
        for c in components:
            if isinstance(c, str):
                c = parse_poly(c, src)
            elif isinstance(c, ScalarExpr):
                if not c.is_polynomial():
                    raise DimensionMismatch("map components must be polynomials")
                c = c.num.scale(1 / c.den.constant_value())
            elif not isinstance(c, Poly):
                c = Poly.constant(src, c)
            comps.append(c)
        return cls(src, tuple(target_vars), tuple(comps))

    @classmethod
    def identity(cls, variables: Sequence[str]) -> "PolyMap":
        v = tuple(variables)
        return cls(v, v, tuple(Poly.var(v, x) for x in v))

    @property
    def source_dim(self) -> int:
        return len(self.source_vars)

    @property
    def target_dim(self) -> int:
        return len(self.target_vars)

    def __call__(self, p) -> tuple:
        p = as_point(p)
        return tuple(c.evaluate(p) for c in self.components)

    def jacobian(self) -> Matrix:
        """``target_dim x source_dim`` matrix over the source function field."""
        field = FunctionField(self.source_vars)
        rows = [[ScalarExpr.from_poly(c.diff(j)) for j in range(self.source_dim)] for c in self.components]
        return Matrix(rows, self.source_dim, field)

    def jacobian_at(self, p) -> Matrix:
        p = as_point(p)
        return Matrix([[c.diff(j).evaluate(p) for j in range(self.source_dim)] for c in self.components],
                      self.source_dim)

    def pull(self, f: ScalarExpr) -> ScalarExpr:
        """``f ∘ phi``; raises :class:`SingularPoint` if the image lies in the polar locus."""
        if f.variables != self.target_vars:
            raise DimensionMismatch("function is not over the target variables")
        try:
            return f.compose(self.components)
        except DenominatorVanishes as e:
            raise SingularPoint(f"the image of phi lies where {f} is undefined") from e

    def pull_poly(self, p: Poly) -> Poly:
        return p.compose(self.components)

    def after(self, other: "PolyMap") -> "PolyMap":
        """``self ∘ other``."""
        if other.target_dim != self.source_dim:
            raise DimensionMismatch("maps do not compose")
        return PolyMap(other.source_vars, self.target_vars,
                       tuple(c.compose(other.components) for c in self.components))

    def is_identity(self) -> bool:
        return (self.source_vars == self.target_vars
                and all(c == Poly.var(self.source_vars, v) for c, v in zip(self.components, self.source_vars)))
