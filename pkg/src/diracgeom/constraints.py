"""Constraint submanifolds ``C = {psi = 0}`` of a Poisson manifold R^m.

Functions are never restricted to ``C`` symbolically. Anything that lives
on ``C`` is evaluated at probe points that satisfy ``psi = 0`` exactly, or
transported through an explicit polynomial parametrization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    ConsistencyError,
    DimensionMismatch,
    DivisionByZero,
    InvalidParametrization,
    NotCosymplecticAtPoint,
    NotOnConstraint,
    NotPoisson,
    RankDropInPsi,
    SecondClassViolated,
)
from .field_dirac import (
    DiracField,
    PolyMap,
    admissible_bracket,
    backward_image,
    is_poisson,
    poisson_bracket,
    probe_points,
)
from .linalg import FunctionField, Matrix, Subspace, det, intersect, inverse, kernel, rank, sum_
from .scalar import Poly, ScalarExpr, as_point

COISOTROPIC = "Coisotropic"
POISSON_DIRAC = "PoissonDirac"
COSYMPLECTIC = "Cosymplectic"
POISSON_SUBMANIFOLD = "PoissonSubmanifold"
MIXED = "Mixed"


class ConstraintSystem:
    """Poisson bivector ``pi`` on R^m with constraints ``psi^1..psi^k`` and probes on C."""

    def __init__(self, pi: Matrix, psis: Sequence[Poly], probes: Sequence = (), check_poisson: bool = True):
        if not isinstance(pi.field, FunctionField):
            raise DimensionMismatch("pi must have rational-function entries")
        self.variables = pi.field.variables
        self.m = len(self.variables)
        if pi.shape != (self.m, self.m) or not pi.is_skew():
            raise DimensionMismatch("pi must be a skew m x m matrix")
        if check_poisson and not is_poisson(pi):
            raise NotPoisson("the Jacobiator of pi does not vanish")
        self.pi = pi
        self.psis = tuple(psis)
        for f in self.psis:
            if f.variables != self.variables:
                raise DimensionMismatch("constraint over different variables")
        self.probes = tuple(as_point(p) for p in probes)
        for p in self.probes:
            self._check_point(p)
        self._cinv = None
        self._c = None

    @property
    def k(self) -> int:
        return len(self.psis)

    @property
    def field(self) -> FunctionField:
        return FunctionField(self.variables)

    def psi_exprs(self) -> list:
        return [ScalarExpr.from_poly(f) for f in self.psis]

    def coordinate(self, i: int) -> ScalarExpr:
        return ScalarExpr.var(self.variables, self.variables[i])

    def _check_point(self, p):
        if len(p) != self.m:
            raise DimensionMismatch(f"point has {len(p)} coordinates, expected {self.m}")
        for f in self.psis:
            if f.evaluate(p) != 0:
                raise NotOnConstraint(f"{f} = {f.evaluate(p)} at {tuple(map(str, p))}")
        if self.k and rank(self.dpsi_at(p)) < self.k:
            raise RankDropInPsi(f"dpsi has rank < {self.k} at {tuple(map(str, p))}")

    def dpsi_at(self, p) -> Matrix:
        return Matrix([[f.diff(j).evaluate(p) for j in range(self.m)] for f in self.psis], self.m)

    def pi_at(self, p) -> Matrix:
        return self.pi.evaluate(p)

    def bracket(self, f: ScalarExpr, g: ScalarExpr) -> ScalarExpr:
        return poisson_bracket(self.pi, self.field.coerce(f), self.field.coerce(g))

    def constraint_matrix(self) -> Matrix:
        if self._c is None:
            ps = self.psi_exprs()
            self._c = Matrix([[self.bracket(a, b) for b in ps] for a in ps], self.k, self.field)
        return self._c

    def constraint_inverse(self) -> Matrix:
        if self._cinv is None:
            c = self.constraint_matrix()
            try:
                self._cinv = inverse(c)
            except DivisionByZero:
                raise SecondClassViolated("det(c) vanishes identically") from None
        return self._cinv


@dataclass(frozen=True)
class Classification:
    label: str
    dim_intersection: int  # dim TC ∩ pi#(TC°)
    dim_image: int  # dim pi#(TC°)


def classify_point(cs: ConstraintSystem, p) -> Classification:
    p = as_point(p)
    cs._check_point(p)
    m = cs.m
    if cs.k == 0:
        return Classification(POISSON_SUBMANIFOLD, 0, 0)
    dpsi = cs.dpsi_at(p)
    tc = kernel(dpsi)
    image = Subspace.span((dpsi @ cs.pi_at(p)).rows, m)  # rows alpha^T P = pi#(alpha)
    inter = intersect(tc, image).dim
    if image.dim == 0:
        label = POISSON_SUBMANIFOLD
    elif tc.contains_subspace(image):
        label = COISOTROPIC
    elif inter == 0:
        label = COSYMPLECTIC if sum_(tc, image).dim == m else POISSON_DIRAC
    else:
        label = MIXED
    return Classification(label, inter, image.dim)


@dataclass(frozen=True)
class ConstraintMatrixReport:
    matrix: Matrix
    det: ScalarExpr
    invertible: bool
    probe_invertible: tuple  # (point, bool) per probe


def constraint_matrix(cs: ConstraintSystem) -> ConstraintMatrixReport:
    c = cs.constraint_matrix()
    d = det(c) if cs.k else cs.field.one
    verdicts = []
    for p in cs.probes:
        at_p = det(c.evaluate(p)) != 0 if cs.k else True
        cosym = classify_point(cs, p).label == COSYMPLECTIC
        if cs.k and at_p != cosym:
            raise ConsistencyError(f"det(c) and the classification disagree at {tuple(map(str, p))}")
        verdicts.append((p, at_p))
    return ConstraintMatrixReport(c, d, not d.is_zero(), tuple(verdicts))


def dirac_bracket(cs: ConstraintSystem, f: ScalarExpr, g: ScalarExpr) -> ScalarExpr:
    """``{F,G} - {F,psi^i} c_ij {psi^j,G}``."""
    f = cs.field.coerce(f)
    g = cs.field.coerce(g)
    value = cs.bracket(f, g)
    if cs.k == 0:
        return value
    cinv = cs.constraint_inverse()
    ps = cs.psi_exprs()
    fp = [cs.bracket(f, a) for a in ps]
    pg = [cs.bracket(a, g) for a in ps]
    for i in range(cs.k):
        if not fp[i]:
            continue
        for j in range(cs.k):
            if cinv.rows[i][j] and pg[j]:
                value = value - fp[i] * cinv.rows[i][j] * pg[j]
    return value


def dirac_vector_field(cs: ConstraintSystem, h: ScalarExpr) -> tuple:
    """Equations of motion ``xdot^i = {x^i, H}`` for the Dirac bracket."""
    return tuple(dirac_bracket(cs, cs.coordinate(i), h) for i in range(cs.m))


def tangency_check(cs: ConstraintSystem, h: ScalarExpr) -> bool:
    """``dpsi^a`` applied to the Dirac flow of ``H`` is the zero rational function."""
    xdot = dirac_vector_field(cs, h)
    for f in cs.psi_exprs():
        s = cs.field.zero
        for i, v in enumerate(xdot):
            if v:
                s = s + f.diff_index(i) * v
        if not s.is_zero():
            return False
    return True


def project_to_tangent(cs: ConstraintSystem, p, y: Sequence) -> tuple:
    """Split ``Y`` at a cosymplectic point into ``(TC part, pi#(TC°) part)``."""
    p = as_point(p)
    if classify_point(cs, p).label != COSYMPLECTIC:
        raise NotCosymplecticAtPoint(f"C is not cosymplectic at {tuple(map(str, p))}")
    y = as_point(y)
    if len(y) != cs.m:
        raise DimensionMismatch("vector has the wrong length")
    dpsi = cs.dpsi_at(p)
    cinv = inverse(cs.constraint_matrix().evaluate(p))
    pi_p = cs.pi_at(p)
    xpsi = (dpsi @ pi_p).rows  # X_{psi^j} = pi#(dpsi^j)
    dy = dpsi.apply(y)
    normal = [Fraction(0)] * cs.m
    for i in range(cs.k):
        for j in range(cs.k):
            coef = dy[i] * cinv.rows[i][j]
            if coef:
                normal = [a + coef * b for a, b in zip(normal, xpsi[j])]
    tangent = tuple(a - b for a, b in zip(y, normal))
    return tangent, tuple(normal)


def hamiltonian_at(cs: ConstraintSystem, f: ScalarExpr, p) -> tuple:
    """``X_F = pi#(dF)`` evaluated at ``p``, so that ``X_F(g) = {F, g}``."""
    p = as_point(p)
    f = cs.field.coerce(f)
    df = [f.diff_index(i).evaluate(p) for i in range(cs.m)]
    return cs.pi_at(p).transpose().apply(df)


@dataclass(frozen=True)
class Parametrization:
    """Polynomial map ``sigma: R^d -> R^m`` onto (part of) the constraint set."""

    cs: ConstraintSystem
    sigma: PolyMap
    points: tuple = ()

    def __post_init__(self):
        cs, s = self.cs, self.sigma
        if s.target_dim != cs.m:
            raise InvalidParametrization(f"sigma lands in R^{s.target_dim}, expected R^{cs.m}")
        if s.source_dim != cs.m - cs.k:
            raise InvalidParametrization(f"sigma has {s.source_dim} parameters, expected {cs.m - cs.k}")
        for f in cs.psis:
            if not f.compose(s.components).is_zero():
                raise InvalidParametrization(f"{f} does not vanish along sigma")
        if rank(s.jacobian()) < s.source_dim:
            raise InvalidParametrization("dsigma is generically degenerate")
        for q in self.points:
            if rank(s.jacobian_at(q)) < s.source_dim:
                raise InvalidParametrization(f"dsigma drops rank at {tuple(map(str, as_point(q)))}")


def pullback_via_parametrization(cs: ConstraintSystem, par: Parametrization, probes: Sequence = (),
                                 seed: int = 0, count: int = 16):
    """Backward image of ``graph(pi)`` along ``sigma``, cross-checked against the Dirac bracket.

    When ``C`` is cosymplectic at every probe of ``cs``, admissible brackets of
    pulled-back coordinates are compared with the Dirac bracket composed with
    ``sigma`` at rational parameter values.
    """
    if par.cs is not cs:
        raise InvalidParametrization("parametrization belongs to another constraint system")
    d_m = DiracField.bivector_graph(cs.pi)
    result, report = backward_image(d_m, par.sigma, probes=probes, seed=seed, count=count)
    cosym = cs.k > 0 and cs.probes and all(classify_point(cs, p).label == COSYMPLECTIC for p in cs.probes)
    if cosym and result.kind == "bivector":
        _cross_check_brackets(cs, par, result, seed)
    return result, report


def _cross_check_brackets(cs: ConstraintSystem, par: Parametrization, result: DiracField, seed: int,
                          count: int = 10):
    sigma = par.sigma
    detc = det(cs.constraint_matrix())
    det_pull = detc.compose(sigma.components)
    avoid = [result.singular_locus_hint, det_pull.num, det_pull.den]
    pts = probe_points(sigma.source_dim, count, seed, avoid)
    xs = [cs.coordinate(i) for i in range(cs.m)]
    pulled = [x.compose(sigma.components) for x in xs]
    for a in range(cs.m):
        for b in range(a + 1, cs.m):
            db = dirac_bracket(cs, xs[a], xs[b])
            ab = admissible_bracket(result, pulled[a], pulled[b])
            for q in pts:
                if db.evaluate(sigma(q)) != ab.evaluate(q):
                    raise ConsistencyError(f"Dirac bracket and pulled-back bracket differ at {q}")


def momentum_level_set(pi: Matrix, j_components: Sequence[Poly], mu: Sequence, probes: Sequence = ()
                       ) -> ConstraintSystem:
    """``J^-1(mu)`` as a constraint system with ``psi^a = J^a - mu^a``."""
    if len(j_components) != len(mu):
        raise DimensionMismatch("momentum value has the wrong length")
    psis = [f - Poly.constant(f.variables, Fraction(v)) for f, v in zip(j_components, mu)]
    return ConstraintSystem(pi, psis, probes)


__all__ = [
    "ConstraintSystem",
    "Classification",
    "ConstraintMatrixReport",
    "Parametrization",
    "COISOTROPIC",
    "POISSON_DIRAC",
    "COSYMPLECTIC",
    "POISSON_SUBMANIFOLD",
    "MIXED",
    "classify_point",
    "constraint_matrix",
    "dirac_bracket",
    "dirac_vector_field",
    "tangency_check",
    "project_to_tangent",
    "hamiltonian_at",
    "pullback_via_parametrization",
    "momentum_level_set",
]
