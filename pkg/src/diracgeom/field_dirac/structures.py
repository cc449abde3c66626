"""Dirac structures on R^n with rational-function coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import (
    ConsistencyError,
    DegenerateFrame,
    DenominatorVanishes,
    DimensionMismatch,
    NotAdmissible,
    NotASection,
    NotLagrangian,
    NotSkew,
    SingularPoint,
)
from ..linalg import FunctionField, Matrix, Subspace, annihilator, solve
from ..linear_dirac import LinearDirac, is_lagrangian, null_space
from ..scalar import Poly, ScalarExpr, as_point
from .calculus import (
    Section,
    contract,
    courant_bracket,
    d_function,
    d_twoform_on,
    directional,
    interior_twoform,
    jacobiator,
    lie_bracket,
    lie_derivative_form,
    pairing_sections,
)
from .probes import DEFAULT_COUNT, probe_points

BIVECTOR = "bivector"
TWOFORM = "twoform"
DISTRIBUTION = "distribution"
FRAME = "frame"


def _hint(entries, log, variables) -> Poly:
    h = Poly.one(variables)
    for x in entries:
        if not x.den.is_constant():
            h = h.lcm(x.den)
    for x in log:
        if isinstance(x, ScalarExpr):
            for p in (x.num, x.den):
                if not p.is_constant():
                    h = h.lcm(p)
    return h.monic()


class DiracField:
    """Lagrangian subbundle of ``T R^n + T* R^n`` given by a rational frame.

    ``frame`` always holds n sections. ``singular_locus_hint`` is a monic
    polynomial whose nonvanishing guarantees that the frame is defined, that
    its evaluation spans an n-dimensional lagrangian fiber, and that
    evaluating the generic RREF basis gives the pointwise one.
    """

    __slots__ = ("variables", "kind", "data", "frame", "singular_locus_hint", "space")

    def __init__(self, variables, kind: str, data: dict, frame: Sequence[Section],
                 singular_locus_hint: Poly, space: Subspace):
        self.variables = tuple(variables)
        self.kind = kind
        self.data = data
        self.frame = tuple(frame)
        self.singular_locus_hint = singular_locus_hint
        self.space = space

    @property
    def dim(self) -> int:
        return len(self.variables)

    @property
    def field(self) -> FunctionField:
        return FunctionField(self.variables)

    def linear(self) -> LinearDirac:
        """The generic fiber, a Dirac structure over the rational-function field."""
        return LinearDirac(self.dim, self.space, check=False)

    def same_structure(self, other: "DiracField") -> bool:
        return self.variables == other.variables and self.space == other.space

    def __repr__(self):
        return f"DiracField(kind={self.kind!r}, variables={self.variables}, hint={self.singular_locus_hint})"

    # -- constructors ------------------------------------------------------

    @classmethod
    def _build(cls, variables, kind, data, frame, extra_log=()):
        variables = tuple(variables)
        n = len(variables)
        field = FunctionField(variables)
        log = list(extra_log)
        vecs = [s.as_vector() for s in frame]
        # a graph frame contains an identity block, so its rank never drops
        space = Subspace.span(vecs, 2 * n, field, None if kind in (BIVECTOR, TWOFORM) else log)
        if space.dim < n:
            raise DegenerateFrame(f"frame has generic rank {space.dim} < {n}; RREF {space.basis!r}")
        if space.dim > n or not is_lagrangian(space):
            raise NotLagrangian("frame does not span a lagrangian subbundle")
        entries = [x for v in vecs for x in v]
        hint = _hint(entries, log, variables)
        return cls(variables, kind, data, frame, hint, space)

    @classmethod
    def bivector_graph(cls, pi: Matrix) -> "DiracField":
        if not pi.is_square() or not pi.is_skew():
            raise NotSkew("bivector must be a skew matrix")
        variables = pi.field.variables
        n = pi.nrows
        if n != len(variables):
            raise DimensionMismatch("bivector size differs from the number of variables")
        field = pi.field
        frame = [Section(tuple(pi.rows[i]), tuple(field.one if j == i else field.zero for j in range(n)))
                 for i in range(n)]
        return cls._build(variables, BIVECTOR, {"pi": pi}, frame)

    @classmethod
    def twoform_graph(cls, omega: Matrix) -> "DiracField":
        if not omega.is_square() or not omega.is_skew():
            raise NotSkew("2-form must be a skew matrix")
        variables = omega.field.variables
        n = omega.nrows
        if n != len(variables):
            raise DimensionMismatch("2-form size differs from the number of variables")
        field = omega.field
        frame = [Section(tuple(field.one if j == i else field.zero for j in range(n)), tuple(omega.rows[i]))
                 for i in range(n)]
        return cls._build(variables, TWOFORM, {"omega": omega}, frame)

    @classmethod
    def distribution_graph(cls, variables, generators: Sequence[Sequence], gauge: Matrix | None = None
                           ) -> "DiracField":
        """``{(X, i_X B + eta) | X in F, eta in annihilator(F)}``."""
        variables = tuple(variables)
        n = len(variables)
        field = FunctionField(variables)
        log = []
        gens = [tuple(field.coerce(x) for x in g) for g in generators]
        f = Subspace.span(gens, n, field, log)
        if gauge is None:
            gauge = Matrix.zeros(n, n, field)
        if not gauge.is_skew():
            raise NotSkew("gauge form must be skew")
        frame = [Section(tuple(v), interior_twoform(v, gauge)) for v in f.vectors]
        z = field.zero
        frame += [Section((z,) * n, tuple(eta)) for eta in annihilator(f, log).vectors]
        data = {"generators": tuple(gens), "gauge": gauge, "distribution": f}
        return cls._build(variables, DISTRIBUTION, data, frame, log)

    @classmethod
    def from_frame(cls, variables, sections: Sequence[Section]) -> "DiracField":
        variables = tuple(variables)
        if len(sections) != len(variables):
            raise DimensionMismatch(f"a frame needs exactly {len(variables)} sections")
        for s in sections:
            if s.variables != variables or s.n != len(variables):
                raise DimensionMismatch("section lives over different variables")
        return cls._build(variables, FRAME, {}, sections)

    # -- membership --------------------------------------------------------

    def contains(self, s: Section) -> bool:
        return self.space.contains(s.as_vector())

    def coordinates(self, s: Section):
        """Coefficients ``c`` with ``s = sum c_i frame_i``, or ``None``."""
        n = self.dim
        m = Matrix([[self.frame[i].as_vector()[k] for i in range(n)] for k in range(2 * n)], n, self.field)
        return solve(m, s.as_vector())


def pointwise(d: DiracField, p) -> LinearDirac:
    """The fiber of ``d`` at ``p`` as a Dirac structure over the rationals."""
    p = as_point(p)
    if len(p) != d.dim:
        raise DimensionMismatch(f"point has {len(p)} coordinates, expected {d.dim}")
    if d.singular_locus_hint.evaluate(p) == 0:
        raise SingularPoint(f"{tuple(map(str, p))} lies on the singular locus {d.singular_locus_hint}")
    try:
        vecs = [s.evaluate(p) for s in d.frame]
    except DenominatorVanishes as e:
        raise SingularPoint(str(e)) from None
    space = Subspace.span(vecs, 2 * d.dim)
    if space.dim != d.dim:
        raise SingularPoint(f"frame drops rank at {tuple(map(str, p))}")
    if not is_lagrangian(space):
        raise ConsistencyError("evaluated fiber is not lagrangian")
    return LinearDirac(d.dim, space, check=False)


# -- integrability ---------------------------------------------------------

def courant_tensor(d: DiracField) -> list:
    """``U[i][j][k] = <<[[a_i, a_j]], a_k>>`` on the frame."""
    n = d.dim
    a = d.frame
    z = ScalarExpr.zero(d.variables)
    ups = [[[z] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            br = courant_bracket(a[i], a[j])
            for k in range(n):
                v = pairing_sections(br, a[k])
                ups[i][j][k] = v
                ups[j][i][k] = -v
    return ups


def _fast_path_tensor(d: DiracField):
    """Independent formula for the Courant tensor, where one exists."""
    n = d.dim
    xs = [ScalarExpr.var(d.variables, v) for v in d.variables]
    if d.kind == BIVECTOR:
        pi = d.data["pi"]
        return lambda i, j, k: jacobiator(pi, xs[i], xs[j], xs[k])
    if d.kind == TWOFORM:
        omega = d.data["omega"]
        field = d.field
        e = [tuple(field.one if j == i else field.zero for j in range(n)) for i in range(n)]
        return lambda i, j, k: d_twoform_on(omega, e[i], e[j], e[k])
    return None


@dataclass(frozen=True)
class IntegrabilityVerdict:
    integrable: bool
    witness: tuple | None = None
    value: ScalarExpr | None = None
    point: tuple | None = None
    point_value: Fraction | None = None

    @property
    def label(self) -> str:
        return "IntegrableOnGenericLocus" if self.integrable else "NotIntegrable"


def is_integrable(d: DiracField, probes: Sequence = (), seed: int = 0, count: int = DEFAULT_COUNT
                  ) -> IntegrabilityVerdict:
    ups = courant_tensor(d)
    n = d.dim
    fast = _fast_path_tensor(d)
    if fast is not None:
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    if ups[i][j][k] != fast(i, j, k):
                        raise ConsistencyError(f"Courant tensor entry {(i, j, k)} disagrees with the "
                                               f"{d.kind} formula")
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                v = ups[i][j][k]
                if v.is_zero():
                    continue
                avoid = [d.singular_locus_hint, v.num, v.den]
                pts = [as_point(p) for p in probes]
                pts = [p for p in pts if all(f.evaluate(p) != 0 for f in avoid)]
                if not pts:
                    pts = probe_points(n, 1, seed, avoid)
                p = pts[0]
                return IntegrabilityVerdict(False, (i, j, k), v, p, v.evaluate(p))
    return IntegrabilityVerdict(True)


# -- hamiltonian calculus --------------------------------------------------

@dataclass(frozen=True)
class HamiltonianField:
    particular: tuple
    kernel_basis: tuple


def hamiltonian_vf(d: DiracField, f: ScalarExpr) -> HamiltonianField:
    """Solve ``(X, df) in L`` over the rational-function field."""
    f = d.field.coerce(f)
    n = d.dim
    df = d_function(f)
    m = Matrix([[d.frame[i].form[k] for i in range(n)] for k in range(n)], n, d.field)
    c = solve(m, df)
    if c is None:
        raise NotAdmissible(f"d({f}) is not in pr_T*(L)")
    z = d.field.zero
    x = [z] * n
    for ci, s in zip(c, d.frame):
        if ci:
            x = [a + ci * b for a, b in zip(x, s.vf)]
    kern = null_space(d.linear()).vectors
    return HamiltonianField(tuple(x), tuple(kern))


def admissible_bracket(d: DiracField, f: ScalarExpr, g: ScalarExpr) -> ScalarExpr:
    """``{f, g} = dg(X_f)``."""
    f = d.field.coerce(f)
    g = d.field.coerce(g)
    xf = hamiltonian_vf(d, f)
    hamiltonian_vf(d, g)
    value = directional(xf.particular, g)
    for k in xf.kernel_basis:
        shifted = tuple(a + b for a, b in zip(xf.particular, k))
        if directional(shifted, g) != value:
            raise ConsistencyError("bracket depends on the choice of hamiltonian vector field")
    return value


# -- symmetries and the algebroid ------------------------------------------

def lie_derivative_section(z: Sequence, a: Section) -> Section:
    return Section(lie_bracket(z, a.vf), lie_derivative_form(z, a.form))


def is_invariant_under(d: DiracField, z_fields: Sequence[Sequence]) -> bool:
    field = d.field
    for z in z_fields:
        z = tuple(field.coerce(c) for c in z)
        if len(z) != d.dim:
            raise DimensionMismatch("vector field has the wrong length")
        for a in d.frame:
            if not d.contains(lie_derivative_section(z, a)):
                return False
    return True


def anchor_and_algebroid_bracket(d: DiracField, a: Section, b: Section, integrable: bool | None = None):
    """``(pr_T(a), [[a, b]])`` for sections of ``L``."""
    for s, name in ((a, "a"), (b, "b")):
        if s.n != d.dim or not d.contains(s):
            raise NotASection(f"{name} is not a section of L")
    br = courant_bracket(a, b)
    if integrable is None:
        integrable = is_integrable(d).integrable
    if integrable and not d.contains(br):
        raise ConsistencyError("bracket of sections left L although L is integrable")
    return a.vf, br


def gauge_section(a: Section, b: Matrix) -> Section:
    """``(X, alpha) -> (X, alpha + i_X B)``."""
    shift = interior_twoform(a.vf, b)
    return Section(a.vf, tuple(p + q for p, q in zip(a.form, shift)))


def gauge_field(d: DiracField, b: Matrix) -> DiracField:
    """Gauge transform of ``d`` by the 2-form ``b`` (closedness is not required here)."""
    if not b.is_square() or not b.is_skew() or b.nrows != d.dim:
        raise NotSkew("gauge form must be a skew n x n matrix")
    b = Matrix(b.rows, d.dim, d.field)
    if d.kind == TWOFORM:
        return DiracField.twoform_graph(d.data["omega"] + b)
    if d.kind == DISTRIBUTION:
        return DiracField.distribution_graph(d.variables, d.data["generators"], d.data["gauge"] + b)
    return DiracField.from_frame(d.variables, [gauge_section(a, b) for a in d.frame])


def section_of_function(d: DiracField, f: ScalarExpr) -> Section:
    """``(X_f, df)`` for an admissible ``f``."""
    f = d.field.coerce(f)
    return Section(hamiltonian_vf(d, f).particular, d_function(f))


__all__ = [
    "DiracField",
    "IntegrabilityVerdict",
    "HamiltonianField",
    "pointwise",
    "courant_tensor",
    "is_integrable",
    "hamiltonian_vf",
    "admissible_bracket",
    "is_invariant_under",
    "anchor_and_algebroid_bracket",
    "lie_derivative_section",
    "section_of_function",
    "gauge_section",
    "gauge_field",
]
