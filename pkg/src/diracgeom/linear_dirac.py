"""Dirac structures on a vector space and lagrangian relations.

Coordinates on ``V + V*`` are ordered ``(v_1..v_n, alpha_1..alpha_n)`` and
the pairing is ``<(v, a), (w, b)> = b(v) + a(w)``. A bivector ``pi`` acts by
``pi#(alpha)_j = sum_i alpha_i pi[i][j]``, so ``pi#(e_i*)`` is row ``i`` of
its matrix; a 2-form acts by ``(i_X omega)_j = sum_i X_i omega[i][j]``.

Everything here is field-generic: the same code runs over the rationals and
over the rational-function field used by :mod:`diracgeom.field_dirac`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    ConsistencyError,
    DimensionMismatch,
    NotLagrangian,
    NotSkew,
    TransversalityFailed,
)
from .linalg import (
    QQ,
    Matrix,
    Subspace,
    annihilator,
    image,
    intersect,
    inverse,
    is_isotropic,
    kernel,
    pairing_orthogonal,
    solve,
    sum_,
)


class LinearDirac:
    """Lagrangian subspace of ``V + V*`` with ``dim V = n``."""

    __slots__ = ("n", "space")

    def __init__(self, n: int, space: Subspace, check: bool = True):
        if space.ambient_dim != 2 * n:
            raise DimensionMismatch(f"expected a subspace of F^{2 * n}")
        if check and not is_lagrangian(space):
            raise NotLagrangian(f"subspace of dim {space.dim} is not lagrangian in F^{2 * n}")
        self.n = n
        self.space = space

    @property
    def field(self):
        return self.space.field

    def vectors(self):
        return self.space.vectors

    def __eq__(self, other):
        if not isinstance(other, LinearDirac):
            return NotImplemented
        return self.n == other.n and self.space == other.space

    def __hash__(self):
        return hash((self.n, self.space))

    def __repr__(self):
        return f"LinearDirac(n={self.n}, basis={self.space.basis!r})"


def _as_matrix(m, field=None) -> Matrix:
    if isinstance(m, LinearMap):
        return m.m
    if isinstance(m, Matrix):
        return m
    return Matrix(m, field=field)


@dataclass(frozen=True)
class LinearMap:
    """Linear map ``V -> W`` given by a ``dim W x dim V`` matrix."""

    m: Matrix

    @property
    def source_dim(self) -> int:
        return self.m.ncols

    @property
    def target_dim(self) -> int:
        return self.m.nrows


@dataclass(frozen=True)
class LagrangianRelation:
    """Lagrangian subspace of ``W + W* x (V + V*)^-``, a relation from V to W.

    ``n_left`` is ``dim W`` and ``n_right`` is ``dim V``; coordinates are
    ``(w, beta, v, alpha)`` and the pairing on the right factor is negated.
    """

    n_left: int
    n_right: int
    space: Subspace

    def __post_init__(self):
        if self.space.ambient_dim != 2 * (self.n_left + self.n_right):
            raise DimensionMismatch("relation space has the wrong ambient dimension")

    @property
    def signs(self):
        return (1, -1)

    @property
    def sizes(self):
        return (self.n_left, self.n_right)

    def is_lagrangian(self) -> bool:
        return (self.space.dim == self.n_left + self.n_right
                and is_isotropic(self.space, self.signs, self.sizes))


def is_lagrangian(s: Subspace) -> bool:
    """True iff ``dim s = n`` and the split pairing vanishes on ``s``."""
    if s.ambient_dim % 2:
        return False
    return s.dim == s.ambient_dim // 2 and is_isotropic(s)


def _skew_or_raise(m: Matrix, what: str):
    if not m.is_square() or not m.is_skew():
        raise NotSkew(f"{what} must be a skew-symmetric square matrix")


def graph_of_bivector(pi, log: list | None = None) -> LinearDirac:
    pi = _as_matrix(pi)
    _skew_or_raise(pi, "bivector")
    n = pi.nrows
    z, o = pi.field.zero, pi.field.one
    rows = [tuple(pi.rows[i]) + tuple(o if j == i else z for j in range(n)) for i in range(n)]
    return LinearDirac(n, Subspace.span(rows, 2 * n, pi.field, log), check=False)


def graph_of_twoform(omega, log: list | None = None) -> LinearDirac:
    omega = _as_matrix(omega)
    _skew_or_raise(omega, "2-form")
    n = omega.nrows
    z, o = omega.field.zero, omega.field.one
    rows = [tuple(o if j == i else z for j in range(n)) + tuple(omega.rows[i]) for i in range(n)]
    return LinearDirac(n, Subspace.span(rows, 2 * n, omega.field, log), check=False)


def from_distribution(f: Subspace, log: list | None = None) -> LinearDirac:
    """``F + annihilator(F)``."""
    n = f.ambient_dim
    z = f.field.zero
    rows = [tuple(v) + (z,) * n for v in f.vectors]
    rows += [(z,) * n + tuple(a) for a in annihilator(f, log).vectors]
    return LinearDirac(n, Subspace.span(rows, 2 * n, f.field, log), check=False)


def gauge(l: LinearDirac, b, log: list | None = None) -> LinearDirac:
    """Apply ``(X, alpha) -> (X, alpha + i_X B)``."""
    b = _as_matrix(b, l.field)
    _skew_or_raise(b, "gauge 2-form")
    if b.nrows != l.n:
        raise DimensionMismatch("gauge form has the wrong size")
    n = l.n
    rows = []
    for r in l.vectors():
        x, a = r[:n], r[n:]
        shift = b.transpose().apply(x)
        rows.append(tuple(x) + tuple(ai + si for ai, si in zip(a, shift)))
    return LinearDirac(n, Subspace.span(rows, 2 * n, l.field, log), check=False)


def _split(l: LinearDirac):
    n = l.n
    vs = l.vectors()
    return [r[:n] for r in vs], [r[n:] for r in vs]


def backward(l_w: LinearDirac, phi, log: list | None = None) -> LinearDirac:
    """``{(v, phi^T beta) | (phi v, beta) in L_W}``."""
    phi = _as_matrix(phi, l_w.field)
    if phi.nrows != l_w.n:
        raise DimensionMismatch(f"map into F^{phi.nrows} but L_W lives over F^{l_w.n}")
    n_v = phi.ncols
    field = l_w.field
    xs, als = _split(l_w)
    d = len(xs)
    # unknowns (c, v): sum c_i X_i - phi v = 0
    rows = [tuple(xs[i][k] for i in range(d)) + tuple(-x for x in phi.rows[k]) for k in range(l_w.n)]
    sol = kernel(Matrix(rows, d + n_v, field), log)
    phi_t = phi.transpose()
    z = field.zero
    out = []
    for s in sol.vectors:
        c, v = s[:d], s[d:]
        beta = [z] * l_w.n
        for ci, a in zip(c, als):
            if ci:
                beta = [b + ci * x for b, x in zip(beta, a)]
        out.append(tuple(v) + phi_t.apply(beta))
    return LinearDirac(n_v, Subspace.span(out, 2 * n_v, field, log), check=False)


def forward(l_v: LinearDirac, phi, log: list | None = None) -> LinearDirac:
    """``{(phi v, beta) | (v, phi^T beta) in L_V}``."""
    phi = _as_matrix(phi, l_v.field)
    if phi.ncols != l_v.n:
        raise DimensionMismatch(f"map from F^{phi.ncols} but L_V lives over F^{l_v.n}")
    n_w = phi.nrows
    field = l_v.field
    xs, als = _split(l_v)
    d = len(xs)
    # unknowns (c, beta): sum c_i alpha_i - phi^T beta = 0
    rows = [tuple(als[i][k] for i in range(d)) + tuple(-phi.rows[j][k] for j in range(n_w))
            for k in range(l_v.n)]
    sol = kernel(Matrix(rows, d + n_w, field), log)
    z = field.zero
    out = []
    for s in sol.vectors:
        c, beta = s[:d], s[d:]
        x = [z] * l_v.n
        for ci, xi in zip(c, xs):
            if ci:
                x = [a + ci * b for a, b in zip(x, xi)]
        out.append(phi.apply(x) + tuple(beta))
    return LinearDirac(n_w, Subspace.span(out, 2 * n_w, field, log), check=False)


def null_space(l: LinearDirac, log: list | None = None) -> Subspace:
    """``L ∩ V`` as a subspace of ``V``."""
    n = l.n
    z, o = l.field.zero, l.field.one
    v_part = Subspace.span([tuple(o if j == i else z for j in range(2 * n)) for i in range(n)], 2 * n, l.field)
    return intersect(l.space, v_part, log).restrict(range(n))


def characteristic_space(l: LinearDirac, log: list | None = None) -> Subspace:
    """``L ∩ V*`` as a subspace of ``V*``."""
    n = l.n
    z, o = l.field.zero, l.field.one
    a_part = Subspace.span([tuple(o if j == n + i else z for j in range(2 * n)) for i in range(n)], 2 * n,
                           l.field)
    return intersect(l.space, a_part, log).restrict(range(n, 2 * n))


def range_space(l: LinearDirac, log: list | None = None) -> Subspace:
    """``pr_V(L)``."""
    return l.space.restrict(range(l.n), log)


@dataclass(frozen=True)
class RoundtripResult:
    fb_identity: bool
    bf_identity: bool


def roundtrip_conditions(l_v: LinearDirac, l_w: LinearDirac, phi) -> RoundtripResult:
    """Decide ``F(B(L_W)) = L_W`` and ``B(F(L_V)) = L_V`` two ways each.

    The image/kernel criteria are checked against explicit recomposition and
    a disagreement raises :class:`ConsistencyError`.
    """
    phi = _as_matrix(phi, l_v.field)
    if phi.ncols != l_v.n or phi.nrows != l_w.n:
        raise DimensionMismatch("roundtrip needs phi: V -> W matching both structures")
    fb_criterion = image(phi).contains_subspace(range_space(l_w))
    fb_explicit = forward(backward(l_w, phi), phi) == l_w
    if fb_criterion != fb_explicit:
        raise ConsistencyError(f"F∘B criterion {fb_criterion} but recomposition gives {fb_explicit}")
    bf_criterion = null_space(l_v).contains_subspace(kernel(phi))
    bf_explicit = backward(forward(l_v, phi), phi) == l_v
    if bf_criterion != bf_explicit:
        raise ConsistencyError(f"B∘F criterion {bf_criterion} but recomposition gives {bf_explicit}")
    return RoundtripResult(fb_criterion, bf_criterion)


def graph_relation(phi) -> LagrangianRelation:
    """``Γ_φ = {((φ v, β), (v, φ^T β))}``, a relation from V to W."""
    phi = _as_matrix(phi)
    n_w, n_v = phi.shape
    field = phi.field
    z, o = field.zero, field.one
    total = 2 * (n_w + n_v)
    rows = []
    for j in range(n_v):
        r = [z] * total
        for k in range(n_w):
            r[k] = phi.rows[k][j]
        r[2 * n_w + j] = o
        rows.append(r)
    for k in range(n_w):
        r = [z] * total
        r[n_w + k] = o
        for j in range(n_v):
            r[2 * n_w + n_v + j] = phi.rows[k][j]
        rows.append(r)
    return LagrangianRelation(n_w, n_v, Subspace.span(rows, total, field))


def dirac_as_relation(l: LinearDirac, side: str = "left") -> LagrangianRelation:
    """View ``L`` as a relation ``V <- 0`` (side="left") or ``0 <- V`` (side="right")."""
    if side == "left":
        return LagrangianRelation(l.n, 0, l.space)
    if side == "right":
        return LagrangianRelation(0, l.n, l.space)
    raise ValueError("side must be 'left' or 'right'")


def relation_as_dirac(r: LagrangianRelation) -> LinearDirac:
    if r.n_left and r.n_right:
        raise DimensionMismatch("only relations with a trivial factor are Dirac structures")
    return LinearDirac(r.n_left + r.n_right, r.space)


def compose(l1: LagrangianRelation, l2: LagrangianRelation, log: list | None = None) -> LagrangianRelation:
    """``L1 ∘ L2`` as the image of ``(L1 x L2) ∩ C + C^⊥`` in ``C / C^⊥``.

    ``C = U x Δ x W`` inside ``U x V^- x V x W^-`` with ``Δ`` the diagonal.
    The quotient map is realized by the complement of ``C^⊥`` spanned by the
    ``U`` and ``W`` coordinates.
    """
    if l1.n_right != l2.n_left:
        raise DimensionMismatch(f"cannot compose through F^{l1.n_right} and F^{l2.n_left}")
    field = l1.space.field
    nu, nv, nw = l1.n_left, l1.n_right, l2.n_right
    su, sv, sw = 2 * nu, 2 * nv, 2 * nw
    total = su + 2 * sv + sw
    z, o = field.zero, field.one
    sizes = (nu, nv, nv, nw)
    signs = (1, -1, 1, -1)

    def unit(i):
        r = [z] * total
        r[i] = o
        return r

    prod = [tuple(v) + (z,) * (sv + sw) for v in l1.space.vectors]
    prod += [(z,) * (su + sv) + tuple(v) for v in l2.space.vectors]
    product = Subspace.span(prod, total, field)

    c_rows = [unit(i) for i in range(su)]
    for j in range(sv):
        r = unit(su + j)
        r[su + sv + j] = o
        c_rows.append(r)
    c_rows += [unit(su + 2 * sv + i) for i in range(sw)]
    C = Subspace.span(c_rows, total, field)
    C_perp = pairing_orthogonal(C, signs, sizes)
    if not C.contains_subspace(C_perp):
        raise ConsistencyError("C is not coisotropic")

    reduced = sum_(intersect(product, C, log), C_perp, log)
    keep = list(range(su)) + list(range(su + 2 * sv, total))
    result = LagrangianRelation(nu, nw, reduced.restrict(keep, log))
    if result.space.dim != nu + nw:
        raise ConsistencyError(f"composition has dimension {result.space.dim}, expected {nu + nw}")
    return result


@dataclass(frozen=True)
class Decomposition:
    """Null space, range and leafwise 2-form of a linear Dirac structure.

    ``leaf_form[i][j] = Ω(r_i, r_j)`` for the RREF basis ``r`` of ``range``.
    """

    null: Subspace
    range: Subspace
    leaf_form: Matrix


def _lift_to_l(l: LinearDirac, x: Sequence, log=None):
    """Some covector ``alpha`` with ``(x, alpha) in L``."""
    xs, als = _split(l)
    d = len(xs)
    m = Matrix([[xs[i][k] for i in range(d)] for k in range(l.n)], d, l.field)
    c = solve(m, x, log)
    if c is None:
        raise ConsistencyError("vector is not in pr_V(L)")
    alpha = [l.field.zero] * l.n
    for ci, a in zip(c, als):
        if ci:
            alpha = [p + ci * q for p, q in zip(alpha, a)]
    return tuple(alpha)


def _dot(a, b, zero):
    s = zero
    for x, y in zip(a, b):
        if x and y:
            s = s + x * y
    return s


def decompose(l: LinearDirac, log: list | None = None) -> Decomposition:
    n = l.n
    field = l.field
    z = field.zero
    K = null_space(l, log)
    R = range_space(l, log)
    char = characteristic_space(l, log)
    if char != annihilator(R, log):
        raise ConsistencyError("L ∩ V* differs from the annihilator of pr_V(L)")
    rs = R.vectors
    lifts = [_lift_to_l(l, r, log) for r in rs]
    omega = Matrix([[_dot(lifts[i], rs[j], z) for j in range(len(rs))] for i in range(len(rs))],
                   len(rs), field)
    # alpha is only defined up to L ∩ V*, which kills R: check independence
    for eta in char.vectors:
        for r in rs:
            if _dot(eta, r, z):
                raise ConsistencyError("leaf form depends on the chosen covector")
    if not omega.is_skew():
        raise ConsistencyError("leaf form is not skew")
    # kernel of the leaf form, mapped back into V
    if rs:
        ker_coords = kernel(omega, log)
        ker_vecs = [tuple(_dot(k, [r[j] for r in rs], z) for j in range(n)) for k in ker_coords.vectors]
        if Subspace.span(ker_vecs, n, field) != K:
            raise ConsistencyError("null space differs from the kernel of the leaf form")
    elif K.dim:
        raise ConsistencyError("nonzero null space with zero range")
    # L = {(X, a) | X in R, a|_R = i_X Ω}
    rebuilt = []
    for i, r in enumerate(rs):
        target = omega.rows[i]
        rmat = Matrix([list(rr) for rr in rs], n, field)
        a = solve(rmat, target, log)
        rebuilt.append(tuple(r) + tuple(a))
    rebuilt += [(z,) * n + tuple(eta) for eta in annihilator(R, log).vectors]
    if Subspace.span(rebuilt, 2 * n, field) != l.space:
        raise ConsistencyError("L is not recovered from its leaf data")
    return Decomposition(K, R, omega)


def as_bivector(l: LinearDirac, log: list | None = None) -> Matrix:
    """The skew matrix ``pi`` with ``graph(pi) = L``; needs ``L ∩ V = 0``."""
    if null_space(l, log).dim:
        raise TransversalityFailed("L ∩ V ≠ 0, not the graph of a bivector")
    xs, als = _split(l)
    n = l.n
    A = Matrix(als, n, l.field)
    X = Matrix(xs, n, l.field)
    pi = inverse(A, log) @ X
    if not pi.is_skew():
        raise ConsistencyError("recovered bivector is not skew")
    return pi


def as_twoform(l: LinearDirac, log: list | None = None) -> Matrix:
    """The skew matrix ``omega`` with ``graph(omega) = L``; needs ``L ∩ V* = 0``."""
    if characteristic_space(l, log).dim:
        raise TransversalityFailed("L ∩ V* ≠ 0, not the graph of a 2-form")
    xs, als = _split(l)
    n = l.n
    X = Matrix(xs, n, l.field)
    A = Matrix(als, n, l.field)
    omega = inverse(X, log) @ A
    if not omega.is_skew():
        raise ConsistencyError("recovered 2-form is not skew")
    return omega


def exact_sequence_dims(l_w: LinearDirac, l_v: LinearDirac, phi) -> dict:
    """Dimension counts of the two short exact sequences attached to ``phi``.

    Returns the dimensions of ``(L_W x V) ∩ Γ_φ``, ``ker(φ^T) ∩ L_W``,
    ``Γ_φ ∩ (W x L_V)`` and ``ker(φ) ∩ L_V``.
    """
    phi = _as_matrix(phi, l_w.field)
    n_w, n_v = phi.shape
    field = l_w.field
    z, o = field.zero, field.one
    gamma = graph_relation(phi).space
    total = 2 * (n_w + n_v)

    def unit(i):
        r = [z] * total
        r[i] = o
        return r

    lw_x_v = Subspace.span([tuple(v) + (z,) * (2 * n_v) for v in l_w.vectors()]
                           + [unit(2 * n_w + i) for i in range(2 * n_v)], total, field)
    w_x_lv = Subspace.span([unit(i) for i in range(2 * n_w)]
                           + [(z,) * (2 * n_w) + tuple(v) for v in l_v.vectors()], total, field)
    ker_phi_t = kernel(phi.transpose())
    char_w = characteristic_space(l_w)
    ker_v = kernel(phi)
    null_v = null_space(l_v)
    return {
        "backward_middle": intersect(lw_x_v, gamma).dim,
        "backward_kernel": intersect(char_w, ker_phi_t).dim,
        "forward_middle": intersect(gamma, w_x_lv).dim,
        "forward_kernel": intersect(null_v, ker_v).dim,
    }


__all__ = [
    "QQ",
    "LinearDirac",
    "LinearMap",
    "LagrangianRelation",
    "Decomposition",
    "RoundtripResult",
    "is_lagrangian",
    "graph_of_bivector",
    "graph_of_twoform",
    "from_distribution",
    "gauge",
    "backward",
    "forward",
    "null_space",
    "characteristic_space",
    "range_space",
    "roundtrip_conditions",
    "graph_relation",
    "dirac_as_relation",
    "relation_as_dirac",
    "compose",
    "decompose",
    "as_bivector",
    "as_twoform",
    "exact_sequence_dims",
]
