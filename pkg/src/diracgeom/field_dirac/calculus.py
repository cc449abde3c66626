"""Symbolic calculus on sections of TM + T*M over R^n.

Vector fields and 1-forms are tuples of :class:`ScalarExpr` in the standard
coordinate basis. 2-forms and bivectors are skew :class:`Matrix` objects
over the rational-function field, 3-forms are :class:`ThreeForm`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from ..errors import DimensionMismatch, NotClosed, NotSkew
from ..linalg import FunctionField, Matrix
from ..scalar import ScalarExpr

HALF = Fraction(1, 2)


def _zero(variables):
    return ScalarExpr.zero(variables)


def _coerce_all(values, variables) -> tuple:
    field = FunctionField(variables)
    return tuple(field.coerce(v) for v in values)


@dataclass(frozen=True)
class Section:
    """A section ``(X, alpha)`` of ``TM + T*M``."""

    vf: tuple
    form: tuple

    def __post_init__(self):
        if len(self.vf) != len(self.form):
            raise DimensionMismatch("vector and form parts have different lengths")
        if not self.vf:
            raise DimensionMismatch("empty section")

    @classmethod
    def make(cls, variables: Sequence[str], vf, form) -> "Section":
        variables = tuple(variables)
        if len(vf) != len(variables) or len(form) != len(variables):
            raise DimensionMismatch(f"section components must have length {len(variables)}")
        return cls(_coerce_all(vf, variables), _coerce_all(form, variables))

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Section":
        z = _zero(tuple(variables))
        return cls((z,) * len(variables), (z,) * len(variables))

    @property
    def variables(self) -> tuple:
        return self.vf[0].variables

    @property
    def n(self) -> int:
        return len(self.vf)

    def as_vector(self) -> tuple:
        return self.vf + self.form

    def __add__(self, other: "Section") -> "Section":
        return Section(tuple(a + b for a, b in zip(self.vf, other.vf)),
                       tuple(a + b for a, b in zip(self.form, other.form)))

    def __sub__(self, other: "Section") -> "Section":
        return Section(tuple(a - b for a, b in zip(self.vf, other.vf)),
                       tuple(a - b for a, b in zip(self.form, other.form)))

    def __neg__(self) -> "Section":
        return Section(tuple(-a for a in self.vf), tuple(-a for a in self.form))

    def scale(self, f) -> "Section":
        return Section(tuple(f * a for a in self.vf), tuple(f * a for a in self.form))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.vf) and all(a.is_zero() for a in self.form)

    def evaluate(self, point) -> tuple:
        return tuple(a.evaluate(point) for a in self.as_vector())

    def __str__(self):
        return f"({', '.join(map(str, self.vf))} | {', '.join(map(str, self.form))})"


def _check_dims(*sections):
    n = sections[0].n
    for s in sections[1:]:
        if s.n != n:
            raise DimensionMismatch("sections over different dimensions")


def d_function(f: ScalarExpr) -> tuple:
    return tuple(f.diff_index(i) for i in range(len(f.variables)))


def contract(x: Sequence, alpha: Sequence) -> ScalarExpr:
    s = _zero(x[0].variables)
    for a, b in zip(x, alpha):
        if a and b:
            s = s + a * b
    return s


def directional(x: Sequence, f: ScalarExpr) -> ScalarExpr:
    """``X(f) = df(X)``."""
    return contract(x, d_function(f))


def lie_bracket(x: Sequence, y: Sequence) -> tuple:
    """``[X, Y]^j = X^i d_i Y^j - Y^i d_i X^j``."""
    return tuple(directional(x, yj) - directional(y, xj) for xj, yj in zip(x, y))


def lie_derivative_function(x: Sequence, f: ScalarExpr) -> ScalarExpr:
    return directional(x, f)


def lie_derivative_form(x: Sequence, beta: Sequence) -> tuple:
    """``(L_X beta)_j = X^i d_i beta_j + beta_i d_j X^i``."""
    n = len(x)
    dx = [d_function(xi) for xi in x]
    out = []
    for j in range(n):
        s = directional(x, beta[j])
        for i in range(n):
            if beta[i]:
                t = dx[i][j]
                if t:
                    s = s + beta[i] * t
        out.append(s)
    return tuple(out)


def lie_derivative_vf(x: Sequence, y: Sequence) -> tuple:
    return lie_bracket(x, y)


def d_oneform(alpha: Sequence) -> Matrix:
    """``(d alpha)_ij = d_i alpha_j - d_j alpha_i``."""
    n = len(alpha)
    variables = alpha[0].variables
    grads = [d_function(a) for a in alpha]
    rows = [[grads[j][i] - grads[i][j] for j in range(n)] for i in range(n)]
    return Matrix(rows, n, FunctionField(variables))


def interior_twoform(x: Sequence, omega: Matrix) -> tuple:
    """``(i_X omega)_j = X^i omega_ij``."""
    return omega.transpose().apply(x)


def pairing_sections(a: Section, b: Section) -> ScalarExpr:
    """``beta(X) + alpha(Y)``."""
    _check_dims(a, b)
    return contract(a.vf, b.form) + contract(b.vf, a.form)


def courant_bracket(a: Section, b: Section) -> Section:
    _check_dims(a, b)
    x, alpha, y, beta = a.vf, a.form, b.vf, b.form
    vf = lie_bracket(x, y)
    corr = d_function((contract(y, alpha) - contract(x, beta)) * HALF)
    lb = lie_derivative_form(x, beta)
    la = lie_derivative_form(y, alpha)
    return Section(vf, tuple(p - q + c for p, q, c in zip(lb, la, corr)))


def dorfman_bracket(a: Section, b: Section) -> Section:
    _check_dims(a, b)
    x, alpha, y, beta = a.vf, a.form, b.vf, b.form
    vf = lie_bracket(x, y)
    lb = lie_derivative_form(x, beta)
    iy = interior_twoform(y, d_oneform(alpha))
    return Section(vf, tuple(p - q for p, q in zip(lb, iy)))


class ThreeForm:
    """Fully antisymmetric 3-form on R^n, stored as a dense n^3 array.

    Construction checks closedness unless ``check=False``.
    """

    __slots__ = ("variables", "n", "c")

    def __init__(self, variables: Sequence[str], components: dict, check: bool = True):
        self.variables = tuple(variables)
        n = self.n = len(self.variables)
        z = _zero(self.variables)
        field = FunctionField(self.variables)
        c = [[[z] * n for _ in range(n)] for _ in range(n)]
        for (i, j, k), v in components.items():
            v = field.coerce(v)
            if len({i, j, k}) < 3:
                if not v.is_zero():
                    raise NotSkew(f"3-form component with repeated index {(i, j, k)}")
                continue
            for perm, sign in _signed_perms((i, j, k)):
                cur = c[perm[0]][perm[1]][perm[2]]
                val = v if sign > 0 else -v
                if not cur.is_zero() and cur != val:
                    raise NotSkew(f"inconsistent components at {perm}")
                c[perm[0]][perm[1]][perm[2]] = val
        self.c = c
        if check and not self.is_closed():
            raise NotClosed("dH ≠ 0")

    @classmethod
    def zero(cls, variables):
        return cls(variables, {}, check=False)

    def __getitem__(self, ijk):
        i, j, k = ijk
        return self.c[i][j][k]

    def evaluate_on(self, x: Sequence, y: Sequence, z: Sequence) -> ScalarExpr:
        n = self.n
        s = _zero(self.variables)
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                for k in range(n):
                    h = self.c[i][j][k]
                    if h and z[k]:
                        s = s + x[i] * y[j] * z[k] * h
        return s

    def contract2(self, x: Sequence, y: Sequence) -> tuple:
        """``i_Y i_X H``, i.e. the 1-form ``Z -> H(X, Y, Z)``."""
        n = self.n
        out = []
        for k in range(n):
            s = _zero(self.variables)
            for i in range(n):
                if not x[i]:
                    continue
                for j in range(n):
                    h = self.c[i][j][k]
                    if h and y[j]:
                        s = s + x[i] * y[j] * h
            out.append(s)
        return tuple(out)

    def is_closed(self) -> bool:
        n = self.n
        for a in range(n):
            for b in range(a + 1, n):
                for c in range(b + 1, n):
                    for d in range(c + 1, n):
                        idx = (a, b, c, d)
                        s = _zero(self.variables)
                        for pos in range(4):
                            rest = idx[:pos] + idx[pos + 1:]
                            term = self.c[rest[0]][rest[1]][rest[2]].diff_index(idx[pos])
                            s = s + term if pos % 2 == 0 else s - term
                        if not s.is_zero():
                            return False
        return True


def _signed_perms(idx):
    base = list(idx)
    for p in permutations(range(3)):
        inversions = sum(1 for a in range(3) for b in range(a + 1, 3) if p[a] > p[b])
        yield tuple(base[q] for q in p), (-1) ** inversions


def twisted_courant_bracket(a: Section, b: Section, h: ThreeForm) -> Section:
    """Courant bracket plus ``i_Y i_X H``."""
    base = courant_bracket(a, b)
    extra = h.contract2(a.vf, b.vf)
    return Section(base.vf, tuple(p + q for p, q in zip(base.form, extra)))


def d_twoform_on(omega: Matrix, x: Sequence, y: Sequence, z: Sequence) -> ScalarExpr:
    """``d omega(X, Y, Z) = X^i Y^j Z^k (d_i w_jk + d_j w_ki + d_k w_ij)``."""
    n = omega.nrows
    variables = x[0].variables
    s = _zero(variables)
    w = omega.rows
    for i in range(n):
        if not x[i]:
            continue
        for j in range(n):
            if not y[j]:
                continue
            for k in range(n):
                if not z[k]:
                    continue
                t = w[j][k].diff_index(i) + w[k][i].diff_index(j) + w[i][j].diff_index(k)
                if t:
                    s = s + x[i] * y[j] * z[k] * t
    return s


def is_closed_twoform(omega: Matrix) -> bool:
    n = omega.nrows
    w = omega.rows
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if not (w[j][k].diff_index(i) + w[k][i].diff_index(j) + w[i][j].diff_index(k)).is_zero():
                    return False
    return True


def poisson_bracket(pi: Matrix, f: ScalarExpr, g: ScalarExpr) -> ScalarExpr:
    """``{f, g} = pi^ij d_i f d_j g``."""
    df, dg = d_function(f), d_function(g)
    return contract(df, pi.apply(dg))


def hamiltonian_of_bivector(pi: Matrix, f: ScalarExpr) -> tuple:
    """``pi#(df)``, so that ``X_f(g) = {f, g}``."""
    return pi.transpose().apply(d_function(f))


def jacobiator(pi: Matrix, f: ScalarExpr, g: ScalarExpr, h: ScalarExpr) -> ScalarExpr:
    """``{f,{g,h}} + {h,{f,g}} + {g,{h,f}}``."""
    pb = lambda a, b: poisson_bracket(pi, a, b)
    return pb(f, pb(g, h)) + pb(h, pb(f, g)) + pb(g, pb(h, f))


def is_poisson(pi: Matrix) -> bool:
    variables = pi.field.variables
    xs = [ScalarExpr.var(variables, v) for v in variables]
    n = len(xs)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if not jacobiator(pi, xs[i], xs[j], xs[k]).is_zero():
                    return False
    return True
