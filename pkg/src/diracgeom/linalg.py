"""Dense linear algebra over the rationals or a rational-function field.

Matrices are small (ambient dimension rarely above 16), so everything is a
plain tuple-of-tuples. Over the rational-function field every rank is the
*generic* rank; callers that want the rank at a point evaluate first.

Functions that divide by pivots accept an optional ``log`` list. Each pivot
used is appended to it, which is how the field layer learns the locus where a
generic computation stops describing the pointwise one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, DivisionByZero
from .scalar import Poly, ScalarExpr


class RationalField:
    name = "QQ"

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, ScalarExpr) and x.is_constant():
            return x.constant_value()
        raise TypeError(f"cannot coerce {x!r} into QQ")

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class FunctionField:
    """Field of rational functions in a fixed tuple of variables."""

    def __init__(self, variables: Sequence[str]):
        self.variables = tuple(variables)
        self.zero = ScalarExpr.zero(self.variables)
        self.one = ScalarExpr.one(self.variables)

    def coerce(self, x):
        if isinstance(x, ScalarExpr):
            if x.variables != self.variables:
                raise DimensionMismatch(f"expression over {x.variables}, field over {self.variables}")
            return x
        if isinstance(x, Poly):
            return ScalarExpr.from_poly(x)
        if isinstance(x, (int, Fraction)):
            return ScalarExpr.constant(self.variables, x)
        raise TypeError(f"cannot coerce {x!r} into Q({', '.join(self.variables)})")

    def __eq__(self, other):
        return isinstance(other, FunctionField) and other.variables == self.variables

    def __hash__(self):
        return hash(("Q(...)", self.variables))

    def __repr__(self):
        return f"Q({', '.join(self.variables)})"


QQ = RationalField()


def field_of(entries: Iterable):
    for x in entries:
        if isinstance(x, ScalarExpr):
            return FunctionField(x.variables)
        if isinstance(x, Poly):
            return FunctionField(x.variables)
    return QQ


class Matrix:
    """Immutable dense matrix with entries in ``field``."""

    __slots__ = ("rows", "nrows", "ncols", "field")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None, field=None):
        raw = [list(r) for r in rows]
        if field is None:
            field = field_of(x for r in raw for x in r)
        self.field = field
        self.rows = tuple(tuple(field.coerce(x) for x in r) for r in raw)
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(self.rows[0])
        self.ncols = ncols
        if any(len(r) != ncols for r in self.rows):
            raise DimensionMismatch("ragged matrix")

    @classmethod
    def _raw(cls, rows: tuple, ncols: int, field) -> "Matrix":
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        m.field = field
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field=QQ) -> "Matrix":
        z = field.zero
        return cls._raw(tuple((z,) * ncols for _ in range(nrows)), ncols, field)

    @classmethod
    def identity(cls, n: int, field=QQ) -> "Matrix":
        z, o = field.zero, field.one
        return cls._raw(tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n, field)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def entries(self) -> list:
        return [x for r in self.rows for x in r]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix._raw(tuple(zip(*self.rows)) if self.nrows else tuple(() for _ in range(self.ncols)),
                           self.nrows, self.field)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        cols = other.transpose().rows
        z = self.field.zero
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                s = z
                for a, b in zip(r, c):
                    if a and b:
                        s = s + a * b
                row.append(s)
            out.append(tuple(row))
        return Matrix._raw(tuple(out), other.ncols, self.field)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)} for a {self.shape} matrix")
        z = self.field.zero
        out = []
        for r in self.rows:
            s = z
            for a, b in zip(r, v):
                if a and b:
                    s = s + a * b
            out.append(s)
        return tuple(out)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
                           self.ncols, self.field)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.rows), self.ncols, self.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.field.coerce(c)
        return Matrix._raw(tuple(tuple(a * c for a in r) for r in self.rows), self.ncols, self.field)

    def map(self, fn, field=None) -> "Matrix":
        return Matrix([[fn(x) for x in r] for r in self.rows], self.ncols, field)

    def evaluate(self, point) -> "Matrix":
        """Evaluate a function-field matrix at a rational point."""
        if self.field == QQ:
            return self
        return Matrix._raw(tuple(tuple(x.evaluate(point) for x in r) for r in self.rows), self.ncols, QQ)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_skew(self) -> bool:
        if not self.is_square():
            return False
        return all(self.rows[i][j] == -self.rows[j][i] for i in range(self.nrows) for j in range(i, self.ncols))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise DimensionMismatch("hstack needs equal row counts")
        return Matrix._raw(tuple(a + b for a, b in zip(self.rows, other.rows)), self.ncols + other.ncols,
                           self.field)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise DimensionMismatch("vstack needs equal column counts")
        return Matrix._raw(self.rows + other.rows, self.ncols, self.field)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(cols), self.field)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def tolist(self) -> list:
        return [list(r) for r in self.rows]

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"


def _is_unit(x) -> bool:
    return x == 1


def rref_full(m: Matrix, log: list | None = None):
    """Gauss-Jordan elimination.

    Returns ``(R, pivot_columns)``. The pivot in each column is the first
    nonzero entry at or below the current row.
    """
    rows = [list(r) for r in m.rows]
    pivots = []
    r = 0
    for c in range(m.ncols):
        if r == len(rows):
            break
        i = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if i is None:
            continue
        if i != r:
            rows[r], rows[i] = rows[i], rows[r]
        p = rows[r][c]
        if log is not None:
            log.append(p)
        if not _is_unit(p):
            inv = 1 / p
            rows[r] = [x * inv if x else x for x in rows[r]]
            rows[r][c] = m.field.one
        prow = rows[r]
        for k in range(len(rows)):
            if k == r:
                continue
            f = rows[k][c]
            if not f:
                continue
            rk = rows[k]
            for j in range(c, m.ncols):
                b = prow[j]
                if b:
                    rk[j] = rk[j] - f * b
        pivots.append(c)
        r += 1
    return Matrix._raw(tuple(tuple(row) for row in rows[:r]), m.ncols, m.field), pivots


def rref(m: Matrix, log: list | None = None):
    """Reduced row echelon form with zero rows dropped, and the rank."""
    R, pivots = rref_full(m, log)
    return R, len(pivots)


def rank(m: Matrix, log: list | None = None) -> int:
    return rref(m, log)[1]


def det(m: Matrix):
    """Determinant by elimination (pivoting on the first nonzero entry)."""
    if not m.is_square():
        raise DimensionMismatch("determinant of a non-square matrix")
    n = m.nrows
    rows = [list(r) for r in m.rows]
    result = m.field.one
    for c in range(n):
        i = next((i for i in range(c, n) if rows[i][c]), None)
        if i is None:
            return m.field.zero
        if i != c:
            rows[c], rows[i] = rows[i], rows[c]
            result = -result
        p = rows[c][c]
        result = result * p
        for k in range(c + 1, n):
            f = rows[k][c]
            if f:
                q = f / p
                rows[k] = [a - q * b if b else a for a, b in zip(rows[k], rows[c])]
    return result


def inverse(m: Matrix, log: list | None = None) -> Matrix:
    if not m.is_square():
        raise DimensionMismatch("inverse of a non-square matrix")
    n = m.nrows
    R, pivots = rref_full(m.hstack(Matrix.identity(n, m.field)), log)
    if pivots[:n] != list(range(n)):
        raise DivisionByZero("matrix is singular")
    return R.submatrix(range(n), range(n, 2 * n))


def solve(m: Matrix, b: Sequence, log: list | None = None):
    """A particular solution of ``m x = b``, or ``None`` if inconsistent."""
    if len(b) != m.nrows:
        raise DimensionMismatch("right-hand side length")
    aug = m.hstack(Matrix([[x] for x in b], 1, m.field)) if m.nrows else None
    if aug is None:
        return tuple(m.field.zero for _ in range(m.ncols))
    R, pivots = rref_full(aug, log)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [m.field.zero] * m.ncols
    for row, c in zip(R.rows, pivots):
        x[c] = row[m.ncols]
    return tuple(x)


class Subspace:
    """Subspace of ``F^ambient_dim`` stored by its RREF basis."""

    __slots__ = ("ambient_dim", "basis", "field")

    def __init__(self, ambient_dim: int, basis: Matrix):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.field = basis.field

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int, field=None, log: list | None = None) -> "Subspace":
        vectors = [tuple(v) for v in vectors]
        if field is None:
            field = field_of(x for v in vectors for x in v)
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch(f"vector of length {len(v)} in F^{ambient_dim}")
        if not vectors:
            return cls.zero(ambient_dim, field)
        R, _ = rref(Matrix(vectors, ambient_dim, field), log)
        return cls(ambient_dim, R)

    @classmethod
    def zero(cls, ambient_dim: int, field=QQ) -> "Subspace":
        return cls(ambient_dim, Matrix._raw((), ambient_dim, field))

    @classmethod
    def full(cls, ambient_dim: int, field=QQ) -> "Subspace":
        return cls(ambient_dim, Matrix.identity(ambient_dim, field))

    @property
    def dim(self) -> int:
        return self.basis.nrows

    @property
    def vectors(self) -> tuple:
        return self.basis.rows

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis.rows == other.basis.rows

    def __hash__(self):
        return hash((self.ambient_dim, self.basis.rows))

    def contains(self, v: Sequence, log: list | None = None) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length")
        v = [self.field.coerce(x) for x in v]
        return Subspace.span(list(self.vectors) + [tuple(v)], self.ambient_dim, self.field, log).dim == self.dim

    def contains_subspace(self, other: "Subspace", log: list | None = None) -> bool:
        return sum_(self, other, log).dim == self.dim

    def evaluate(self, point) -> "Subspace":
        """Span of the evaluated basis (which may lose rank at special points)."""
        return Subspace.span(self.basis.evaluate(point).rows, self.ambient_dim, QQ)

    def restrict(self, coords: Sequence[int], log: list | None = None) -> "Subspace":
        """Image under the coordinate projection onto ``coords``."""
        return Subspace.span([tuple(v[i] for i in coords) for v in self.vectors], len(coords), self.field, log)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={self.basis!r})"


def _check_same(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"subspaces of F^{a.ambient_dim} and F^{b.ambient_dim}")


def kernel(m: Matrix, log: list | None = None) -> Subspace:
    """Right null space of ``m``."""
    R, pivots = rref_full(m, log)
    n = m.ncols
    free = [c for c in range(n) if c not in set(pivots)]
    z, o = m.field.zero, m.field.one
    vecs = []
    for f in free:
        v = [z] * n
        v[f] = o
        for row, c in zip(R.rows, pivots):
            x = row[f]
            if x:
                v[c] = -x
        vecs.append(tuple(v))
    return Subspace.span(vecs, n, m.field, log)


def image(m: Matrix, log: list | None = None) -> Subspace:
    """Column space of ``m``."""
    return Subspace.span(m.transpose().rows, m.nrows, m.field, log)


def annihilator(s: Subspace, log: list | None = None) -> Subspace:
    """Orthogonal complement for the standard dot product."""
    if s.dim == 0:
        return Subspace.full(s.ambient_dim, s.field)
    return kernel(s.basis, log)


def sum_(a: Subspace, b: Subspace, log: list | None = None) -> Subspace:
    _check_same(a, b)
    return Subspace.span(list(a.vectors) + list(b.vectors), a.ambient_dim, a.field, log)


def intersect(a: Subspace, b: Subspace, log: list | None = None) -> Subspace:
    _check_same(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim, a.field)
    ann = list(annihilator(a, log).vectors) + list(annihilator(b, log).vectors)
    if not ann:
        return Subspace.full(a.ambient_dim, a.field)
    return kernel(Matrix(ann, a.ambient_dim, a.field), log)


def equal(a: Subspace, b: Subspace) -> bool:
    _check_same(a, b)
    return a == b


def pairing_gram(blocks: Sequence[tuple], field=QQ) -> Matrix:
    """Gram matrix of the split pairing on a product of ``V_i + V_i*`` factors.

    ``blocks`` lists ``(n_i, sign_i)``; each factor contributes coordinates
    ``(v, alpha)`` of length ``2 n_i`` and the pairing
    ``sign_i * (beta(v) + alpha(w))``.
    """
    total = sum(2 * n for n, _ in blocks)
    z = field.zero
    rows = [[z] * total for _ in range(total)]
    off = 0
    for n, sign in blocks:
        s = field.coerce(sign)
        for i in range(n):
            rows[off + i][off + n + i] = s
            rows[off + n + i][off + i] = s
        off += 2 * n
    return Matrix(rows, total, field)


def _blocks_for(ambient_dim: int, signs: Sequence[int], sizes: Sequence[int] | None):
    if sizes is None:
        if ambient_dim % (2 * len(signs)):
            raise DimensionMismatch(f"cannot split F^{ambient_dim} into {len(signs)} even factors")
        sizes = [ambient_dim // (2 * len(signs))] * len(signs)
    if 2 * sum(sizes) != ambient_dim:
        raise DimensionMismatch("factor sizes do not add up to the ambient dimension")
    return list(zip(sizes, signs))


def pairing(u: Sequence, v: Sequence, signs: Sequence[int] = (1,), sizes: Sequence[int] | None = None):
    blocks = _blocks_for(len(u), signs, sizes)
    total = 0
    off = 0
    for n, sign in blocks:
        s = 0
        for i in range(n):
            a, b = u[off + i], v[off + n + i]
            if a and b:
                s = s + a * b
            a, b = u[off + n + i], v[off + i]
            if a and b:
                s = s + a * b
        total = total + (s if sign > 0 else -s)
        off += 2 * n
    return total


def pairing_orthogonal(s: Subspace, signs: Sequence[int] = (1,), sizes: Sequence[int] | None = None,
                       log: list | None = None) -> Subspace:
    """Orthogonal complement of ``s`` for the (sign-twisted) split pairing."""
    if s.ambient_dim % 2:
        raise DimensionMismatch("the split pairing needs an even ambient dimension")
    blocks = _blocks_for(s.ambient_dim, signs, sizes)
    if s.dim == 0:
        return Subspace.full(s.ambient_dim, s.field)
    G = pairing_gram(blocks, s.field)
    return kernel(s.basis @ G, log)


def is_isotropic(s: Subspace, signs: Sequence[int] = (1,), sizes: Sequence[int] | None = None) -> bool:
    vs = s.vectors
    for i, u in enumerate(vs):
        for v in vs[i:]:
            if pairing(u, v, signs, sizes):
                return False
    return True
