import random
from fractions import Fraction

import pytest
import sympy as sp

from oracles import rand_expr, to_sympy

from diracgeom.errors import DimensionMismatch, DivisionByZero
from diracgeom.linalg import (
    QQ,
    FunctionField,
    Matrix,
    Subspace,
    annihilator,
    det,
    equal,
    image,
    intersect,
    inverse,
    kernel,
    pairing,
    pairing_orthogonal,
    rank,
    rref,
    solve,
    sum_,
)
from diracgeom.scalar import parse_expr


def q(rows):
    return Matrix([[Fraction(x) for x in r] for r in rows], len(rows[0]) if rows else 0, QQ)


def rand_subspace(rng, n, field=QQ):
    k = rng.randint(0, n)
    return Subspace.span([[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(k)], n, field)


class TestRref:
    def test_identity(self):
        R, r = rref(Matrix.identity(3))
        assert R == Matrix.identity(3) and r == 3

    def test_rank_one(self):
        R, r = rref(q([[1, 2], [2, 4]]))
        assert r == 1
        assert R.rows[0] == (1, 2)

    def test_uniqueness_under_row_operations(self):
        rng = random.Random(1)
        for _ in range(30):
            m = Matrix([[Fraction(rng.randint(-3, 3)) for _ in range(5)] for _ in range(4)], 5, QQ)
            mix = Matrix([[Fraction(rng.randint(-3, 3)) for _ in range(4)] for _ in range(4)], 4, QQ)
            if det(mix) == 0:
                continue
            assert rref(mix @ m)[0] == rref(m)[0]

    def test_generic_rank_over_function_field(self):
        # [[z, 1], [z^2, z]]: det = z*z - z^2 = 0 identically, so the generic rank is 1.
        f = FunctionField(("z",))
        z = parse_expr("z", ("z",))
        m = Matrix([[z, f.one], [z * z, z]], 2, f)
        oracle = sp.Matrix([[sp.Symbol("z"), 1], [sp.Symbol("z") ** 2, sp.Symbol("z")]])
        assert sp.simplify(oracle.det()) == 0
        assert oracle.rank() == 1
        assert det(m).is_zero()
        assert rank(m) == 1

    def test_generic_rank_vs_sympy(self):
        rng = random.Random(2)
        v = ("x", "y")
        f = FunctionField(v)
        for _ in range(10):
            rows = [[rand_expr(rng, v, 1, 2) for _ in range(3)] for _ in range(3)]
            m = Matrix(rows, 3, f)
            ref = sp.Matrix([[to_sympy(x) for x in r] for r in rows])
            assert rank(m) == ref.rank(simplify=True)
            assert sp.expand(to_sympy(det(m)) - ref.det()) == 0


class TestKernel:
    def test_zero_map(self):
        assert kernel(Matrix.zeros(2, 2)) == Subspace.full(2)

    def test_nilpotent(self):
        assert kernel(q([[0, 1], [0, 0]])) == Subspace.span([(1, 0)], 2)

    def test_generic_kernel(self):
        v = ("x", "y")
        f = FunctionField(v)
        x = parse_expr("x", v)
        m = Matrix([[f.zero, x], [-x, f.zero]], 2, f)
        assert kernel(m).dim == 0

    def test_rank_nullity(self):
        rng = random.Random(3)
        for _ in range(30):
            m = Matrix([[Fraction(rng.randint(-1, 1)) for _ in range(4)] for _ in range(3)], 4, QQ)
            k = kernel(m)
            assert k.dim + rank(m) == 4
            for vec in k.vectors:
                assert all(c == 0 for c in m.apply(vec))


class TestSubspaces:
    def test_axes(self):
        a = Subspace.span([(1, 0)], 2)
        b = Subspace.span([(0, 1)], 2)
        assert intersect(a, b).dim == 0
        assert sum_(a, b) == Subspace.full(2)
        assert intersect(a, a) == a

    def test_grassmann_formula(self):
        rng = random.Random(4)
        for _ in range(100):
            a, b = rand_subspace(rng, 6), rand_subspace(rng, 6)
            assert a.dim + b.dim == sum_(a, b).dim + intersect(a, b).dim
            assert sum_(a, b).contains_subspace(a) and a.contains_subspace(intersect(a, b))

    def test_equal(self):
        a = Subspace.span([(1, 1, 0), (0, 1, 1)], 3)
        b = Subspace.span([(1, 2, 1), (1, 0, -1)], 3)
        assert equal(a, b) and a == b

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            intersect(Subspace.full(2), Subspace.full(3))

    def test_annihilator(self):
        s = Subspace.span([(1, 0, 0)], 3)
        assert annihilator(s) == Subspace.span([(0, 1, 0), (0, 0, 1)], 3)

    def test_image(self):
        assert image(q([[1, 2], [2, 4]])) == Subspace.span([(1, 2)], 2)


class TestPairingOrthogonal:
    def test_tangent_part_is_isotropic(self):
        s = Subspace.span([(1, 0, 0, 0), (0, 1, 0, 0)], 4)
        assert pairing_orthogonal(s) == s

    def test_regular_distribution(self):
        # F + ann(F) for F = span{e1} in n = 2
        s = Subspace.span([(1, 0, 0, 0), (0, 0, 0, 1)], 4)
        assert pairing_orthogonal(s) == s

    def test_non_isotropic_line(self):
        s = Subspace.span([(1, 0, 1, 0)], 4)
        perp = pairing_orthogonal(s)
        assert perp.dim == 3
        assert not perp.contains((1, 0, 1, 0))
        assert pairing((1, 0, 1, 0), (1, 0, 1, 0)) == 2

    def test_odd_ambient(self):
        with pytest.raises(DimensionMismatch):
            pairing_orthogonal(Subspace.full(3))

    def test_double_orthogonal_and_de_morgan(self):
        rng = random.Random(5)
        signs_sizes = [((1,), None), ((1, -1), (2, 1)), ((1, -1, 1, -1), (1, 1, 1, 0))]
        for signs, sizes in signs_sizes:
            for _ in range(20):
                a, b = rand_subspace(rng, 6), rand_subspace(rng, 6)
                pa = pairing_orthogonal(a, signs, sizes)
                pb = pairing_orthogonal(b, signs, sizes)
                assert a.dim + pa.dim == 6
                assert pairing_orthogonal(pa, signs, sizes) == a
                assert pairing_orthogonal(sum_(a, b), signs, sizes) == intersect(pa, pb)
                assert pairing_orthogonal(intersect(a, b), signs, sizes) == sum_(pa, pb)


class TestSolveInverse:
    def test_inverse(self):
        m = q([[2, 1], [1, 1]])
        assert m @ inverse(m) == Matrix.identity(2)

    def test_singular(self):
        with pytest.raises(DivisionByZero):
            inverse(q([[1, 2], [2, 4]]))

    def test_solve(self):
        m = q([[1, 2], [2, 4]])
        assert solve(m, (1, 3)) is None
        x = solve(m, (1, 2))
        assert m.apply(x) == (1, 2)

    def test_symbolic_inverse(self):
        v = ("t",)
        f = FunctionField(v)
        t = parse_expr("t", v)
        m = Matrix([[f.one, t], [f.zero, t + 1]], 2, f)
        inv = inverse(m)
        assert m @ inv == Matrix.identity(2, f)
        assert str(inv.rows[1][1]) == "1/(t + 1)"
