import random
from fractions import Fraction

import pytest
import sympy as sp

from conftest import SPECS
from oracles import rand_expr, symbols_for, to_sympy

from diracgeom import io
from diracgeom.constraints import (
    COISOTROPIC,
    COSYMPLECTIC,
    MIXED,
    POISSON_SUBMANIFOLD,
    ConstraintSystem,
    Parametrization,
    classify_point,
    constraint_matrix,
    dirac_bracket,
    dirac_vector_field,
    hamiltonian_at,
    momentum_level_set,
    project_to_tangent,
    pullback_via_parametrization,
    tangency_check,
)
from diracgeom.errors import (
    DimensionMismatch,
    InvalidParametrization,
    NotCosymplecticAtPoint,
    NotOnConstraint,
    NotPoisson,
    RankDropInPsi,
    SecondClassViolated,
)
from diracgeom.field_dirac import DiracField, PolyMap, pointwise
from diracgeom.linalg import FunctionField, Matrix, Subspace, kernel
from diracgeom.linear_dirac import decompose
from diracgeom.scalar import parse_expr, parse_poly

V = ("q1", "p1", "q2", "p2")
CANONICAL = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]
HALF = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]


def mat(rows, variables=V):
    return Matrix([[parse_expr(str(c), variables) for c in r] for r in rows], len(rows), FunctionField(variables))


def system(psis, probes=(), rows=CANONICAL, variables=V):
    return ConstraintSystem(mat(rows, variables), [parse_poly(t, variables) for t in psis], probes)


def e(text, variables=V):
    return parse_expr(text, variables)


def oscillator():
    return io.load(str(SPECS / "oscillator.json"))


def second_class():
    return io.load(str(SPECS / "second-class.json"))


class TestClassification:
    def test_cosymplectic(self):
        cs = oscillator()
        assert classify_point(cs, (1, 0, 0, 0)).label == COSYMPLECTIC

    def test_coisotropic(self):
        cs = system(["p2"], [(0, 0, 0, 0)])
        c = classify_point(cs, (3, 1, 2, 0))
        assert c.label == COISOTROPIC and c.dim_image == 1

    def test_poisson_submanifold(self):
        cs = system(["q2"], rows=HALF)
        assert classify_point(cs, (1, 1, 0, 1)).label == POISSON_SUBMANIFOLD

    def test_mixed(self):
        cs = system(["q2", "p2", "q1"])
        c = classify_point(cs, (0, 5, 0, 0))
        assert c.label == MIXED and c.dim_intersection == 1 and c.dim_image == 3

    def test_second_class_degenerates_on_a_line(self):
        cs = second_class()
        assert classify_point(cs, (0, 0, 0, 0)).label == COSYMPLECTIC
        # 1 + 2*q1 = 0 at q1 = -1/2
        bad = (Fraction(-1, 2), 1, Fraction(1, 4), 1)
        assert classify_point(cs, bad).label != COSYMPLECTIC

    def test_point_checks(self):
        cs = oscillator()
        with pytest.raises(NotOnConstraint):
            classify_point(cs, (1, 0, 1, 0))
        with pytest.raises(DimensionMismatch):
            classify_point(cs, (1, 0, 0))
        with pytest.raises(RankDropInPsi):
            system(["q2^2"], [(0, 0, 0, 0)])

    def test_not_poisson(self):
        rows = [[0, 1, 0], [-1, 0, "y"], [0, "-y", 0]]
        with pytest.raises(NotPoisson):
            system(["z"], rows=rows, variables=("x", "y", "z"))


class TestConstraintMatrix:
    def test_oscillator(self):
        report = constraint_matrix(oscillator())
        assert report.matrix == mat([[0, 1], [-1, 0]], V)
        assert report.invertible
        assert all(ok for _, ok in report.probe_invertible)

    def test_first_class(self):
        report = constraint_matrix(system(["p2"], [(0, 0, 0, 0)]))
        assert report.matrix == mat([[0]], V)
        assert not report.invertible

    def test_second_class_entry(self):
        report = constraint_matrix(second_class())
        assert report.matrix.rows[0][1] == e("1 + 2*q1")
        assert report.det == e("(1 + 2*q1)^2")

    def test_against_sympy(self):
        cs = second_class()
        syms = symbols_for(V)
        psis = [to_sympy(f) for f in cs.psi_exprs()]
        poisson = lambda f, g: sum(CANONICAL[i][j] * sp.diff(f, syms[i]) * sp.diff(g, syms[j])  # noqa: E731
                                   for i in range(4) for j in range(4))
        ref = sp.Matrix(2, 2, lambda a, b: poisson(psis[a], psis[b]))
        mine = constraint_matrix(cs).matrix
        assert all(sp.expand(to_sympy(mine.rows[a][b]) - ref[a, b]) == 0 for a in range(2) for b in range(2))

    def test_second_class_violated(self):
        cs = system(["p2"])
        with pytest.raises(SecondClassViolated):
            dirac_bracket(cs, e("q1"), e("q2"))


class TestDiracBracket:
    def test_coordinates(self):
        cs = second_class()
        assert str(dirac_bracket(cs, e("q1"), e("p1"))) == "1/(2*q1 + 1)"
        assert dirac_bracket(cs, e("q1"), e("q1")).is_zero()

    def test_annihilates_constraints(self):
        rng = random.Random(1)
        for cs in (oscillator(), second_class()):
            for f in cs.psi_exprs():
                for _ in range(4):
                    assert dirac_bracket(cs, f, rand_expr(rng, V)).is_zero()

    def test_first_class_functions_keep_their_bracket(self):
        cs = oscillator()
        # q1 and p1 Poisson-commute with q2 and p2
        assert dirac_bracket(cs, e("q1"), e("p1")) == cs.bracket(e("q1"), e("p1"))
        assert dirac_bracket(cs, e("q1^2*p1"), e("p1 + q1")) == cs.bracket(e("q1^2*p1"), e("p1 + q1"))

    def test_bilinear_skew_leibniz(self):
        cs = second_class()
        rng = random.Random(2)
        for _ in range(4):
            f, g, h = (rand_expr(rng, V, 2, 2) for _ in range(3))
            assert dirac_bracket(cs, f, g) == -dirac_bracket(cs, g, f)
            assert dirac_bracket(cs, f, g + h * 3) == dirac_bracket(cs, f, g) + dirac_bracket(cs, f, h) * 3
            assert dirac_bracket(cs, f, g * h) == dirac_bracket(cs, f, g) * h + g * dirac_bracket(cs, f, h)

    def test_jacobi(self):
        cs = second_class()
        xs = [e(v) for v in V]
        db = lambda a, b: dirac_bracket(cs, a, b)  # noqa: E731
        for i in range(4):
            for j in range(i + 1, 4):
                for k in range(j + 1, 4):
                    a, b, c = xs[i], xs[j], xs[k]
                    jac = db(a, db(b, c)) + db(c, db(a, b)) + db(b, db(c, a))
                    for p in cs.probes:
                        assert jac.evaluate(p) == 0
                    assert jac.is_zero()

    def test_tangency(self):
        cs = second_class()
        h = e("(q1^2 + p1^2 + q2^2 + p2^2)/2")
        assert tangency_check(cs, h)
        xdot = dirac_vector_field(cs, h)
        assert xdot[0] == dirac_bracket(cs, e("q1"), h)

    def test_hamiltonian_at(self):
        cs = oscillator()
        # X_F(g) = {F, g}: X_{q1} = d/dp1
        assert hamiltonian_at(cs, e("q1"), (1, 0, 0, 0)) == (0, 1, 0, 0)


class TestProjection:
    def test_oscillator_split(self):
        cs = oscillator()
        tangent, normal = project_to_tangent(cs, (1, 0, 0, 0), (1, 2, 3, 4))
        assert tangent == (1, 2, 0, 0)
        assert normal == (0, 0, 3, 4)

    def test_curved_split(self):
        cs = second_class()
        p = (1, 2, 1, 2)
        y = (Fraction(1, 3), -1, 2, 5)
        tangent, normal = project_to_tangent(cs, p, y)
        assert tuple(a + b for a, b in zip(tangent, normal)) == y
        assert kernel(cs.dpsi_at(p)).contains(tangent)
        xpsi = Subspace.span((cs.dpsi_at(p) @ cs.pi_at(p)).rows, 4)
        assert xpsi.contains(normal)

    def test_not_cosymplectic(self):
        cs = system(["p2"], [(0, 0, 0, 0)])
        with pytest.raises(NotCosymplecticAtPoint):
            project_to_tangent(cs, (0, 0, 0, 0), (1, 1, 1, 1))


class TestParametrization:
    def test_oscillator_pullback(self):
        cs = oscillator()
        par = Parametrization(cs, PolyMap.make(("s", "t"), V, ["s", "t", "0", "0"]))
        result, report = pullback_via_parametrization(cs, par, count=4)
        expected = DiracField.bivector_graph(mat([[0, 1], [-1, 0]], ("s", "t")))
        assert result.space == expected.space
        assert not report.flagged

    def test_curved_pullback(self):
        cs = second_class()
        par = Parametrization(cs, PolyMap.make(("s", "t"), V, ["s", "t", "s^2", "t"]))
        result, _ = pullback_via_parametrization(cs, par, count=4)
        expected = DiracField.bivector_graph(mat([[0, "1/(1 + 2*s)"], ["-1/(1 + 2*s)", 0]], ("s", "t")))
        assert result.space == expected.space

    def test_poisson_submanifold_pullback(self):
        cs = system(["q2"], rows=HALF)
        par = Parametrization(cs, PolyMap.make(("s", "t", "u"), V, ["s", "t", "0", "u"]))
        result, _ = pullback_via_parametrization(cs, par, count=3)
        expected = DiracField.bivector_graph(mat([[0, 1, 0], [-1, 0, 0], [0, 0, 0]], ("s", "t", "u")))
        assert result.space == expected.space

    def test_coisotropic_null_distribution(self):
        cs = system(["p2"], [(0, 0, 0, 0)])
        par = Parametrization(cs, PolyMap.make(("s", "t", "u"), V, ["s", "t", "u", "0"]))
        result, report = pullback_via_parametrization(cs, par, count=4)
        for rec in report.records:
            if rec.status == "ok":
                assert decompose(pointwise(result, rec.point)).null.dim == 1
                assert decompose(rec.fiber).null.dim == 1

    def test_invalid(self):
        cs = oscillator()
        with pytest.raises(InvalidParametrization):
            Parametrization(cs, PolyMap.make(("s", "t"), V, ["s", "t", "s", "0"]))
        with pytest.raises(InvalidParametrization):
            Parametrization(cs, PolyMap.make(("s",), V, ["s", "0", "0", "0"]))
        with pytest.raises(InvalidParametrization):
            Parametrization(cs, PolyMap.make(("s", "t"), V, ["s", "s", "0", "0"]))
        with pytest.raises(InvalidParametrization):
            Parametrization(cs, PolyMap.make(("s", "t"), V, ["s^2", "t", "0", "0"]), points=[(0, 0)])

    def test_foreign_system(self):
        cs = oscillator()
        par = Parametrization(cs, PolyMap.make(("s", "t"), V, ["s", "t", "0", "0"]))
        with pytest.raises(InvalidParametrization):
            pullback_via_parametrization(oscillator(), par)


class TestMomentum:
    def test_angular_momentum_level(self):
        pi = mat(CANONICAL)
        j = parse_poly("q1*p2 - q2*p1", V)
        cs = momentum_level_set(pi, [j], [1], probes=[(1, 0, 0, 1)])
        assert cs.psis[0] == j - parse_poly("1", V)
        assert classify_point(cs, (1, 0, 0, 1)).label == COISOTROPIC
        with pytest.raises(NotOnConstraint):
            momentum_level_set(pi, [j], [2], probes=[(1, 0, 0, 1)])

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            momentum_level_set(mat(CANONICAL), [parse_poly("q1", V)], [1, 2])
