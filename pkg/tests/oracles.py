"""Independent oracles and random generators shared by the test modules.

Everything symbolic here goes through sympy, which the library never
imports, so agreement between the two is a genuine cross-check.
"""

from __future__ import annotations

import random
from fractions import Fraction

import sympy as sp

from diracgeom.field_dirac import Section
from diracgeom.linalg import QQ, Matrix, Subspace
from diracgeom.linear_dirac import (
    LagrangianRelation,
    LinearDirac,
    from_distribution,
    gauge,
    graph_of_bivector,
    graph_of_twoform,
)
from diracgeom.scalar import ScalarExpr, parse_expr

# -- conversions -------------------------------------------------------------


def to_sympy(e: ScalarExpr):
    names = e.variables
    loc = {n: sp.Symbol(n) for n in names}
    return sp.sympify(str(e).replace("^", "**"), locals=loc)


def sym_equal(a, b) -> bool:
    return sp.simplify(sp.together(a - b)) == 0


def symbols_for(variables):
    return [sp.Symbol(v) for v in variables]


# -- random data ------------------------------------------------------------


def rand_poly_text(rng: random.Random, variables, max_deg=2, max_terms=3) -> str:
    """A random polynomial as text in the expression grammar."""
    n = len(variables)
    if rng.random() < 0.15:
        return "0"
    parts = []
    for _ in range(rng.randint(1, max_terms)):
        c = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        if c == 0:
            continue
        deg = rng.randint(0, max_deg)
        mono = []
        for _ in range(deg):
            mono.append(variables[rng.randrange(n)])
        parts.append("*".join([f"({c})"] + mono))
    return " + ".join(parts) if parts else "0"


def rand_expr(rng, variables, max_deg=2, max_terms=3) -> ScalarExpr:
    return parse_expr(rand_poly_text(rng, variables, max_deg, max_terms), variables)


def rand_section(rng, variables, max_deg=2) -> Section:
    n = len(variables)
    return Section.make(variables, [rand_expr(rng, variables, max_deg) for _ in range(n)],
                        [rand_expr(rng, variables, max_deg) for _ in range(n)])


def rand_skew(rng, variables, max_deg=1, max_terms=2) -> Matrix:
    """Random skew matrix over the rational-function field of ``variables``."""
    from diracgeom.linalg import FunctionField

    field = FunctionField(variables)
    n = len(variables)
    rows = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            e = rand_expr(rng, variables, max_deg, max_terms)
            rows[i][j] = e
            rows[j][i] = -e
    return Matrix(rows, n, field)


def rand_exact_twoform(rng, variables, max_deg=2) -> Matrix:
    """``B = d(theta)`` for a random polynomial 1-form ``theta``: closed by construction."""
    from diracgeom.linalg import FunctionField

    field = FunctionField(variables)
    n = len(variables)
    theta = [rand_expr(rng, variables, max_deg) for _ in range(n)]
    rows = [[theta[j].diff_index(i) - theta[i].diff_index(j) for j in range(n)] for i in range(n)]
    return Matrix(rows, n, field)


def rand_rational_matrix(rng, nrows, ncols, lo=-1, hi=1) -> Matrix:
    return Matrix([[Fraction(rng.randint(lo, hi)) for _ in range(ncols)] for _ in range(nrows)], ncols, QQ)


def rand_skew_q(rng, n) -> Matrix:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            c = Fraction(rng.randint(-2, 2))
            rows[i][j], rows[j][i] = c, -c
    return Matrix(rows, n, QQ)


def rand_linear_dirac(rng, n) -> LinearDirac:
    """A random lagrangian subspace of ``Q^n + (Q^n)*`` from a mix of constructions."""
    kind = rng.randrange(4)
    if kind == 0:
        l = graph_of_bivector(rand_skew_q(rng, n))
    elif kind == 1:
        l = graph_of_twoform(rand_skew_q(rng, n))
    else:
        k = rng.randint(0, n)
        vecs = [[Fraction(rng.randint(-1, 1)) for _ in range(n)] for _ in range(k)]
        l = from_distribution(Subspace.span(vecs, n, QQ))
    if kind == 3:
        l = gauge(l, rand_skew_q(rng, n))
    return l


def rand_relation(rng, n_left, n_right) -> LagrangianRelation:
    """Random lagrangian relation, obtained by flipping the covector sign of the
    right factor of a random Dirac structure on the product."""
    n = n_left + n_right
    l = rand_linear_dirac(rng, n)
    rows = []
    for v in l.vectors():
        w, v_ = v[:n_left], v[n_left:n]
        beta, alpha = v[n:n + n_left], v[n + n_left:]
        rows.append(tuple(w) + tuple(beta) + tuple(v_) + tuple(-a for a in alpha))
    return LagrangianRelation(n_left, n_right, Subspace.span(rows, 2 * n, QQ))


# -- sympy calculus oracle --------------------------------------------------


def sym_section(s: Section):
    return [to_sympy(x) for x in s.vf], [to_sympy(x) for x in s.form]


def _lie(x, y, syms):
    n = len(syms)
    return [sp.expand(sum(x[j] * sp.diff(y[i], syms[j]) - y[j] * sp.diff(x[i], syms[j]) for j in range(n)))
            for i in range(n)]


def _lie_form(x, beta, syms):
    n = len(syms)
    return [sum(x[j] * sp.diff(beta[i], syms[j]) + beta[j] * sp.diff(x[j], syms[i]) for j in range(n))
            for i in range(n)]


def _contract(x, a):
    return sum(xi * ai for xi, ai in zip(x, a))


def sym_courant(a, b, syms):
    (x, al), (y, be) = a, b
    f = _contract(y, al) - _contract(x, be)
    lb = _lie_form(x, be, syms)
    la = _lie_form(y, al, syms)
    form = [sp.together(lb[i] - la[i] + sp.Rational(1, 2) * sp.diff(f, syms[i])) for i in range(len(syms))]
    return _lie(x, y, syms), form


def sym_pairing(a, b):
    (x, al), (y, be) = a, b
    return _contract(x, be) + _contract(y, al)


def sym_poisson(pi_rows, f, g, syms):
    n = len(syms)
    return sum(pi_rows[i][j] * sp.diff(f, syms[i]) * sp.diff(g, syms[j]) for i in range(n) for j in range(n))


def sym_jacobiator(pi_rows, f, g, h, syms):
    pb = lambda u, v: sym_poisson(pi_rows, u, v, syms)  # noqa: E731
    return sp.together(pb(f, pb(g, h)) + pb(h, pb(f, g)) + pb(g, pb(h, f)))


def sym_d_twoform(w, x, y, z, syms):
    """``dω(X, Y, Z)`` from the coordinate formula ``(dω)_{ijk} = ∂_i ω_jk + ∂_j ω_ki + ∂_k ω_ij``."""
    n = len(syms)
    total = 0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c = sp.diff(w[j][k], syms[i]) + sp.diff(w[k][i], syms[j]) + sp.diff(w[i][j], syms[k])
                if c != 0:
                    total += c * x[i] * y[j] * z[k]
    return sp.together(total)


# -- linear oracle -----------------------------------------------------------


def _q(x: Fraction):
    return sp.Rational(x.numerator, x.denominator)


def existential_compose(r1: LagrangianRelation, r2: LagrangianRelation) -> Subspace:
    """``{(u, w) : exists m with (u, m) in r1 and (m, w) in r2}`` by a sympy nullspace."""
    nu, nv, nw = r1.n_left, r1.n_right, r2.n_right
    b1 = [list(v) for v in r1.space.vectors]
    b2 = [list(v) for v in r2.space.vectors]
    # unknowns: coefficients a (for b1) and c (for b2); middle parts must agree
    rows = []
    for t in range(2 * nv):
        rows.append([_q(v[2 * nu + t]) for v in b1] + [-_q(v[t]) for v in b2])
    ncoef = len(b1) + len(b2)
    if rows:
        ns = sp.Matrix(rows).nullspace()
    else:
        ns = [sp.Matrix([1 if i == j else 0 for i in range(ncoef)]) for j in range(ncoef)]
    out = []
    for vec in ns:
        a, c = vec[:len(b1)], vec[len(b1):]
        u = [sum(a[i] * _q(b1[i][t]) for i in range(len(b1))) for t in range(2 * nu)]
        w = [sum(c[i] * _q(b2[i][2 * nv + t]) for i in range(len(b2))) for t in range(2 * nw)]
        out.append([Fraction(int(sp.Rational(x).p), int(sp.Rational(x).q)) for x in u + w])
    return Subspace.span(out, 2 * (nu + nw), QQ)
