"""Multivariate gcd over the integers.

Polynomials are handled in recursive dense form: a polynomial in ``k``
variables is a list of coefficients (lowest degree first) in the first
variable, each coefficient being a polynomial in the remaining ``k - 1``
variables. Level 0 is a plain ``int``. The zero polynomial at level ``k > 0``
is the empty list; lists never carry trailing zeros.

The gcd is computed with the primitive pseudo-remainder sequence, which keeps
coefficient growth in check by stripping contents at every step. Before that,
univariate images modulo a prime bound the degree of the gcd in each
variable; a zero bound either proves coprimality outright or reduces the
problem to the coefficients in the remaining variables, which is where the
sequence would otherwise spend most of its time.
"""

from __future__ import annotations

import math
import random

_PRIME = 2 ** 61 - 1
_TRIES = 4


def _zero(k):
    return 0 if k == 0 else []


def _one(k):
    return 1 if k == 0 else [_one(k - 1)]


def _is_zero(a, k):
    return a == 0 if k == 0 else not a


def _trim(a, k):
    while a and _is_zero(a[-1], k - 1):
        a.pop()
    return a


def _add(a, b, k):
    if k == 0:
        return a + b
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, bi in enumerate(b):
        out[i] = _add(out[i], bi, k - 1)
    return _trim(out, k)


def _neg(a, k):
    if k == 0:
        return -a
    return [_neg(c, k - 1) for c in a]


def _sub(a, b, k):
    return _add(a, _neg(b, k), k)


def _mul(a, b, k):
    if k == 0:
        return a * b
    if not a or not b:
        return []
    out = [_zero(k - 1)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if _is_zero(ai, k - 1):
            continue
        for j, bj in enumerate(b):
            if _is_zero(bj, k - 1):
                continue
            out[i + j] = _add(out[i + j], _mul(ai, bj, k - 1), k - 1)
    return _trim(out, k)


def _scale(a, c, k):
    """Multiply every coefficient of ``a`` (level k) by ``c`` (level k-1)."""
    return _trim([_mul(ai, c, k - 1) for ai in a], k)


def _divexact(a, b, k):
    """Return ``a / b`` when the division is exact, else ``None``."""
    if k == 0:
        q, r = divmod(a, b)
        return q if r == 0 else None
    if not a:
        return []
    if len(a) < len(b):
        return None
    r = list(a)
    q = [_zero(k - 1)] * (len(a) - len(b) + 1)
    lcb = b[-1]
    while r and len(r) >= len(b):
        d = len(r) - len(b)
        c = _divexact(r[-1], lcb, k - 1)
        if c is None:
            return None
        q[d] = c
        for i, bi in enumerate(b):
            r[d + i] = _sub(r[d + i], _mul(c, bi, k - 1), k - 1)
        _trim(r, k)
    if r:
        return None
    return _trim(q, k)


def _prem(a, b, k):
    """Sparse pseudo-remainder of ``a`` by ``b`` in the main variable."""
    r = list(a)
    lcb = b[-1]
    while r and len(r) >= len(b):
        d = len(r) - len(b)
        lr = r[-1]
        r = _scale(r, lcb, k)
        shifted = [_zero(k - 1)] * d + _scale(b, lr, k)
        r = _sub(r, shifted, k)
    return r


def _leading_int(a, k):
    while k > 0:
        a = a[-1]
        k -= 1
    return a


def _positive(a, k):
    return _neg(a, k) if _leading_int(a, k) < 0 else a


def _content(a, k):
    g = _zero(k - 1)
    for c in a:
        g = _gcd(g, c, k - 1)
        if k - 1 == 0 and g == 1:
            break
    return g


def _primitive(a, k):
    c = _content(a, k)
    return [_divexact(ai, c, k - 1) for ai in a]


def _gcd(a, b, k):
    if k == 0:
        return math.gcd(a, b)
    if not a:
        return _positive(b, k) if b else []
    if not b:
        return _positive(a, k)
    c = _gcd(_content(a, k), _content(b, k), k - 1)
    pa, pb = _primitive(a, k), _primitive(b, k)
    if len(pa) < len(pb):
        pa, pb = pb, pa
    while pb:
        if len(pb) == 1:
            pa = _one(k)
            break
        r = _prem(pa, pb, k)
        pa, pb = pb, (_primitive(r, k) if r else [])
    if len(pa) == 1:
        pa = _one(k)
    return _scale(_positive(pa, k), c, k)


def _to_dense(terms, k):
    """``terms`` maps exponent tuples (length k) to ints."""
    if k == 0:
        return sum(terms.values())
    groups = {}
    for e, c in terms.items():
        groups.setdefault(e[0], {})[e[1:]] = c
    out = [_zero(k - 1)] * (max(groups) + 1)
    for d, sub in groups.items():
        out[d] = _to_dense(sub, k - 1)
    return _trim(out, k)


def _from_dense(a, k, prefix, out):
    if k == 0:
        if a:
            out[prefix] = a
        return
    for d, c in enumerate(a):
        if not _is_zero(c, k - 1):
            _from_dense(c, k - 1, prefix + (d,), out)


def _univariate_gcd_degree(a: list, b: list) -> int:
    """Degree of gcd of two dense univariate polynomials over GF(p)."""

    def trim(u):
        while u and u[-1] == 0:
            u.pop()
        return u

    a, b = trim(list(a)), trim(list(b))
    while b:
        inv = pow(b[-1], _PRIME - 2, _PRIME)
        while len(a) >= len(b):
            c = a[-1] * inv % _PRIME
            d = len(a) - len(b)
            for i, bi in enumerate(b):
                a[d + i] = (a[d + i] - c * bi) % _PRIME
            trim(a)
            if not a:
                break
        a, b = b, a
    return len(a) - 1


def _image(terms: dict, v: int, point: list, deg: int):
    """Univariate image in variable ``v`` mod p, or None if the leading term vanishes."""
    out = [0] * (deg + 1)
    for e, c in terms.items():
        t = c % _PRIME
        for i, x in enumerate(point):
            if i != v and e[i]:
                t = t * pow(x, e[i], _PRIME) % _PRIME
        out[e[v]] = (out[e[v]] + t) % _PRIME
    return out if out[deg] else None


def _degree_bound(a: dict, b: dict, v: int, nvars: int, rng) -> int | None:
    """Upper bound for the degree in variable ``v`` of gcd(a, b)."""
    da = max(e[v] for e in a)
    db = max(e[v] for e in b)
    if da == 0 or db == 0:
        return 0
    for _ in range(_TRIES):
        point = [rng.randrange(1, _PRIME) for _ in range(nvars)]
        ia, ib = _image(a, v, point, da), _image(b, v, point, db)
        if ia is not None and ib is not None:
            return _univariate_gcd_degree(ia, ib)
    return None


def _coefficients_in(terms: dict, v: int) -> list:
    groups = {}
    for e, c in terms.items():
        groups.setdefault(e[v], {})[e[:v] + (0,) + e[v + 1:]] = c
    return list(groups.values())


def _is_unit(g: dict, nvars: int) -> bool:
    return len(g) == 1 and next(iter(g)) == (0,) * nvars and abs(next(iter(g.values()))) == 1


def int_poly_gcd(a: dict, b: dict, nvars: int) -> dict:
    """Gcd of two integer-coefficient polynomials given as ``{exponents: int}``.

    The result is determined up to sign; a unit gcd comes back as
    ``{(0,)*nvars: 1}``.
    """
    one = {(0,) * nvars: 1}
    if not a:
        return dict(b) if b else {}
    if not b:
        return dict(a)
    used = [i for i in range(nvars) if any(e[i] for e in a) or any(e[i] for e in b)]
    if not used:
        return {(0,) * nvars: math.gcd(next(iter(a.values())), next(iter(b.values())))}
    rng = random.Random(len(a) * 7919 + len(b))
    bounds = {v: _degree_bound(a, b, v, nvars, rng) for v in used}
    zero = [v for v in used if bounds[v] == 0]
    if zero:
        if len(zero) == len(used):
            g = 0
            for c in list(a.values()) + list(b.values()):
                g = math.gcd(g, c)
            return {(0,) * nvars: g}
        # the gcd does not involve v: it is the gcd of all coefficients in v
        v = zero[0]
        g = None
        for c in _coefficients_in(a, v) + _coefficients_in(b, v):
            g = c if g is None else int_poly_gcd(g, c, nvars)
            if _is_unit(g, nvars):
                return one
        return g
    # main variable: the one with the smallest bound keeps the remainder sequence short
    used.sort(key=lambda v: (bounds[v] if bounds[v] is not None else 1 << 30))
    return _prs_gcd(a, b, nvars, used)


def _prs_gcd(a: dict, b: dict, nvars: int, used: list) -> dict:
    k = len(used)

    def project(terms):
        return {tuple(e[i] for i in used): c for e, c in terms.items()}

    g = _gcd(_to_dense(project(a), k), _to_dense(project(b), k), k)
    flat = {}
    _from_dense(g, k, (), flat)
    result = {}
    for e, c in flat.items():
        full = [0] * nvars
        for pos, i in enumerate(used):
            full[i] = e[pos]
        result[tuple(full)] = c
    return result
