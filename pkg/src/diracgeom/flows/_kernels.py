"""Float kernels for evaluating compiled polynomial programs and stepping ODEs.

A program is a batch of polynomials stored as
``exps`` (T x m int64), ``coeffs`` (T float64) and ``offsets`` (P+1 int64);
polynomial ``j`` owns terms ``offsets[j]:offsets[j+1]`` and has at least one
term. The batch layout used by the flow is

    num_0..num_{m-1}, den_0..den_{m-1}, det_num, det_den, H, psi_1..psi_k

Two interchangeable backends exist: numba-compiled loops and plain numpy.
``DIRACGEOM_DISABLE_NUMBA=1`` (or ``DIRACGEOM_BACKEND=numpy``) selects numpy
when no backend is requested explicitly.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

OK = 0
NEAR_SINGULAR = 1
NONFINITE = 2
POLE = 3

RK4 = 0
MIDPOINT = 1


def _eval_loop(exps, coeffs, offsets, x, out):
    nprog = offsets.shape[0] - 1
    m = x.shape[0]
    for j in range(nprog):
        s = 0.0
        for t in range(offsets[j], offsets[j + 1]):
            v = coeffs[t]
            for i in range(m):
                e = exps[t, i]
                if e:
                    v *= x[i] ** e
            s += v
        out[j] = s


def _eval_numpy(exps, coeffs, offsets, x, out):
    terms = coeffs * np.prod(x[None, :] ** exps, axis=1)
    out[:] = np.add.reduceat(terms, offsets[:-1])


def _make_field(evaluate):
    def field(exps, coeffs, offsets, m, k, det_tol, x, vals, dx):
        """Write the vector field into ``dx``; return a status code."""
        evaluate(exps, coeffs, offsets, x, vals)
        dd = vals[2 * m + 1]
        if dd == 0.0:
            return POLE
        if k > 0 and abs(vals[2 * m] / dd) < det_tol:
            return NEAR_SINGULAR
        for i in range(m):
            den = vals[m + i]
            if den == 0.0:
                return POLE
            dx[i] = vals[i] / den
            if not np.isfinite(dx[i]):
                return NONFINITE
        return OK
    return field


def _make_integrator(evaluate, field):
    def integrate(exps, coeffs, offsets, m, k, det_tol, x0, hs, method, report_every):
        nsteps = hs.shape[0]
        nrep = nsteps // report_every + 2
        times = np.empty(nrep)
        states = np.empty((nrep, m))
        hvals = np.empty(nrep)
        cnorms = np.empty(nrep)
        vals = np.empty(offsets.shape[0] - 1)
        x = x0.copy()
        k1 = np.empty(m)
        k2 = np.empty(m)
        k3 = np.empty(m)
        k4 = np.empty(m)
        tmp = np.empty(m)

        def record(r, t):
            evaluate(exps, coeffs, offsets, x, vals)
            times[r] = t
            for i in range(m):
                states[r, i] = x[i]
            hvals[r] = vals[2 * m + 2]
            c = 0.0
            for a in range(k):
                v = abs(vals[2 * m + 3 + a])
                if v > c:
                    c = v
            cnorms[r] = c

        record(0, 0.0)
        r = 1
        t = 0.0
        for step in range(nsteps):
            h = hs[step]
            st = field(exps, coeffs, offsets, m, k, det_tol, x, vals, k1)
            if st != OK:
                return times[:r], states[:r], hvals[:r], cnorms[:r], st, step
            if method == RK4:
                for i in range(m):
                    tmp[i] = x[i] + 0.5 * h * k1[i]
                st = field(exps, coeffs, offsets, m, k, det_tol, tmp, vals, k2)
                if st != OK:
                    return times[:r], states[:r], hvals[:r], cnorms[:r], st, step
                for i in range(m):
                    tmp[i] = x[i] + 0.5 * h * k2[i]
                st = field(exps, coeffs, offsets, m, k, det_tol, tmp, vals, k3)
                if st != OK:
                    return times[:r], states[:r], hvals[:r], cnorms[:r], st, step
                for i in range(m):
                    tmp[i] = x[i] + h * k3[i]
                st = field(exps, coeffs, offsets, m, k, det_tol, tmp, vals, k4)
                if st != OK:
                    return times[:r], states[:r], hvals[:r], cnorms[:r], st, step
                for i in range(m):
                    x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            else:
                for i in range(m):
                    tmp[i] = x[i] + 0.5 * h * k1[i]
                st = field(exps, coeffs, offsets, m, k, det_tol, tmp, vals, k2)
                if st != OK:
                    return times[:r], states[:r], hvals[:r], cnorms[:r], st, step
                for i in range(m):
                    x[i] += h * k2[i]
            for i in range(m):
                if not np.isfinite(x[i]):
                    return times[:r], states[:r], hvals[:r], cnorms[:r], NONFINITE, step
            t += h
            if (step + 1) % report_every == 0 or step == nsteps - 1:
                record(r, t)
                r += 1
        return times[:r], states[:r], hvals[:r], cnorms[:r], OK, nsteps

    return integrate


_numpy_field = _make_field(_eval_numpy)
_numpy_integrate = _make_integrator(_eval_numpy, _numpy_field)

_BACKENDS = {"numpy": (_eval_numpy, _numpy_field, _numpy_integrate)}

if HAVE_NUMBA:
    _nb_eval = njit(cache=True)(_eval_loop)
    _nb_field = njit(_make_field(_nb_eval))
    _nb_integrate = njit(_make_integrator(_nb_eval, _nb_field))
    _BACKENDS["numba"] = (_nb_eval, _nb_field, _nb_integrate)


def available_backends() -> list:
    return sorted(_BACKENDS)


def resolve_backend(name: str | None = None) -> str:
    """Pick a backend; the environment is consulted only when ``name`` is None."""
    if name is None:
        if os.environ.get("DIRACGEOM_DISABLE_NUMBA") == "1":
            name = "numpy"
        else:
            name = os.environ.get("DIRACGEOM_BACKEND", "numba" if HAVE_NUMBA else "numpy")
    if name == "auto":
        name = "numba" if HAVE_NUMBA else "numpy"
    if name not in _BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {available_backends()}")
    return name


def kernels(name: str | None = None):
    """``(evaluate, field, integrate)`` for the chosen backend."""
    return _BACKENDS[resolve_backend(name)]
