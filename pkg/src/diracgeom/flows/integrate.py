"""Fixed-step integration of Dirac-bracket dynamics on a constraint set.

Exact quantities become floats only here. The vector field
``xdot^i = {x^i, H}_D`` is built exactly, checked to be tangent to every
constraint, and then compiled into float polynomial programs.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..constraints import ConstraintSystem, dirac_vector_field
from ..errors import (
    ConsistencyError,
    DenominatorVanishes,
    NearSingularConstraintMatrix,
    NotOnConstraint,
    StepRejected,
)
from ..linalg import det
from ..scalar import Poly, ScalarExpr
from . import _kernels

METHODS = {"rk4": _kernels.RK4, "midpoint": _kernels.MIDPOINT}


@dataclass(frozen=True)
class FlowConfig:
    step_size: float
    duration: float
    method: str = "rk4"
    report_every: int = 1
    det_tol: float = 1e-9
    psi_tol: float = 1e-9
    backend: str | None = None

    def __post_init__(self):
        if not self.step_size > 0:
            raise ValueError("step_size must be positive")
        if not self.duration > 0:
            raise ValueError("duration must be positive")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {sorted(METHODS)}")
        if self.report_every < 1:
            raise ValueError("report_every must be at least 1")


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    h_values: np.ndarray
    constraint_norms: np.ndarray

    def __len__(self):
        return len(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def max_energy_drift(self) -> float:
        return float(np.max(np.abs(self.h_values - self.h_values[0])))

    def write_csv(self, fh):
        m = self.states.shape[1]
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t"] + [f"x{i + 1}" for i in range(m)] + ["H", "constraint_norm"])
        for t, x, h, c in zip(self.times, self.states, self.h_values, self.constraint_norms):
            w.writerow([repr(float(t))] + [repr(float(v)) for v in x] + [repr(float(h)), repr(float(c))])


def _program(polys: Sequence[Poly], m: int):
    exps, coeffs, offsets = [], [], [0]
    for p in polys:
        terms = p.terms() or [((0,) * m, 0)]
        for e, c in terms:
            exps.append(e)
            coeffs.append(float(c))
        offsets.append(len(coeffs))
    return (np.array(exps, dtype=np.int64).reshape(len(coeffs), m),
            np.array(coeffs, dtype=np.float64),
            np.array(offsets, dtype=np.int64))


class CompiledFlow:
    """Float program for the Dirac-bracket vector field of ``H`` on ``cs``."""

    def __init__(self, cs: ConstraintSystem, h: ScalarExpr, check_tangency: bool = True):
        h = cs.field.coerce(h)
        if not h.is_polynomial():
            raise ValueError("the hamiltonian must be a polynomial")
        self.cs = cs
        self.h = h
        self.xdot = dirac_vector_field(cs, h)
        if check_tangency:
            for f in cs.psi_exprs():
                s = cs.field.zero
                for i, v in enumerate(self.xdot):
                    if v:
                        s = s + f.diff_index(i) * v
                if not s.is_zero():
                    raise ConsistencyError(f"Dirac flow is not tangent to {f}: dpsi(X) = {s}")
        self.tangent = check_tangency
        m = cs.m
        detc = det(cs.constraint_matrix()) if cs.k else cs.field.one
        polys = [v.num for v in self.xdot] + [v.den for v in self.xdot]
        polys += [detc.num, detc.den, h.num.scale(1 / h.den.constant_value())]
        polys += list(cs.psis)
        self.m, self.k = m, cs.k
        self.exps, self.coeffs, self.offsets = _program(polys, m)

    def vector_field(self, x, det_tol: float = 1e-9, backend: str | None = None) -> np.ndarray:
        _, field, _ = _kernels.kernels(backend)
        x = np.asarray(x, dtype=np.float64)
        vals = np.empty(len(self.offsets) - 1)
        dx = np.empty(self.m)
        st = field(self.exps, self.coeffs, self.offsets, self.m, self.k, det_tol, x, vals, dx)
        _raise_status(st, x)
        return dx

    def evaluate_all(self, x, backend: str | None = None) -> np.ndarray:
        evaluate, _, _ = _kernels.kernels(backend)
        vals = np.empty(len(self.offsets) - 1)
        evaluate(self.exps, self.coeffs, self.offsets, np.asarray(x, dtype=np.float64), vals)
        return vals

    def hamiltonian(self, x) -> float:
        return float(self.evaluate_all(x)[2 * self.m + 2])

    def constraint_norm(self, x) -> float:
        vals = self.evaluate_all(x)
        return float(np.max(np.abs(vals[2 * self.m + 3:]))) if self.k else 0.0


def _raise_status(st: int, x):
    if st == _kernels.OK:
        return
    where = np.array2string(np.asarray(x), precision=6)
    if st == _kernels.NEAR_SINGULAR:
        raise NearSingularConstraintMatrix(f"|det c| below threshold at {where}")
    if st == _kernels.POLE:
        raise DenominatorVanishes(f"vector field has a pole at {where}")
    raise StepRejected(f"nonfinite value near {where}")


def compile_flow(cs: ConstraintSystem, h: ScalarExpr, check_tangency: bool = True) -> CompiledFlow:
    return CompiledFlow(cs, h, check_tangency)


def vector_field_numeric(cs: ConstraintSystem, h: ScalarExpr, x, det_tol: float = 1e-9,
                         backend: str | None = None) -> np.ndarray:
    return compile_flow(cs, h).vector_field(x, det_tol, backend)


def step_sizes(dt: float, duration: float) -> np.ndarray:
    """Steps of size ``dt`` with a shortened last step so the run ends at ``duration``."""
    n = int(math.floor(duration / dt + 1e-9))
    rest = duration - n * dt
    hs = [dt] * n
    if rest > 1e-12 * dt:
        hs.append(rest)
    return np.array(hs, dtype=np.float64)


def integrate(cs: ConstraintSystem, h, x0, cfg: FlowConfig, compiled: CompiledFlow | None = None) -> Trajectory:
    flow = compiled if compiled is not None else compile_flow(cs, h)
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (cs.m,):
        raise ValueError(f"x0 must have {cs.m} components")
    if flow.constraint_norm(x0) >= cfg.psi_tol:
        raise NotOnConstraint(f"|psi(x0)| = {flow.constraint_norm(x0):.3e} exceeds {cfg.psi_tol}")
    _, _, run = _kernels.kernels(cfg.backend)
    hs = step_sizes(cfg.step_size, cfg.duration)
    times, states, hv, cn, st, step = run(flow.exps, flow.coeffs, flow.offsets, flow.m, flow.k, cfg.det_tol,
                                          x0, hs, METHODS[cfg.method], cfg.report_every)
    if st != _kernels.OK:
        _raise_status(st, states[-1])
    return Trajectory(np.array(times), np.array(states), np.array(hv), np.array(cn))


def casimir_derivative(cs: ConstraintSystem, h: ScalarExpr, f: ScalarExpr) -> ScalarExpr:
    """Derivative of ``f`` along the Dirac flow of ``H``, exactly."""
    xdot = dirac_vector_field(cs, h)
    f = cs.field.coerce(f)
    s = cs.field.zero
    for i, v in enumerate(xdot):
        if v:
            s = s + f.diff_index(i) * v
    return s
