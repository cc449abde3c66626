"""Compare the numba and numpy flow backends on the constrained oscillators.

    python benchmarks/bench_kernels.py [--steps N] [--repeat R]

Prints wall time per backend (after a warm-up run that triggers JIT
compilation) and the largest state difference between the two backends.
"""

import argparse
import math
import time

import numpy as np

from diracgeom.constraints import ConstraintSystem
from diracgeom.flows import FlowConfig, available_backends, compile_flow, integrate
from diracgeom.linalg import FunctionField, Matrix
from diracgeom.scalar import parse_expr, parse_poly

VARS = ("q1", "p1", "q2", "p2")


def systems():
    pi = Matrix([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], field=FunctionField(VARS))
    h = parse_expr("1/2*(q1^2 + p1^2 + q2^2 + p2^2)", VARS)
    linear = ConstraintSystem(pi, [parse_poly("q2", VARS), parse_poly("p2", VARS)])
    curved = ConstraintSystem(pi, [parse_poly("q2 - q1^2", VARS), parse_poly("p2 - p1", VARS)])
    return [("linear", linear, h, [1.0, 0.0, 0.0, 0.0]), ("curved", curved, h, [0.3, 0.0, 0.09, 0.0])]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    dt = 2 * math.pi / args.steps
    for name, cs, h, x0 in systems():
        flow = compile_flow(cs, h)
        finals = {}
        for backend in available_backends():
            cfg = FlowConfig(dt, 2 * math.pi, backend=backend, report_every=args.steps)
            integrate(cs, h, x0, cfg, compiled=flow)  # warm-up / JIT
            best = math.inf
            for _ in range(args.repeat):
                t = time.perf_counter()
                tr = integrate(cs, h, x0, cfg, compiled=flow)
                best = min(best, time.perf_counter() - t)
            finals[backend] = tr.final
            print(f"{name:7s} {backend:6s} steps={args.steps} best={best * 1e3:9.2f} ms")
        if len(finals) == 2:
            diff = np.max(np.abs(finals["numba"] - finals["numpy"]))
            print(f"{name:7s} max |numba - numpy| = {diff:.3e}")


if __name__ == "__main__":
    main()
