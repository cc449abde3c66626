"""Command-line interface.

Exit codes:
    0  success / property holds
    1  property check failed (not lagrangian, not integrable, not admissible, ...)
    2  parse error (bad JSON, schema violation, bad expression)
    3  precondition violated (second-class violation, point off the constraint, ...)
    4  internal consistency check failed

stdout carries machine-readable results only; diagnostics go to stderr.
No environment variables are consulted: the flow backend is passed
explicitly.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io
from .constraints import ConstraintSystem, classify_point, dirac_bracket
from .errors import (
    ConsistencyError,
    DegenerateFrame,
    DiracError,
    InvarianceViolated,
    NotAdmissible,
    NotLagrangian,
    ParseError,
)
from .field_dirac import (
    DiracField,
    PolyMap,
    admissible_bracket,
    backward_image,
    forward_image,
    is_integrable,
)
from .linear_dirac import LagrangianRelation, compose
from .scalar import parse_expr

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_INTERNAL = 4


class PropertyFailed(Exception):
    pass


def _points(pts) -> list:
    return [[str(c) for c in p] for p in pts]


def _expect(obj, cls, what: str):
    if not isinstance(obj, cls):
        raise ParseError(f"expected a {what} document", 0)
    return obj


def _emit(data):
    if isinstance(data, str):
        print(data)
    else:
        print(json.dumps(data, indent=2))


def cmd_check_lagrangian(args) -> int:
    try:
        obj = io.load(args.file)
    except (NotLagrangian, DegenerateFrame) as e:
        _emit({"lagrangian": False, "reason": str(e)})
        return EXIT_PROPERTY
    if isinstance(obj, LagrangianRelation):
        ok = obj.is_lagrangian()
    elif isinstance(obj, DiracField):
        ok = True  # construction already verified it
    else:
        raise ParseError("check-lagrangian needs a structure or relation document", 0)
    _emit({"lagrangian": ok})
    return EXIT_OK if ok else EXIT_PROPERTY


def cmd_check_integrable(args) -> int:
    d = _expect(io.load(args.file), DiracField, "Dirac structure")
    probes = io.load_probes(args.probes) if args.probes else ()
    v = is_integrable(d, probes, seed=args.seed)
    out = {"verdict": v.label}
    if not v.integrable:
        out.update(witness=list(v.witness), entry=str(v.value), point=_points([v.point])[0],
                   value=str(v.point_value))
    out["singular_locus_hint"] = str(d.singular_locus_hint)
    _emit(out)
    return EXIT_OK if v.integrable else EXIT_PROPERTY


def cmd_bracket(args) -> int:
    d = _expect(io.load(args.file), DiracField, "Dirac structure")
    f = parse_expr(args.f, d.variables)
    g = parse_expr(args.g, d.variables)
    _emit(str(admissible_bracket(d, f, g)))
    return EXIT_OK


def _report_dict(rep) -> dict:
    recs = []
    for r in rep.records:
        item = {"point": _points([r.point])[0], "status": r.status}
        if r.status == "ok":
            item.update(rank=r.rank, jump=r.jump, fiber=[[str(x) for x in v] for v in r.fiber.space.vectors])
        recs.append(item)
    out = {"generic_rank": rep.generic_rank, "clean_at_probes": rep.clean_at_probes,
           "flagged": _points(rep.flagged), "probes": recs}
    if hasattr(rep, "invariance_checked"):
        out["invariance_checked"] = [_points(pair) for pair in rep.invariance_checked]
    return out


def cmd_pullback(args) -> int:
    d = _expect(io.load(args.file), DiracField, "Dirac structure")
    phi = _expect(io.load(args.map), PolyMap, "map")
    probes = io.load_probes(args.probes) if args.probes else ()
    result, rep = backward_image(d, phi, probes, seed=args.seed, count=args.count)
    _emit({"result": io.to_document(result), "report": _report_dict(rep)})
    return EXIT_OK


def cmd_pushforward(args) -> int:
    d = _expect(io.load(args.file), DiracField, "Dirac structure")
    phi = _expect(io.load(args.map), PolyMap, "map")
    probes = io.load_probes(args.probes)
    pairs = []
    if args.pairs:
        with open(args.pairs) as fh:
            raw = json.load(fh)
        pairs = [tuple(tuple(parse_expr(str(c), ()).constant_value() for c in p) for p in pair)
                 for pair in raw]
    section = _expect(io.load(args.section), PolyMap, "map") if args.section else None
    try:
        result, rep = forward_image(d, phi, pairs, probes, section, seed=args.seed, count=args.count)
    except InvarianceViolated as e:
        _emit({"invariant": False, "pair": _points(e.pair), "reason": str(e)})
        return EXIT_PROPERTY
    _emit({"result": io.to_document(result) if result is not None else None, "report": _report_dict(rep)})
    return EXIT_OK


def cmd_compose(args) -> int:
    r1 = _expect(io.load(args.rel1), LagrangianRelation, "relation")
    r2 = _expect(io.load(args.rel2), LagrangianRelation, "relation")
    _emit(io.dumps(compose(r1, r2)))
    return EXIT_OK


def cmd_classify(args) -> int:
    cs = _expect(io.load(args.file), ConstraintSystem, "constraint system")
    p = io.parse_point(args.point, cs.m)
    c = classify_point(cs, p)
    _emit({"label": c.label, "dim_intersection": c.dim_intersection, "dim_image": c.dim_image})
    return EXIT_OK


def cmd_dirac_bracket(args) -> int:
    cs = _expect(io.load(args.file), ConstraintSystem, "constraint system")
    f = parse_expr(args.f, cs.variables)
    g = parse_expr(args.g, cs.variables)
    _emit(str(dirac_bracket(cs, f, g)))
    return EXIT_OK


def cmd_flow(args) -> int:
    from .flows import FlowConfig, integrate

    cs = _expect(io.load(args.file), ConstraintSystem, "constraint system")
    h = parse_expr(args.hamiltonian, cs.variables)
    try:
        x0 = [float(v) for v in args.x0.split(",")]
    except ValueError:
        x0 = [float(c) for c in io.parse_point(args.x0)]
    cfg = FlowConfig(args.dt, args.t, method=args.method, report_every=args.report_every,
                     backend=args.backend)
    traj = integrate(cs, h, x0, cfg)
    if args.output == "-":
        traj.write_csv(sys.stdout)
    else:
        with open(args.output, "w", newline="") as fh:
            traj.write_csv(fh)
    print(f"final drift |H - H0| = {traj.max_energy_drift():.3e}, "
          f"max constraint norm = {max(traj.constraint_norms):.3e}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diracgeom", description="Exact computations with Dirac structures.")
    p.add_argument("--seed", type=int, default=0, help="seed of the probe-point generator")
    p.add_argument("--count", type=int, default=32, help="number of generated probe points")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-lagrangian", help="is the subspace lagrangian")
    s.add_argument("file")
    s.set_defaults(func=cmd_check_lagrangian)

    s = sub.add_parser("check-integrable", help="Courant-tensor integrability verdict")
    s.add_argument("file")
    s.add_argument("--probes")
    s.set_defaults(func=cmd_check_integrable)

    s = sub.add_parser("bracket", help="bracket of admissible functions")
    s.add_argument("file")
    s.add_argument("-f", required=True)
    s.add_argument("-g", required=True)
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("pullback", help="backward image along a polynomial map")
    s.add_argument("file")
    s.add_argument("--map", required=True)
    s.add_argument("--probes")
    s.set_defaults(func=cmd_pullback)

    s = sub.add_parser("pushforward", help="forward image along a polynomial map")
    s.add_argument("file")
    s.add_argument("--map", required=True)
    s.add_argument("--probes", required=True)
    s.add_argument("--pairs", help="JSON list of point pairs with equal image")
    s.add_argument("--section", help="map document of a polynomial right inverse")
    s.set_defaults(func=cmd_pushforward)

    s = sub.add_parser("compose", help="compose two lagrangian relations")
    s.add_argument("rel1")
    s.add_argument("rel2")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("classify", help="classify a constraint set at a point")
    s.add_argument("file")
    s.add_argument("--point", required=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("dirac-bracket", help="Dirac bracket of two functions")
    s.add_argument("file")
    s.add_argument("-f", required=True)
    s.add_argument("-g", required=True)
    s.set_defaults(func=cmd_dirac_bracket)

    s = sub.add_parser("flow", help="integrate Dirac-bracket dynamics")
    s.add_argument("file")
    s.add_argument("--hamiltonian", required=True)
    s.add_argument("--x0", required=True, help="comma-separated initial state")
    s.add_argument("--t", type=float, required=True, help="duration")
    s.add_argument("--dt", type=float, required=True, help="step size")
    s.add_argument("--method", choices=("rk4", "midpoint"), default="rk4")
    s.add_argument("--report-every", type=int, default=1)
    s.add_argument("--backend", choices=("auto", "numba", "numpy"), default="auto")
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_flow)
    return p


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, (NotAdmissible, NotLagrangian, InvarianceViolated, PropertyFailed)):
        return EXIT_PROPERTY
    if isinstance(exc, ConsistencyError):
        return EXIT_INTERNAL
    if isinstance(exc, (DiracError, ValueError)):
        return EXIT_PRECONDITION
    raise exc


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (DiracError, ValueError, PropertyFailed) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
