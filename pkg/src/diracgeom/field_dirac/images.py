"""Backward and forward images along polynomial maps, with rank diagnostics.

Smoothness of an image is only semi-decided: the generic rank of the
relevant intersection is computed over the rational-function field and
compared with the exact rank at probe points. A jump at a probe is a
definite failure of the clean-intersection condition; no jumps means
"clean at probes" and nothing more.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from ..errors import (
    ConsistencyError,
    DenominatorVanishes,
    DimensionMismatch,
    InvarianceViolated,
    NotASubmersionAtProbe,
    SingularPoint,
)
from ..linalg import FunctionField, Matrix, Subspace, intersect, kernel, rank
from ..linear_dirac import (
    LinearDirac,
    as_bivector,
    as_twoform,
    backward,
    characteristic_space,
    forward,
    null_space,
)
from ..scalar import Poly, ScalarExpr, as_point
from .calculus import Section
from .maps import PolyMap
from .probes import DEFAULT_COUNT, merge_probes, probe_points
from .structures import BIVECTOR, FRAME, TWOFORM, DiracField, _hint, pointwise


@dataclass(frozen=True)
class ProbeRecord:
    point: tuple
    status: str  # "ok" or "singular"
    rank: int | None = None
    jump: bool = False
    fiber: LinearDirac | None = None


@dataclass
class RankReport:
    """Generic rank of the clean-intersection space and its values at probes."""

    generic_rank: int
    records: list = dc_field(default_factory=list)

    @property
    def flagged(self) -> list:
        return [r.point for r in self.records if r.jump]

    @property
    def clean_at_probes(self) -> bool:
        return not self.flagged

    def record_at(self, p):
        p = as_point(p)
        for r in self.records:
            if r.point == p:
                return r
        raise KeyError(p)


@dataclass
class ForwardReport(RankReport):
    invariance_checked: list = dc_field(default_factory=list)


def _compose_expr(f: ScalarExpr, images: Sequence[Poly]) -> ScalarExpr:
    try:
        return f.compose(images)
    except DenominatorVanishes as e:
        raise SingularPoint(f"the map lands where {f} is undefined") from e


def _pull_structure(d: DiracField, images: Sequence[Poly], variables, log):
    """Frame of ``d`` composed with a polynomial map, as a generic LinearDirac."""
    n = d.dim
    field = FunctionField(variables)
    vecs = [tuple(_compose_expr(x, images) for x in s.as_vector()) for s in d.frame]
    hint = d.singular_locus_hint.compose(images)
    if hint.is_zero():
        raise SingularPoint("the map lands inside the singular locus")
    space = Subspace.span(vecs, 2 * n, field, log)
    if space.dim != n:
        raise SingularPoint("pulled-back frame loses rank generically")
    entries = [x for v in vecs for x in v]
    return LinearDirac(n, space, check=False), _hint(entries, (), variables).lcm(hint).monic()


def _field_from_linear(l: LinearDirac, variables, log, extra_hint: Poly) -> DiracField:
    """Wrap a generic fiber as a DiracField, choosing the most specific kind."""
    variables = tuple(variables)
    n = l.n
    field = FunctionField(variables)
    if null_space(l, log).dim == 0:
        d = DiracField.bivector_graph(as_bivector(l, log) if n else Matrix._raw((), 0, field))
    elif characteristic_space(l, log).dim == 0:
        d = DiracField.twoform_graph(as_twoform(l, log))
    else:
        frame = [Section(tuple(v[:n]), tuple(v[n:])) for v in l.space.vectors]
        d = DiracField._build(variables, FRAME, {}, frame, log)
    hint = _hint([], log, variables).lcm(extra_hint).lcm(d.singular_locus_hint).monic()
    return DiracField(variables, d.kind, d.data, d.frame, hint, d.space)


def _check_arity(d: DiracField, phi: PolyMap, side: str):
    n = d.dim
    got = phi.target_dim if side == "target" else phi.source_dim
    if got != n:
        raise DimensionMismatch(f"map {side} has dimension {got}, structure lives on R^{n}")


def backward_image(d_n: DiracField, phi: PolyMap, probes: Sequence = (), seed: int = 0,
                   count: int = DEFAULT_COUNT):
    """``B_phi(L_N)`` and the clean-intersection report."""
    _check_arity(d_n, phi, "target")
    src = phi.source_vars
    log = []
    l_pull, pulled_hint = _pull_structure(d_n, phi.components, src, log)
    jac = phi.jacobian()
    result = _field_from_linear(backward(l_pull, jac, log), src, log, pulled_hint)

    ker_jt = kernel(jac.transpose())
    generic = intersect(characteristic_space(l_pull), ker_jt).dim
    report = RankReport(generic)
    generated = probe_points(phi.source_dim, count, seed, [pulled_hint])
    for p in merge_probes(probes, generated):
        q = phi(p)
        try:
            ln = pointwise(d_n, q)
        except SingularPoint:
            report.records.append(ProbeRecord(p, "singular"))
            continue
        jp = phi.jacobian_at(p)
        fiber = backward(ln, jp)
        r = intersect(characteristic_space(ln), kernel(jp.transpose())).dim
        if result.singular_locus_hint.evaluate(p) != 0 and pointwise(result, p) != fiber:
            raise ConsistencyError(f"generic backward image disagrees with the fiberwise one at {p}")
        report.records.append(ProbeRecord(p, "ok", r, r != generic, fiber))
    return result, report


def _submersion_at(phi: PolyMap, p) -> bool:
    return rank(phi.jacobian_at(p)) == phi.target_dim


def forward_image(d_m: DiracField, phi: PolyMap, fibre_probe_pairs: Sequence = (), probes: Sequence = (),
                  section: PolyMap | None = None, seed: int = 0, count: int = DEFAULT_COUNT):
    """``F_phi(L_M)`` along a section of ``phi`` (if given) plus the report.

    Without a section no symbolic frame is produced and the first return
    value is ``None``; fibers are still reported at every probe.
    """
    _check_arity(d_m, phi, "source")
    pairs = [(as_point(a), as_point(b)) for a, b in fibre_probe_pairs]
    user = list(probes) + [x for pair in pairs for x in pair]
    for p in user:
        if not _submersion_at(phi, p):
            raise NotASubmersionAtProbe(f"dphi has rank < {phi.target_dim} at {tuple(map(str, as_point(p)))}")

    ker_j = kernel(phi.jacobian())
    generic = intersect(null_space(d_m.linear()), ker_j).dim
    report = ForwardReport(generic)
    generated = probe_points(d_m.dim, count, seed, [d_m.singular_locus_hint],
                             accept=lambda p: _submersion_at(phi, p))
    fibers = {}
    for p in merge_probes(user, generated):
        try:
            lm = pointwise(d_m, p)
        except SingularPoint:
            report.records.append(ProbeRecord(p, "singular"))
            continue
        jp = phi.jacobian_at(p)
        fiber = forward(lm, jp)
        fibers[p] = fiber
        r = intersect(null_space(lm), kernel(jp)).dim
        report.records.append(ProbeRecord(p, "ok", r, r != generic, fiber))

    for a, b in pairs:
        if phi(a) != phi(b):
            raise ValueError(f"probe pair {a}, {b} has different images")
        if a in fibers and b in fibers:
            if fibers[a] != fibers[b]:
                raise InvarianceViolated(f"forward fibers differ over {tuple(map(str, phi(a)))}", (a, b))
            report.invariance_checked.append((a, b))

    if section is None:
        return None, report
    if section.source_dim != phi.target_dim or section.target_dim != phi.source_dim:
        raise DimensionMismatch("section has the wrong shape")
    if not _is_right_inverse(phi, section):
        raise ValueError("supplied section is not a right inverse of phi")
    tgt = section.source_vars
    log = []
    l_pull, pulled_hint = _pull_structure(d_m, section.components, tgt, log)
    jac = phi.jacobian().map(lambda e: _compose_expr(e, section.components), FunctionField(tgt))
    result = _field_from_linear(forward(l_pull, jac, log), tgt, log, pulled_hint)
    return result, report


def _is_right_inverse(phi: PolyMap, s: PolyMap) -> bool:
    comp = phi.after(s)
    return all(c == Poly.var(s.source_vars, v) for c, v in zip(comp.components, s.source_vars))


@dataclass(frozen=True)
class DiracMapResult:
    holds: bool
    mode: str
    witnesses: tuple = ()


def _map_probes(d_m, d_n, phi, probes, seed, count):
    def ok(p):
        return d_n.singular_locus_hint.evaluate(phi(p)) != 0
    gen = probe_points(d_m.dim, count, seed, [d_m.singular_locus_hint], accept=ok)
    return merge_probes(probes, gen)


def _check_mode(d_m, d_n, phi, mode, probes, seed, count) -> DiracMapResult:
    witnesses = []
    if mode == "b":
        try:
            img, _ = backward_image(d_n, phi, count=0)
            if phi.source_vars == d_m.variables and img.space != d_m.space:
                witnesses.append("generic")
        except SingularPoint:
            witnesses.append("generic")
    for p in _map_probes(d_m, d_n, phi, probes, seed, count):
        try:
            lm = pointwise(d_m, p)
            ln = pointwise(d_n, phi(p))
        except SingularPoint:
            continue
        jp = phi.jacobian_at(p)
        if mode == "b":
            good = backward(ln, jp) == lm
        else:
            good = forward(lm, jp) == ln
        if not good:
            witnesses.append(p)
    return DiracMapResult(not witnesses, mode, tuple(witnesses))


def check_dirac_map(d_m: DiracField, d_n: DiracField, phi: PolyMap, mode: str, probes: Sequence = (),
                    inverse: PolyMap | None = None, seed: int = 0, count: int = DEFAULT_COUNT
                    ) -> DiracMapResult:
    """Decide whether ``phi`` is a backward (``b``) or forward (``f``) Dirac map."""
    if mode not in ("b", "f"):
        raise ValueError("mode must be 'b' or 'f'")
    _check_arity(d_m, phi, "source")
    _check_arity(d_n, phi, "target")
    result = _check_mode(d_m, d_n, phi, mode, probes, seed, count)
    if inverse is not None:
        if not (_is_right_inverse(phi, inverse) and _is_right_inverse(inverse, phi)):
            raise ValueError("supplied inverse does not invert phi")
        other = _check_mode(d_m, d_n, phi, "f" if mode == "b" else "b", probes, seed, count)
        if other.holds != result.holds:
            raise ConsistencyError("b-Dirac and f-Dirac verdicts differ for a diffeomorphism")
    return result


__all__ = [
    "ProbeRecord",
    "RankReport",
    "ForwardReport",
    "DiracMapResult",
    "backward_image",
    "forward_image",
    "check_dirac_map",
]
