"""JSON spec documents: parsing, validation and printing.

A document is ``{"version": "1", "variables": [...], "object": {...}}``
where ``object`` carries a ``kind`` tag. Expressions are strings in the
scalar grammar over ``variables``; a map document lists source variables
under ``variables`` and target names under ``object.target``.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Sequence

import jsonschema

from .constraints import ConstraintSystem
from .errors import DimensionMismatch, ParseError
from .field_dirac import DiracField, PolyMap, Section
from .field_dirac.structures import BIVECTOR, DISTRIBUTION, FRAME, TWOFORM
from .linalg import QQ, FunctionField, Matrix, Subspace
from .linear_dirac import LagrangianRelation
from .scalar import parse_expr, parse_poly

VERSION = "1"

_schema = None


def schema() -> dict:
    global _schema
    if _schema is None:
        text = resources.files("diracgeom").joinpath("schema/spec_document.schema.json").read_text()
        _schema = json.loads(text)
    return _schema


def validate(doc) -> None:
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ParseError(f"schema violation at {where}: {e.message}", 0) from None


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.pos, text) from None
    return from_document(doc)


def load(path: str):
    with open(path) as fh:
        return loads(fh.read())


def _exprs(values, variables):
    return [parse_expr(v, variables) for v in values]


def _matrix(rows, variables, n=None) -> Matrix:
    field = FunctionField(variables) if variables else QQ
    parsed = [_exprs(r, variables) for r in rows]
    if field is QQ:
        parsed = [[x.constant_value() for x in r] for r in parsed]
    ncols = n if n is not None else (len(parsed[0]) if parsed else 0)
    return Matrix(parsed, ncols, field)


def from_document(doc):
    """Parse a validated document into its library object."""
    validate(doc)
    variables = tuple(doc["variables"])
    obj = doc["object"]
    kind = obj["kind"]
    n = len(variables)
    if kind in (BIVECTOR, TWOFORM):
        m = _matrix(obj["matrix"], variables, n)
        if m.shape != (n, n):
            raise DimensionMismatch(f"{kind} matrix must be {n} x {n}")
        return DiracField.bivector_graph(m) if kind == BIVECTOR else DiracField.twoform_graph(m)
    if kind == DISTRIBUTION:
        gens = [_exprs(g, variables) for g in obj["generators"]]
        gauge = _matrix(obj["gauge"], variables, n) if "gauge" in obj else None
        return DiracField.distribution_graph(variables, gens, gauge)
    if kind == FRAME:
        secs = [Section.make(variables, _exprs(s["vf"], variables), _exprs(s["form"], variables))
                for s in obj["sections"]]
        return DiracField.from_frame(variables, secs)
    if kind == "relation":
        total = 2 * (obj["n_left"] + obj["n_right"])
        field = FunctionField(variables) if variables else QQ
        rows = [_exprs(r, variables) for r in obj["basis"]]
        if field is QQ:
            rows = [[x.constant_value() for x in r] for r in rows]
        rel = LagrangianRelation(obj["n_left"], obj["n_right"], Subspace.span(rows, total, field))
        return rel
    if kind == "constraint_system":
        pi = Matrix([_exprs(r, variables) for r in obj["pi"]], n, FunctionField(variables))
        psis = [parse_poly(c, variables) for c in obj["constraints"]]
        probes = [[parse_expr(c, ()).constant_value() for c in p] for p in obj.get("probes", [])]
        return ConstraintSystem(pi, psis, probes)
    if kind == "map":
        comps = [parse_poly(c, variables) for c in obj["components"]]
        return PolyMap(variables, tuple(obj["target"]), tuple(comps))
    raise ParseError(f"unknown kind {kind!r}", 0)  # unreachable after validation


def _s(x) -> str:
    return str(x)


def _rows(m) -> list:
    return [[_s(x) for x in r] for r in m]


def _doc(variables, obj) -> dict:
    return {"version": VERSION, "variables": list(variables), "object": obj}


def to_document(obj) -> dict:
    """Print a library object as a spec document."""
    if isinstance(obj, DiracField):
        if obj.kind == BIVECTOR:
            return _doc(obj.variables, {"kind": BIVECTOR, "matrix": _rows(obj.data["pi"].rows)})
        if obj.kind == TWOFORM:
            return _doc(obj.variables, {"kind": TWOFORM, "matrix": _rows(obj.data["omega"].rows)})
        if obj.kind == DISTRIBUTION:
            return _doc(obj.variables, {"kind": DISTRIBUTION,
                                        "generators": _rows(obj.data["generators"]),
                                        "gauge": _rows(obj.data["gauge"].rows)})
        secs = [{"vf": [_s(x) for x in s.vf], "form": [_s(x) for x in s.form]} for s in obj.frame]
        return _doc(obj.variables, {"kind": FRAME, "sections": secs})
    if isinstance(obj, LagrangianRelation):
        f = obj.space.field
        variables = f.variables if isinstance(f, FunctionField) else ()
        return _doc(variables, {"kind": "relation", "n_left": obj.n_left, "n_right": obj.n_right,
                                "basis": _rows(obj.space.vectors)})
    if isinstance(obj, ConstraintSystem):
        return _doc(obj.variables, {"kind": "constraint_system", "pi": _rows(obj.pi.rows),
                                    "constraints": [str(p) for p in obj.psis],
                                    "probes": _rows(obj.probes)})
    if isinstance(obj, PolyMap):
        return _doc(obj.source_vars, {"kind": "map", "target": list(obj.target_vars),
                                      "components": [str(c) for c in obj.components]})
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int | None = 2) -> str:
    return json.dumps(to_document(obj), indent=indent)


def structurally_equal(a, b) -> bool:
    """Equality used by the print/parse round-trip property."""
    if isinstance(a, DiracField) and isinstance(b, DiracField):
        return a.variables == b.variables and a.kind == b.kind and a.space == b.space
    if isinstance(a, LagrangianRelation) and isinstance(b, LagrangianRelation):
        return (a.n_left, a.n_right) == (b.n_left, b.n_right) and a.space == b.space
    if isinstance(a, ConstraintSystem) and isinstance(b, ConstraintSystem):
        return a.pi == b.pi and a.psis == b.psis and a.probes == b.probes
    if isinstance(a, PolyMap) and isinstance(b, PolyMap):
        return a == b
    return False


def parse_point(text: str, dim: int | None = None) -> tuple:
    """``"1/2, -3, 0"`` -> exact point."""
    pt = tuple(parse_expr(p.strip(), ()).constant_value() for p in text.split(","))
    if dim is not None and len(pt) != dim:
        raise DimensionMismatch(f"point has {len(pt)} coordinates, expected {dim}")
    return pt


def load_probes(path: str) -> list:
    """A JSON list of points (each a list of rational strings or numbers), or ``{"probes": [...]}``."""
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.pos, text) from None
    if isinstance(data, dict):
        data = data.get("probes")
    if not isinstance(data, list) or not all(isinstance(p, list) for p in data):
        raise ParseError("probe file must hold a list of points", 0)
    return [tuple(parse_expr(str(c), ()).constant_value() for c in p) for p in data]


def exprs_to_strings(values: Sequence) -> list:
    return [_s(v) for v in values]


__all__ = [
    "VERSION",
    "schema",
    "validate",
    "load",
    "loads",
    "from_document",
    "to_document",
    "dumps",
    "structurally_equal",
    "parse_point",
    "load_probes",
]
