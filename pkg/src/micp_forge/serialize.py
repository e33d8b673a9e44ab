"""JSON payloads.  Rationals are written as canonical "p/q" strings and
integer data (lattice points, matrices, offsets) as decimal strings."""
from __future__ import annotations

import json
from fractions import Fraction

from .convex import Cone, ConicSet, PolyhedronH, PolyhedronV
from .errors import MicpError
from .formulations import MicpFormulation
from .naturals import NotPeriodicUpTo, PeriodicNaturalSet
from .pwl import PwlFunction
from .rational import as_fraction, format_rational
from .shapes import IndexedFamily


def _q(v) -> str:
    return format_rational(v)


def _i(v) -> str:
    return str(int(v))


def _rq(v) -> Fraction:
    if isinstance(v, (int, str, Fraction)) and not isinstance(v, bool):
        return as_fraction(v)
    raise MicpError(f"expected a rational string, got {v!r}")


def _ri(v) -> int:
    q = _rq(v)
    if q.denominator != 1:
        raise MicpError(f"expected an integer, got {v!r}")
    return int(q)


def conic_set_to_json(S: ConicSet) -> dict:
    return {
        "schema": "conic_set.v1",
        "ambient_dim": S.ambient_dim,
        "A": [[_q(x) for x in r] for r in S.A],
        "b": [_q(x) for x in S.b],
        "cones": [{"kind": c.kind, "dim": c.dim} for c in S.cones],
    }


def conic_set_from_json(d: dict) -> ConicSet:
    cones = tuple(Cone(c["kind"], int(c["dim"])) for c in d["cones"])
    return ConicSet(int(d["ambient_dim"]), tuple(tuple(_rq(x) for x in r) for r in d["A"]),
                    tuple(_rq(x) for x in d["b"]), cones)


def polyhedron_to_json(P: PolyhedronH) -> dict:
    return {
        "schema": "polyhedron_h.v1",
        "dim": P.dim,
        "A": [[_q(x) for x in r] for r in P.A],
        "b": [_q(x) for x in P.b],
        "E": [[_q(x) for x in r] for r in P.E],
        "f": [_q(x) for x in P.f],
    }


def polyhedron_from_json(d: dict) -> PolyhedronH:
    rows = lambda key: [[_rq(x) for x in r] for r in d.get(key, [])]
    return PolyhedronH(int(d["dim"]), rows("A"), [_rq(x) for x in d.get("b", [])],
                       rows("E"), [_rq(x) for x in d.get("f", [])])


def polyhedron_v_to_json(V: PolyhedronV) -> dict:
    return {
        "schema": "polyhedron_v.v1",
        "dim": V.dim,
        "vertices": [[_q(x) for x in v] for v in V.vertices],
        "rays": [[_q(x) for x in r] for r in V.rays],
        "lineality": [[_q(x) for x in r] for r in V.lineality],
    }


def polyhedron_v_from_json(d: dict) -> PolyhedronV:
    pts = lambda key: tuple(tuple(_rq(x) for x in r) for r in d.get(key, []))
    rays = tuple(tuple(_ri(x) for x in r) for r in d.get("rays", []))
    return PolyhedronV(int(d["dim"]), pts("vertices"), rays, pts("lineality"))


def formulation_to_json(F: MicpFormulation) -> dict:
    return {
        "schema": "micp_formulation.v1",
        "n": F.n,
        "p": F.p,
        "d": F.d,
        "set": conic_set_to_json(F.M),
        "provenance": F.provenance,
    }


def formulation_from_json(d: dict) -> MicpFormulation:
    return MicpFormulation(conic_set_from_json(d["set"]), int(d["n"]), int(d["p"]), int(d["d"]), d.get("provenance", ""))


def natural_set_to_json(P) -> dict:
    if isinstance(P, NotPeriodicUpTo):
        return {"schema": "not_periodic_up_to.v1", "max_period": P.max_period, "certified_bound": _i(P.certified_bound)}
    return {
        "schema": "periodic_natural_set.v1",
        "exceptional": [_i(e) for e in P.exceptional],
        "offsets": [_i(o) for o in P.offsets],
        "period": _i(P.period),
        "finite": P.finite,
        "window_certified": P.window_certified,
    }


def natural_set_from_json(d: dict) -> PeriodicNaturalSet:
    return PeriodicNaturalSet(tuple(_ri(e) for e in d["exceptional"]), tuple(_ri(o) for o in d["offsets"]),
                              _ri(d["period"]), bool(d.get("finite", False)), bool(d.get("window_certified", False)))


def pwl_to_json(P: PwlFunction) -> dict:
    return {
        "schema": "pwl_function.v1",
        "prefix_values": [_q(v) for v in P.prefix_values],
        "repeating_slopes": [_q(v) for v in P.repeating_slopes],
    }


def pwl_from_json(d: dict) -> PwlFunction:
    return PwlFunction(tuple(_rq(v) for v in d["prefix_values"]), tuple(_rq(v) for v in d["repeating_slopes"]))


def family_to_json(F: IndexedFamily) -> dict:
    return {
        "schema": "indexed_family.v1",
        "members": [
            {"z": [_i(v) for v in z], "vertices": [[_q(x) for x in p] for p in F.members[z]]}
            for z in F.index_points
        ],
    }


def family_from_json(d: dict) -> IndexedFamily:
    members = {}
    for m in d["members"]:
        z = tuple(_ri(v) for v in m["z"])
        if z in members:
            raise MicpError(f"duplicate index {z}")
        members[z] = [tuple(_rq(x) for x in p) for p in m["vertices"]]
    return IndexedFamily(members)


_WRITERS = [
    (MicpFormulation, formulation_to_json),
    (ConicSet, conic_set_to_json),
    (PolyhedronH, polyhedron_to_json),
    (PolyhedronV, polyhedron_v_to_json),
    (PeriodicNaturalSet, natural_set_to_json),
    (NotPeriodicUpTo, natural_set_to_json),
    (PwlFunction, pwl_to_json),
    (IndexedFamily, family_to_json),
]

_READERS = {
    "micp_formulation.v1": formulation_from_json,
    "conic_set.v1": conic_set_from_json,
    "polyhedron_h.v1": polyhedron_from_json,
    "polyhedron_v.v1": polyhedron_v_from_json,
    "periodic_natural_set.v1": natural_set_from_json,
    "pwl_function.v1": pwl_from_json,
    "indexed_family.v1": family_from_json,
}


def to_json(obj) -> dict:
    for cls, fn in _WRITERS:
        if isinstance(obj, cls):
            return fn(obj)
    raise MicpError(f"no JSON schema for {type(obj).__name__}")


def from_json(d: dict):
    schema = d.get("schema")
    if schema not in _READERS:
        raise MicpError(f"unknown schema {schema!r}")
    return _READERS[schema](d)


def dumps(payload) -> str:
    if not isinstance(payload, (dict, list)):
        payload = to_json(payload)
    return json.dumps(payload, indent=2) + "\n"


def load(path):
    with open(path) as fh:
        return from_json(json.load(fh))
