"""JSON encoding of seeds, polygons, fans, surfaces, classes, collections and traces.

Matrices are row-major lists of lists. A seed's "basis" is its basis matrix,
so the basis vectors are its columns.
"""
from __future__ import annotations

import json
from typing import Any, Sequence

from .delpezzo import KClass, Surface
from .errors import InvalidInput
from .helix import Collection, Reorder, Rotate, Shift, Step, Tensor, TiltMinus, TiltPlus
from .lattice.polygons import Polygon
from .lattice.seeds import Ambient, Seed
from .toric import Fan

__all__ = [
    "seed_to_json", "seed_from_json", "polygon_to_json", "polygon_from_json", "fan_to_json",
    "fan_from_json", "surface_to_json", "surface_from_json", "kclass_to_json", "kclass_from_json",
    "collection_to_json", "collection_from_json", "step_to_json", "step_from_json",
    "trace_to_json", "trace_from_json", "dumps", "loads",
]


def _ints(x: Any, what: str) -> list:
    if isinstance(x, bool) or not isinstance(x, (int, list)):
        raise InvalidInput(f"{what}: expected integers, got {x!r}")
    if isinstance(x, int):
        return x
    return [_ints(y, what) for y in x]


def _field(d: Any, key: str, what: str) -> Any:
    if not isinstance(d, dict) or key not in d:
        raise InvalidInput(f"{what}: missing field {key!r}")
    return d[key]


def _matrix(m: Sequence[Sequence[int]]) -> list[list[int]]:
    return [list(row) for row in m]


def seed_to_json(s: Seed) -> dict:
    return {"rank": s.ambient.rank, "psi": _matrix(s.ambient.psi_matrix), "basis": _matrix(s.basis_matrix)}


def seed_from_json(d: Any) -> Seed:
    n = _ints(_field(d, "rank", "seed"), "seed rank")
    psi = _ints(_field(d, "psi", "seed"), "seed psi")
    basis = _ints(_field(d, "basis", "seed"), "seed basis")
    if not isinstance(n, int) or len(psi) != 2 or any(len(row) != n for row in psi):
        raise InvalidInput("seed: psi must be a 2 x rank matrix")
    if len(basis) != n or any(len(row) != n for row in basis):
        raise InvalidInput("seed: basis must be a rank x rank matrix")
    return Seed.from_basis_matrix(Ambient(tuple(map(tuple, psi))), basis)


def polygon_to_json(p: Polygon) -> dict:
    return {"vertices": _matrix(p.vertices)}


def polygon_from_json(d: Any) -> Polygon:
    vs = _ints(_field(d, "vertices", "polygon"), "polygon vertices")
    if any(len(v) != 2 for v in vs):
        raise InvalidInput("polygon: vertices must be pairs")
    return Polygon(tuple(map(tuple, vs)))


def fan_to_json(f: Fan) -> dict:
    return {"rays": _matrix(f.rays)}


def fan_from_json(d: Any) -> Fan:
    rays = _ints(_field(d, "rays", "fan"), "fan rays")
    if any(len(r) != 2 for r in rays):
        raise InvalidInput("fan: rays must be pairs")
    return Fan(tuple(map(tuple, rays)))


def surface_to_json(S: Surface) -> dict:
    if S.kind == "P1xP1":
        return {"kind": "P1xP1"}
    return {"kind": "dP", "m": S.m}


def surface_from_json(d: Any) -> Surface:
    kind = _field(d, "kind", "surface")
    if kind == "P1xP1":
        return Surface.p1xp1()
    if kind == "dP":
        m = _ints(_field(d, "m", "surface"), "surface m")
        if not isinstance(m, int):
            raise InvalidInput("surface: m must be an integer")
        return Surface.dp(m)
    raise InvalidInput(f"surface: unknown kind {kind!r}")


def kclass_to_json(e: KClass) -> dict:
    return {"r": e.r, "c1": list(e.c1), "m": e.m}


def kclass_from_json(d: Any, S: Surface | None = None) -> KClass:
    r = _ints(_field(d, "r", "class"), "class r")
    c1 = _ints(_field(d, "c1", "class"), "class c1")
    m = _ints(_field(d, "m", "class"), "class m")
    if not isinstance(r, int) or not isinstance(m, int) or not isinstance(c1, list):
        raise InvalidInput("class: r and m must be integers, c1 a list")
    if S is not None and len(c1) != S.rho:
        raise InvalidInput(f"class: c1 has length {len(c1)}, {S.name} needs {S.rho}")
    return KClass(r, tuple(c1), m)


def collection_to_json(c: Collection) -> dict:
    return {"surface": surface_to_json(c.surface), "objects": [kclass_to_json(e) for e in c.objects]}


def collection_from_json(d: Any) -> Collection:
    S = surface_from_json(_field(d, "surface", "collection"))
    objs = _field(d, "objects", "collection")
    if not isinstance(objs, list):
        raise InvalidInput("collection: objects must be a list")
    return Collection(S, tuple(kclass_from_json(o, S) for o in objs))


_OPS = {
    "tilt+": (TiltPlus, ("j",)),
    "tilt-": (TiltMinus, ("j",)),
    "rotate": (Rotate, ("k",)),
    "reorder": (Reorder, ("i", "j")),
    "tensor": (Tensor, ("c1",)),
    "shift": (Shift, ("k",)),
}
_NAMES = {cls: (name, fields) for name, (cls, fields) in _OPS.items()}


def step_to_json(step: Step) -> dict:
    name, fields = _NAMES[type(step)]
    out: dict[str, Any] = {"op": name}
    for f in fields:
        v = getattr(step, f)
        out[f] = list(v) if isinstance(v, tuple) else v
    if step.stage:
        out["stage"] = step.stage
    return out


def step_from_json(d: Any) -> Step:
    op = _field(d, "op", "trace step")
    if op not in _OPS:
        raise InvalidInput(f"trace step: unknown op {op!r}")
    cls, fields = _OPS[op]
    args = {f: _ints(_field(d, f, f"trace step {op}"), f"{op}.{f}") for f in fields}
    if "c1" in args:
        if not isinstance(args["c1"], list):
            raise InvalidInput("tensor: c1 must be a list")
        args["c1"] = tuple(args["c1"])
    stage = d.get("stage", "")
    if not isinstance(stage, str):
        raise InvalidInput("trace step: stage must be a string")
    return cls(**args, stage=stage)


def trace_to_json(trace: Sequence[Step]) -> list:
    return [step_to_json(s) for s in trace]


def trace_from_json(d: Any) -> list[Step]:
    if not isinstance(d, list):
        raise InvalidInput("trace: expected a list of steps")
    return [step_from_json(s) for s in d]


def dumps(doc: Any) -> str:
    return json.dumps(doc, ensure_ascii=False)


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"malformed JSON: {exc}") from exc
