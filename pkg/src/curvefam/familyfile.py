"""Family file format and loaders.

A family file is JSON with a header and a curve list:

    {"scale": 1, "kind": "lr2",
     "curves": [{"id": "a", "points": [[x, y], ...]}, ...]}

Coordinates must be exact integers (units of 1/scale); loaders reject
anything else. Double-curve families (kind "double") store each member as
{"id": ..., "parts": [[L points], [R points]]} and may carry a "probes"
section (list of [x_lo, x_hi] strips) plus a "burling" section holding the
recursion tree needed by the coloring audit. Writers emit sorted keys and
fixed separators, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from typing import Union

from .burling import BurlingInstance, BurlingNode, DoubleCurve, Gadget, Probe
from .errors import FileFormatError
from .families import (
    CurveFamily,
    FamilyKind,
    decompose_even_curve,
    make_one_curve,
)
from .geometry import MAX_COORD_MAGNITUDE, Point, Polyline

_KIND_STRINGS = {
    FamilyKind.ONE_CURVE: "one_curve",
    FamilyKind.EVEN: "even",
    FamilyKind.TWO_T: "two_t",
    FamilyKind.LR: "lr",
    FamilyKind.LR2: "lr2",
}
_KINDS_BY_STRING = {v: k for k, v in _KIND_STRINGS.items()}


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _check_int(v, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise FileFormatError(f"{what} must be an exact integer, got {v!r}")
    if abs(v) > MAX_COORD_MAGNITUDE:
        raise FileFormatError(f"{what} exceeds the 2**62 magnitude contract")
    return v


def _points_from_json(rows, what: str):
    pts = []
    for row in rows:
        if not isinstance(row, (list, tuple)) or len(row) != 2:
            raise FileFormatError(f"{what}: point must be [x, y], got {row!r}")
        pts.append(Point(_check_int(row[0], what), _check_int(row[1], what)))
    return tuple(pts)


def _points_to_json(poly: Polyline, factor: int = 1):
    out = []
    for p in poly.points:
        x, y = p.x * factor, p.y * factor
        for v in (x, y):
            if getattr(v, "denominator", 1) != 1:
                raise FileFormatError(
                    f"curve {poly.id!r} has non-integer coordinate {v} "
                    f"after rescaling by {factor}")
            if abs(v) > MAX_COORD_MAGNITUDE:
                raise FileFormatError(
                    f"curve {poly.id!r} exceeds the 2**62 magnitude contract "
                    f"at scale {factor}")
        out.append([int(x), int(y)])
    return out


def _integerizing_factor(polylines) -> int:
    """Smallest multiplier putting every coordinate on the integer grid.

    Derived curves (retraction cuts, mid-edge crossings) carry exact
    rational vertices; files store integers in units of 1/scale, so the
    writer rescales and records the factor in the scale header.
    """
    import math

    factor = 1
    for poly in polylines:
        for p in poly.points:
            for v in (p.x, p.y):
                den = getattr(v, "denominator", 1)
                factor = factor * den // math.gcd(factor, den)
    return factor


def family_to_jsonable(fam: CurveFamily, scale: int = 1) -> dict:
    factor = _integerizing_factor(m.curve for m in fam.members)
    doc = {
        "scale": scale * factor,
        "kind": _KIND_STRINGS[fam.kind],
        "curves": [{"id": m.id, "points": _points_to_json(m.curve, factor)}
                   for m in fam.members],
    }
    if fam.kind is FamilyKind.TWO_T:
        doc["t"] = fam.t
    return doc


def family_from_jsonable(doc: dict) -> CurveFamily:
    kind_s = doc.get("kind")
    if kind_s not in _KINDS_BY_STRING:
        raise FileFormatError(f"unknown family kind {kind_s!r}")
    kind = _KINDS_BY_STRING[kind_s]
    t = doc.get("t")
    members = []
    for row in doc.get("curves", []):
        if "points" not in row:
            raise FileFormatError(f"curve {row.get('id')!r} misses points")
        poly = Polyline(_points_from_json(row["points"], f"curve {row.get('id')!r}"),
                        str(row.get("id", "")))
        if kind is FamilyKind.ONE_CURVE:
            members.append(make_one_curve(poly))
        else:
            members.append(decompose_even_curve(poly))
    return CurveFamily(tuple(members), kind, t)


def _node_to_jsonable(node: BurlingNode) -> dict:
    if node.level == 1:
        return {"level": 1, "member": node.member_id,
                "probe": list(node.probe.as_pair())}
    return {
        "level": node.level,
        "outer": _node_to_jsonable(node.outer),
        "inner": [_node_to_jsonable(ch) for ch in node.inner],
        "gadgets": [[{"x": g.x_id, "a": list(g.a.as_pair()), "b": list(g.b.as_pair())}
                     for g in row] for row in node.gadgets],
    }


def _node_from_jsonable(doc: dict) -> BurlingNode:
    level = doc.get("level")
    if level == 1:
        lo, hi = doc["probe"]
        return BurlingNode(level=1, member_id=doc["member"],
                           probe=Probe(_check_int(lo, "probe"), _check_int(hi, "probe")))
    gadget_rows = []
    for row in doc.get("gadgets", []):
        gadget_rows.append(tuple(
            Gadget(g["x"],
                   Probe(_check_int(g["a"][0], "probe"), _check_int(g["a"][1], "probe")),
                   Probe(_check_int(g["b"][0], "probe"), _check_int(g["b"][1], "probe")))
            for g in row))
    return BurlingNode(
        level=level,
        outer=_node_from_jsonable(doc["outer"]),
        inner=tuple(_node_from_jsonable(ch) for ch in doc.get("inner", [])),
        gadgets=tuple(gadget_rows),
    )


def burling_to_jsonable(inst: BurlingInstance) -> dict:
    return {
        "scale": inst.scale,
        "kind": "double",
        "curves": [{"id": m.id,
                    "parts": [_points_to_json(m.left), _points_to_json(m.right)]}
                   for m in inst.members],
        "probes": [list(p.as_pair()) for p in inst.probes],
        "burling": {"k": inst.k, "tree": _node_to_jsonable(inst.tree)},
    }


def burling_from_jsonable(doc: dict) -> BurlingInstance:
    members = []
    for row in doc.get("curves", []):
        parts = row.get("parts")
        if not isinstance(parts, list) or len(parts) != 2:
            raise FileFormatError(
                f"double-curve {row.get('id')!r} needs parts [L, R]")
        mid = str(row.get("id", ""))
        left = Polyline(_points_from_json(parts[0], f"{mid}.L"), f"{mid}.L")
        right = Polyline(_points_from_json(parts[1], f"{mid}.R"), f"{mid}.R")
        members.append(DoubleCurve(mid, left, right))
    probes = tuple(Probe(_check_int(lo, "probe"), _check_int(hi, "probe"))
                   for lo, hi in doc.get("probes", []))
    burl = doc.get("burling")
    if not burl or "tree" not in burl or "k" not in burl:
        raise FileFormatError("double-curve family needs a burling section")
    tree = _node_from_jsonable(burl["tree"])
    inst = BurlingInstance(int(burl["k"]), tuple(members), probes,
                           _check_int(doc.get("scale", 1), "scale"), tree)
    if tree.probes != probes:
        raise FileFormatError("probes section disagrees with the recursion tree")
    tree_ids = set(tree.member_ids())
    if tree_ids != {m.id for m in members}:
        raise FileFormatError("recursion tree members disagree with the curve list")
    return inst


def save(obj: Union[CurveFamily, BurlingInstance], path: str, scale: int = 1) -> None:
    if isinstance(obj, BurlingInstance):
        doc = burling_to_jsonable(obj)
    else:
        doc = family_to_jsonable(obj, scale)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(doc))


def load(path: str) -> Union[CurveFamily, BurlingInstance]:
    """Load a family file; kind "double" yields a BurlingInstance."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: top level must be an object")
    if _check_int(doc.get("scale", 1), "scale") < 1:
        raise FileFormatError(f"{path}: scale must be a positive integer")
    if doc.get("kind") == "double":
        return burling_from_jsonable(doc)
    return family_from_jsonable(doc)
