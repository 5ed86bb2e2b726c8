"""Family-class semantics for curves anchored to the baseline.

An even-curve has both endpoints above the baseline and a positive even
number of proper crossings. Its two end pieces, from an endpoint to the
nearest crossing along the curve, are 1-curves; the one with the left
basepoint is `left`, the other `right`, and `middle` is the remainder. The
baseline interval between the two end basepoints is `interval`.

A family is an LR-family when every intersection between two members is an
intersection of one member's left 1-curve with the other's right 1-curve.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import (
    ContractError,
    FamilyValidationError,
    OddCrossingError,
)
from .geometry import (
    Point,
    Polyline,
    baseline_crossings_along,
    point_on_polyline,
    segments_intersect,
    validate_simple,
)


@dataclass(frozen=True)
class EvenCurve:
    """An even-curve with its derived anatomy.

    The stored curve is canonically oriented so that it starts at the
    endpoint of `left`. 1-curves are stored degenerately with a single
    basepoint, left == right == the curve, and no middle.
    """

    curve: Polyline
    basepoints: tuple        # along the curve; first/last are the end basepoints
    left: Polyline           # from an endpoint to its basepoint
    middle: Optional[Polyline]
    right: Polyline          # from its basepoint to the other endpoint
    interval: tuple          # (x_left, x_right) on the baseline

    @property
    def id(self) -> str:
        return self.curve.id

    @property
    def n_crossings(self) -> int:
        return len(self.basepoints)

    @property
    def is_one_curve(self) -> bool:
        return len(self.basepoints) == 1

    def basepoint_xs(self) -> list:
        return [p.x for p in self.basepoints]

    def polylines(self) -> tuple:
        return (self.curve,)

    def parts(self) -> tuple:
        if self.middle is None:
            return (("L", self.left), ("R", self.right))
        return (("L", self.left), ("M", self.middle), ("R", self.right))


def refine_at_crossings(c: Polyline) -> Polyline:
    """Insert every baseline crossing of c as an explicit vertex."""
    crossings = baseline_crossings_along(c)
    by_edge: dict = {}
    for p, (i, t) in crossings:
        if t != 0:
            by_edge.setdefault(i, []).append((t, p))
    pts = []
    for i, v in enumerate(c.points[:-1]):
        pts.append(v)
        for _, p in sorted(by_edge.get(i, [])):
            pts.append(p)
    pts.append(c.points[-1])
    return Polyline(tuple(pts), c.id)


def decompose_even_curve(c: Polyline) -> EvenCurve:
    """Split an even-curve into left/middle/right parts and its interval.

    The curve is reoriented if necessary so that the first crossing along it
    is the left one, and refined so that every crossing is a vertex; left and
    right are the maximal end pieces containing no crossing in their
    interior, middle is everything between. Concatenating the three parts
    reproduces the stored curve vertex for vertex.
    """
    validate_simple(c)
    crossings = baseline_crossings_along(c)
    if len(crossings) == 0 or c.points[0].y == 0 or c.points[-1].y == 0:
        raise OddCrossingError(f"curve {c.id!r} is not an even-curve")
    if len(crossings) % 2 != 0:
        raise OddCrossingError(
            f"curve {c.id!r} crosses the baseline {len(crossings)} times")

    if crossings[0][0].x > crossings[-1][0].x:
        c = c.reversed()

    refined = refine_at_crossings(c)
    pts = refined.points
    cross_idx = [i for i in range(1, len(pts) - 1) if pts[i].y == 0]
    i1, i2 = cross_idx[0], cross_idx[-1]
    left = Polyline(pts[:i1 + 1], c.id)
    middle = Polyline(pts[i1:i2 + 1], c.id)
    right = Polyline(pts[i2:], c.id)
    return EvenCurve(
        curve=refined,
        basepoints=tuple(pts[i] for i in cross_idx),
        left=left,
        middle=middle,
        right=right,
        interval=(pts[i1].x, pts[i2].x),
    )


def make_one_curve(c: Polyline) -> EvenCurve:
    """Wrap a 1-curve as a degenerate EvenCurve (single basepoint, no middle)."""
    validate_simple(c)
    pts = c.points
    on_start = pts[0].y == 0
    on_end = pts[-1].y == 0
    if on_start == on_end:
        raise ContractError(f"curve {c.id!r} must have exactly one endpoint on the baseline")
    for p in (pts[1:] if on_start else pts[:-1]):
        if p.y <= 0:
            raise ContractError(f"1-curve {c.id!r} must stay strictly above the baseline")
    oriented = c.reversed() if on_start else c  # endpoint first, basepoint last
    bp = oriented.points[-1]
    return EvenCurve(
        curve=oriented,
        basepoints=(bp,),
        left=oriented,
        middle=None,
        right=oriented,
        interval=(bp.x, bp.x),
    )


class FamilyKind(enum.Enum):
    ONE_CURVE = "one_curve"
    EVEN = "even"
    TWO_T = "two_t"
    LR = "lr"
    LR2 = "lr2"


@dataclass(frozen=True)
class CurveFamily:
    members: tuple
    kind: FamilyKind
    t: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        _validate_kind(self)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def ids(self) -> list:
        return [m.id for m in self.members]

    def by_id(self, id: str) -> EvenCurve:
        for m in self.members:
            if m.id == id:
                return m
        raise KeyError(id)


def _validate_kind(fam: CurveFamily) -> None:
    seen = {}
    for m in fam.members:
        for p in m.basepoints:
            if p.x in seen:
                raise FamilyValidationError(
                    f"members {seen[p.x]!r} and {m.id!r} share basepoint x={p.x}")
            seen[p.x] = m.id
    ids = [m.id for m in fam.members]
    if len(set(ids)) != len(ids):
        raise FamilyValidationError("member ids must be unique")

    kind, t = fam.kind, fam.t
    for m in fam.members:
        n = m.n_crossings
        if kind is FamilyKind.ONE_CURVE and n != 1:
            raise FamilyValidationError(f"{m.id!r} has {n} basepoints in a 1-curve family")
        if kind in (FamilyKind.EVEN, FamilyKind.LR) and (n < 2 or n % 2):
            raise FamilyValidationError(f"{m.id!r} has {n} basepoints in an even-curve family")
        if kind is FamilyKind.TWO_T:
            if t is None or t < 1:
                raise FamilyValidationError("TWO_T family needs t >= 1")
            if n != 2 * t:
                raise FamilyValidationError(
                    f"{m.id!r} has {n} basepoints, expected {2 * t}")
        if kind is FamilyKind.LR2 and n != 2:
            raise FamilyValidationError(f"{m.id!r} has {n} basepoints in a 2-curve family")


@dataclass(frozen=True)
class LRViolation:
    id1: str
    id2: str
    point: Point
    part1: str
    part2: str

    def __str__(self):
        return (f"{self.id1}\t{self.id2}\t({self.point.x},{self.point.y})"
                f"\t{self.part1}x{self.part2}")


@dataclass(frozen=True)
class LRResult:
    ok: bool
    checked_pairs: int
    violations: tuple

    def report_lines(self) -> list:
        return [str(v) for v in self.violations]


def _parts_at(member, p: Point) -> list:
    return [name for name, poly in member.parts() if point_on_polyline(p, poly)]


def member_intersections(m1, m2) -> list:
    """All intersection points between two members (full point sets)."""
    pts = set()
    for a in m1.polylines():
        for b in m2.polylines():
            pts.update(segments_intersect(a, b))
    return sorted(pts, key=lambda p: (p.x, p.y))


def validate_lr(members) -> LRResult:
    """Check that every pairwise intersection is a left-right incidence.

    Accepts any sequence of members exposing parts()/polylines() (even-curves
    or double-curves). Returns a certificate (ok=True) or the full list of
    violating (pair, point, parts) witnesses.
    """
    if isinstance(members, CurveFamily):
        members = members.members
    violations = []
    checked = 0
    ms = list(members)
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            m1, m2 = ms[i], ms[j]
            checked += 1
            for p in member_intersections(m1, m2):
                on1 = _parts_at(m1, p)
                on2 = _parts_at(m2, p)
                if ("L" in on1 and "R" in on2) or ("L" in on2 and "R" in on1):
                    continue
                violations.append(LRViolation(
                    m1.id, m2.id, p,
                    on1[0] if on1 else "?", on2[0] if on2 else "?"))
    return LRResult(ok=not violations, checked_pairs=checked,
                    violations=tuple(violations))


def as_lr_family(members: Iterable[EvenCurve], two_curves: bool = False) -> CurveFamily:
    """Build a certified LR family, raising on any violation."""
    members = tuple(members)
    res = validate_lr(members)
    if not res.ok:
        raise FamilyValidationError(
            "not an LR family: " + "; ".join(res.report_lines()[:3]))
    kind = FamilyKind.LR2 if two_curves else FamilyKind.LR
    return CurveFamily(members, kind)


def subfamily_between(fam: CurveFamily, x, y) -> CurveFamily:
    """Members strictly between two 1-curves in the baseline order.

    Orientation-insensitive: the roles of x and y swap automatically when
    y precedes x.
    """
    xs, ys = x.basepoint_xs(), y.basepoint_xs()
    family_xs = {v for m in fam.members for v in m.basepoint_xs()}
    for probe, vals in ((x, xs), (y, ys)):
        for v in vals:
            if v in family_xs:
                raise ContractError(
                    f"bound {probe.id!r} shares basepoint x={v} with the family")
    if max(xs) < min(ys):
        lo, hi = max(xs), min(ys)
    elif max(ys) < min(xs):
        lo, hi = max(ys), min(xs)
    else:
        raise ContractError("bounds have interleaved basepoints")
    picked = tuple(m for m in fam.members
                   if lo < min(m.basepoint_xs()) and max(m.basepoint_xs()) < hi)
    return CurveFamily(picked, fam.kind, fam.t)


def subfamily_on_interval(fam: CurveFamily, interval) -> CurveFamily:
    """Members with every basepoint inside the closed interval."""
    lo, hi = interval
    picked = tuple(m for m in fam.members
                   if all(lo <= v <= hi for v in m.basepoint_xs()))
    return CurveFamily(picked, fam.kind, fam.t)


def xi_of_family(fam: CurveFamily, budget=None) -> int:
    """Smallest xi such that fam is a xi-family.

    For each member, the exact chromatic number of the subfamily of the
    remaining members intersecting it; the result is the maximum over
    members. 0 for pairwise disjoint families.
    """
    from .graphcore import build_graph, chromatic_number, induced_subgraph

    g = build_graph(fam.members)
    best = 0
    for v in range(g.n):
        nbrs = [u for u in range(g.n) if g.has_edge(u, v)]
        if not nbrs:
            continue
        sub, _ = induced_subgraph(g, nbrs)
        chi, _ = chromatic_number(sub, budget=budget)
        best = max(best, chi)
    return best


@dataclass(frozen=True)
class ChainCandidate:
    pairs: tuple  # ((a_1, b_1), ..., (a_n, b_n)) of EvenCurves


@dataclass(frozen=True)
class ChainViolation:
    clause: int   # 1 = crossing, 2 = nesting, 3 = back-intersection
    index: int    # 1-based pair index
    detail: str


@dataclass(frozen=True)
class ChainResult:
    ok: bool
    violation: Optional[ChainViolation]
    repeats: tuple  # (member id, earlier pair index, later pair index)


def is_chain(fam: CurveFamily, cand: ChainCandidate) -> ChainResult:
    """Validate a chain candidate against its three defining clauses.

    Clause 1: right(a_i) and left(b_i) intersect, for every i.
    Clause 2: for i >= 2, the basepoints of right(a_i) and left(b_i) lie
    strictly between those of right(a_(i-1)) and left(b_(i-1)).
    Clause 3: for i >= 2, left(a_i) intersects every earlier right(a_j), or
    right(b_i) intersects every earlier left(b_j).

    Reports the first violated clause. Members may repeat across pairs;
    repeats are listed in the result, not rejected.
    """
    member_ids = set(fam.ids())
    for a, b in cand.pairs:
        if a.id not in member_ids or b.id not in member_ids:
            raise ContractError(f"pair ({a.id!r}, {b.id!r}) not drawn from the family")

    seen: dict = {}
    repeats = []
    for i, (a, b) in enumerate(cand.pairs, start=1):
        for m in (a, b):
            if m.id in seen:
                repeats.append((m.id, seen[m.id], i))
            else:
                seen[m.id] = i
    repeats = tuple(repeats)

    pairs = cand.pairs
    for i in range(1, len(pairs) + 1):
        a, b = pairs[i - 1]
        if not segments_intersect(a.right, b.left):
            return ChainResult(False, ChainViolation(
                1, i, f"right({a.id}) misses left({b.id})"), repeats)
        if i >= 2:
            pa, pb = pairs[i - 2]
            lo, hi = sorted((_bp_x(pa.right), _bp_x(pb.left)))
            for one_curve, owner in ((a.right, f"right({a.id})"),
                                     (b.left, f"left({b.id})")):
                v = _bp_x(one_curve)
                if not (lo < v < hi):
                    return ChainResult(False, ChainViolation(
                        2, i, f"basepoint of {owner} at x={v} not inside ({lo},{hi})"),
                        repeats)
            ok_a = all(bool(segments_intersect(a.left, pairs[j][0].right))
                       for j in range(i - 1))
            ok_b = all(bool(segments_intersect(b.right, pairs[j][1].left))
                       for j in range(i - 1))
            if not (ok_a or ok_b):
                return ChainResult(False, ChainViolation(
                    3, i,
                    f"neither left({a.id}) nor right({b.id}) reaches all predecessors"),
                    repeats)
    return ChainResult(True, None, repeats)


def _bp_x(one_curve: Polyline):
    pts = one_curve.points
    return pts[-1].x if pts[-1].y == 0 else pts[0].x
