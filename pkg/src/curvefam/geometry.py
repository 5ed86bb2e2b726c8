"""Exact planar primitives for curves anchored to a horizontal baseline.

All coordinates are exact numbers: Python ints (fixed-point, units of
1/scale) or Fractions produced by cutting edges. Every predicate is decided
with integer/rational arithmetic only, so results are invariant under
scaling and never suffer floating-point flakiness. Python integers are
arbitrary precision, which subsumes the wide-intermediate requirement for
orientation tests.

The baseline is the line y = 0; the closed upper half-plane is y >= 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import (
    CollinearError,
    ContractError,
    OverlapError,
    TangencyError,
)

Coord = Union[int, Fraction]

#: Loader limit on polyline vertices per curve. The underlying theory puts no
#: bound on curve complexity; this cap only guards resource use.
MAX_POLYLINE_VERTICES = 10_000

#: Magnitude contract for fixed-point coordinates.
MAX_COORD_MAGNITUDE = 2**62


def is_exact(v) -> bool:
    """True if v is an exact coordinate (int or Fraction, not bool/float)."""
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


@dataclass(frozen=True)
class Point:
    """A point with exact coordinates. y = 0 is the baseline."""

    x: Coord
    y: Coord

    def __post_init__(self):
        if not is_exact(self.x) or not is_exact(self.y):
            raise TypeError(f"coordinates must be int or Fraction, got {self.x!r}, {self.y!r}")

    def __iter__(self):
        return iter((self.x, self.y))

    def scaled(self, factor: int) -> "Point":
        return Point(self.x * factor, self.y * factor)


def _sign(v: Coord) -> int:
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def orientation(o: Point, a: Point, b: Point) -> int:
    """Sign of the cross product (a - o) x (b - o).

    +1 for a counter-clockwise turn, -1 for clockwise, 0 for collinear.
    """
    return _sign((a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x))


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True if p lies on the closed segment ab."""
    if orientation(a, b, p) != 0:
        return False
    return (min(a.x, b.x) <= p.x <= max(a.x, b.x)
            and min(a.y, b.y) <= p.y <= max(a.y, b.y))


class SegRelation(enum.Enum):
    DISJOINT = "disjoint"
    POINT = "point"
    OVERLAP = "overlap"


def segment_intersection(p1: Point, p2: Point, q1: Point, q2: Point):
    """Classify the intersection of closed segments p1p2 and q1q2.

    Returns (SegRelation.DISJOINT, None), (SegRelation.POINT, point) or
    (SegRelation.OVERLAP, (a, b)) where ab is the shared subsegment of
    positive length. All computed points are exact.
    """
    d1 = orientation(q1, q2, p1)
    d2 = orientation(q1, q2, p2)
    d3 = orientation(p1, p2, q1)
    d4 = orientation(p1, p2, q2)

    if d1 == 0 and d2 == 0 and d3 == 0 and d4 == 0:
        # Collinear: project on the dominant axis and intersect parameter ranges.
        if p1.x != p2.x or q1.x != q2.x:
            key = lambda pt: pt.x
        else:
            key = lambda pt: pt.y
        lo_p, hi_p = sorted((p1, p2), key=key)
        lo_q, hi_q = sorted((q1, q2), key=key)
        lo = max(key(lo_p), key(lo_q))
        hi = min(key(hi_p), key(hi_q))
        if lo > hi:
            return SegRelation.DISJOINT, None
        pick = lambda v: lo_p if key(lo_p) == v else (hi_p if key(hi_p) == v else
                                                      (lo_q if key(lo_q) == v else hi_q))
        if lo == hi:
            return SegRelation.POINT, pick(lo)
        return SegRelation.OVERLAP, (pick(lo), pick(hi))

    if d1 * d2 < 0 and d3 * d4 < 0:
        # Proper crossing in both interiors; solve for the point exactly.
        num = (q2.x - q1.x) * (p1.y - q1.y) - (q2.y - q1.y) * (p1.x - q1.x)
        den = (q2.y - q1.y) * (p2.x - p1.x) - (q2.x - q1.x) * (p2.y - p1.y)
        t = Fraction(num, den)
        x = p1.x + t * (p2.x - p1.x)
        y = p1.y + t * (p2.y - p1.y)
        return SegRelation.POINT, Point(x, y)

    # Touching cases: an endpoint of one segment lies on the other.
    for pt, da, (a, b) in ((p1, d1, (q1, q2)), (p2, d2, (q1, q2)),
                           (q1, d3, (p1, p2)), (q2, d4, (p1, p2))):
        if da == 0 and on_segment(pt, a, b):
            return SegRelation.POINT, pt
    return SegRelation.DISJOINT, None


@dataclass(frozen=True)
class Polyline:
    """A simple open polyline with exact vertices and an opaque id."""

    points: tuple
    id: str = ""

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise ContractError(f"polyline {self.id!r} needs at least 2 points")
        if len(pts) > MAX_POLYLINE_VERTICES:
            raise ContractError(
                f"polyline {self.id!r} exceeds the {MAX_POLYLINE_VERTICES}-vertex cap")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise ContractError(f"polyline {self.id!r} repeats vertex {a}")

    @property
    def segments(self):
        segs = getattr(self, "_segments", None)
        if segs is None:
            segs = tuple(zip(self.points, self.points[1:]))
            object.__setattr__(self, "_segments", segs)
        return segs

    @property
    def bbox(self):
        box = getattr(self, "_bbox", None)
        if box is None:
            xs = [p.x for p in self.points]
            ys = [p.y for p in self.points]
            box = (min(xs), min(ys), max(xs), max(ys))
            object.__setattr__(self, "_bbox", box)
        return box

    def reversed(self) -> "Polyline":
        return Polyline(tuple(reversed(self.points)), self.id)

    def scaled(self, factor: int) -> "Polyline":
        return Polyline(tuple(p.scaled(factor) for p in self.points), self.id)


def _bbox_disjoint(a: Polyline, b: Polyline) -> bool:
    ax0, ay0, ax1, ay1 = a.bbox
    bx0, by0, bx1, by1 = b.bbox
    return ax1 < bx0 or bx1 < ax0 or ay1 < by0 or by1 < ay0


def validate_simple(poly: Polyline) -> None:
    """Reject self-intersecting polylines.

    Adjacent edges may meet only at their shared vertex; all other edge pairs
    must be disjoint.
    """
    segs = poly.segments
    n = len(segs)
    for i in range(n):
        a1, a2 = segs[i]
        for j in range(i + 1, n):
            b1, b2 = segs[j]
            rel, data = segment_intersection(a1, a2, b1, b2)
            if rel is SegRelation.DISJOINT:
                continue
            if j == i + 1:
                if rel is SegRelation.POINT and data == a2:
                    continue
                raise ContractError(
                    f"polyline {poly.id!r} folds back on itself at edge {i}-{j}")
            raise ContractError(
                f"polyline {poly.id!r} self-intersects between edges {i} and {j}")


def segments_intersect(a: Polyline, b: Polyline) -> list:
    """All common points of two simple polylines, exactly.

    A shared point is reported once even when several vertex-adjacent edges
    meet there. Raises OverlapError if the polylines share a segment of
    positive length. The result is sorted by (x, y), so it is symmetric in
    its arguments as a point set.
    """
    found = set()
    if _bbox_disjoint(a, b):
        return []
    for a1, a2 in a.segments:
        for b1, b2 in b.segments:
            if (max(a1.x, a2.x) < min(b1.x, b2.x) or max(b1.x, b2.x) < min(a1.x, a2.x)
                    or max(a1.y, a2.y) < min(b1.y, b2.y) or max(b1.y, b2.y) < min(a1.y, a2.y)):
                continue
            rel, data = segment_intersection(a1, a2, b1, b2)
            if rel is SegRelation.OVERLAP:
                raise OverlapError(
                    f"polylines {a.id!r} and {b.id!r} share a segment of positive length")
            if rel is SegRelation.POINT:
                found.add(data)
    return sorted(found, key=lambda p: (p.x, p.y))


def polylines_disjoint(a: Polyline, b: Polyline) -> bool:
    if _bbox_disjoint(a, b):
        return True
    for a1, a2 in a.segments:
        for b1, b2 in b.segments:
            if (max(a1.x, a2.x) < min(b1.x, b2.x) or max(b1.x, b2.x) < min(a1.x, a2.x)
                    or max(a1.y, a2.y) < min(b1.y, b2.y) or max(b1.y, b2.y) < min(a1.y, a2.y)):
                continue
            rel, _ = segment_intersection(a1, a2, b1, b2)
            if rel is not SegRelation.DISJOINT:
                return False
    return True


def point_on_polyline(p: Point, poly: Polyline) -> bool:
    return any(on_segment(p, a, b) for a, b in poly.segments)


# Positions along a polyline are (edge_index, parameter) pairs with the
# parameter an exact Fraction in [0, 1]; interior vertices are canonicalized
# to (i, 0) so positions compare lexicographically.

Position = tuple

def _canon(poly: Polyline, pos: Position) -> Position:
    i, t = pos
    if t == 1 and i < len(poly.points) - 2:
        return (i + 1, Fraction(0))
    return (i, Fraction(t))


def point_at(poly: Polyline, pos: Position) -> Point:
    i, t = pos
    a, b = poly.points[i], poly.points[i + 1]
    if t == 0:
        return a
    if t == 1:
        return b
    return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))


def position_of(poly: Polyline, p: Point) -> Position | None:
    """First position along poly at which point p occurs, or None."""
    for i, (a, b) in enumerate(poly.segments):
        if on_segment(p, a, b):
            if b.x != a.x:
                t = Fraction(p.x - a.x, b.x - a.x)
            else:
                t = Fraction(p.y - a.y, b.y - a.y)
            return _canon(poly, (i, t))
    return None


def subcurve(poly: Polyline, start: Position, end: Position, id: str = "") -> Polyline:
    """The sub-polyline between two positions (start strictly before end)."""
    start = _canon(poly, start)
    end = _canon(poly, end)
    if start >= end:
        raise ContractError("subcurve start must precede end")
    pts = [point_at(poly, start)]
    i = start[0]
    j = end[0]
    for k in range(i, j):
        nxt = poly.points[k + 1]
        if nxt != pts[-1]:
            pts.append(nxt)
    last = point_at(poly, end)
    if last != pts[-1]:
        pts.append(last)
    return Polyline(tuple(pts), id or poly.id)


def baseline_crossings_along(c: Polyline):
    """Proper baseline crossings in order along the curve.

    Returns a list of (Point, Position). Validates the crossing contract:
    every baseline contact must be a proper sign change, baseline-collinear
    edges are rejected, and endpoints may sit on the baseline only as the
    single basepoint of a 1-curve.
    """
    pts = c.points
    n = len(pts)
    signs = [_sign(p.y) for p in pts]

    for i in range(n - 1):
        if signs[i] == 0 and signs[i + 1] == 0:
            raise CollinearError(f"curve {c.id!r} has an edge on the baseline")

    end_on = (signs[0] == 0, signs[-1] == 0)
    if end_on[0] and end_on[1]:
        raise ContractError(f"curve {c.id!r} has both endpoints on the baseline")
    if (signs[0] < 0 and not end_on[0]) or (signs[-1] < 0 and not end_on[1]):
        raise ContractError(f"curve {c.id!r} has an endpoint below the baseline")

    out = []
    for i in range(n):
        if signs[i] == 0:
            if i == 0 or i == n - 1:
                continue  # 1-curve basepoint, not a crossing
            prev, nxt = signs[i - 1], signs[i + 1]
            if prev == nxt:
                raise TangencyError(
                    f"curve {c.id!r} touches the baseline at {pts[i]} without crossing")
            out.append((pts[i], (i, Fraction(0))))
        if i < n - 1 and signs[i] != 0 and signs[i + 1] != 0 and signs[i] != signs[i + 1]:
            a, b = pts[i], pts[i + 1]
            t = Fraction(a.y, a.y - b.y)
            x = a.x + t * (b.x - a.x)
            out.append((Point(x, 0), (i, t)))
    return out


def baseline_crossings(c: Polyline) -> list:
    """Basepoints of c on the baseline, in left-to-right order.

    For a 1-curve (exactly one endpoint on the baseline) this is its single
    basepoint; otherwise all proper crossings. See baseline_crossings_along
    for the validation rules.
    """
    pts = c.points
    end_on = (_sign(pts[0].y) == 0, _sign(pts[-1].y) == 0)
    crossings = baseline_crossings_along(c)
    if end_on[0] or end_on[1]:
        if crossings:
            raise ContractError(
                f"curve {c.id!r} has a baseline endpoint and interior crossings")
        return [pts[0] if end_on[0] else pts[-1]]
    return sorted((p for p, _ in crossings), key=lambda p: p.x)


def _basepoint_xs(obj) -> list:
    if isinstance(obj, Polyline):
        return [p.x for p in baseline_crossings(obj)]
    bps = getattr(obj, "basepoints", None)
    if bps is not None:
        return [p.x for p in bps]
    return [p.x if isinstance(p, Point) else p for p in obj]


def precedes(a, b) -> bool:
    """True iff every basepoint of a is strictly left of every basepoint of b.

    Accepts polylines, objects exposing .basepoints, or iterables of
    x-coordinates. Interleaved basepoints yield False (not an error).
    """
    xa = _basepoint_xs(a)
    xb = _basepoint_xs(b)
    if not xa or not xb:
        raise ContractError("precedes needs nonempty basepoint lists")
    return max(xa) < min(xb)


@dataclass(frozen=True)
class CapCurve:
    """A curve in the upper half-plane with both endpoints on the baseline."""

    polyline: Polyline

    def __post_init__(self):
        pts = self.polyline.points
        if pts[0].y != 0 or pts[-1].y != 0:
            raise ContractError(f"cap-curve {self.polyline.id!r} endpoints must be on the baseline")
        for p in pts[1:-1]:
            if p.y <= 0:
                raise ContractError(
                    f"cap-curve {self.polyline.id!r} interior must stay strictly above the baseline")
        validate_simple(self.polyline)


class Region(enum.Enum):
    INT = "int"
    EXT = "ext"
    ON = "on"


def _ring_of(cap: CapCurve):
    """The closed boundary: the cap polyline plus the baseline return segment."""
    pts = list(cap.polyline.points)
    return pts + [pts[0]]


def point_in_ring(ring, p: Point) -> Region:
    """Exact even-odd classification of p against a closed polygonal ring."""
    n = len(ring) - 1
    for i in range(n):
        if on_segment(p, ring[i], ring[i + 1]):
            return Region.ON
    inside = False
    for i in range(n):
        a, b = ring[i], ring[i + 1]
        if (a.y > p.y) != (b.y > p.y):
            o = orientation(a, b, p)
            if (b.y > a.y and o > 0) or (b.y < a.y and o < 0):
                inside = not inside
    return Region.INT if inside else Region.EXT


def region_of(cap: CapCurve, p: Point) -> Region:
    """Classify p against the closed region bound by a cap-curve and the baseline.

    ON iff p lies on the cap-curve or on the baseline segment between its
    endpoints; INT for the bounded component, EXT otherwise.
    """
    return point_in_ring(_ring_of(cap), p)


def segment_meets_vstrip(a: Point, b: Point, lo: Coord, hi: Coord) -> bool:
    """True if segment ab has a point with lo <= x <= hi and y >= 0."""
    xmin, xmax = min(a.x, b.x), max(a.x, b.x)
    if xmax < lo or xmin > hi:
        return False
    if a.x == b.x:
        return max(a.y, b.y) >= 0
    # Clip the parameter range to the strip and test the maximum of linear y.
    t0 = Fraction(lo - a.x, b.x - a.x)
    t1 = Fraction(hi - a.x, b.x - a.x)
    t0, t1 = min(t0, t1), max(t0, t1)
    t0 = max(t0, Fraction(0))
    t1 = min(t1, Fraction(1))
    y0 = a.y + t0 * (b.y - a.y)
    y1 = a.y + t1 * (b.y - a.y)
    return max(y0, y1) >= 0


def polyline_meets_vstrip(poly: Polyline, lo: Coord, hi: Coord) -> bool:
    """True if the polyline meets the closed strip [lo, hi] x [0, inf)."""
    return any(segment_meets_vstrip(a, b, lo, hi) for a, b in poly.segments)
