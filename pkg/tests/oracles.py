"""Independent brute-force oracles for the test suite.

These deliberately avoid the library's predicate code paths: segment
intersection is decided by dense sampling with an exact separation bound,
region classification by exact supercover rasterization plus flood fill,
and 1-curve connectivity by flood fill over rasterized unions. All
arithmetic stays in integers (numpy int64 with verified magnitude bounds),
so oracle verdicts are exact for the integer-coordinate inputs the tests
feed them.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage


def _ints(seg):
    (x0, y0), (x1, y1) = seg
    return int(x0), int(y0), int(x1), int(y1)


def collinear_overlap(a, b) -> bool:
    """Exact check: do the segments lie on one line and share positive length?"""
    ax0, ay0, ax1, ay1 = _ints(a)
    bx0, by0, bx1, by1 = _ints(b)
    dax, day = ax1 - ax0, ay1 - ay0

    def cross(px, py):
        return dax * (py - ay0) - day * (px - ax0)

    if cross(bx0, by0) != 0 or cross(bx1, by1) != 0:
        return False
    if abs(dax) >= abs(day):
        lo_a, hi_a = sorted((ax0, ax1))
        lo_b, hi_b = sorted((bx0, bx1))
    else:
        lo_a, hi_a = sorted((ay0, ay1))
        lo_b, hi_b = sorted((by0, by1))
    return min(hi_a, hi_b) > max(lo_a, lo_b)


def segments_touch_oracle(a, b, coord_bound: int) -> bool:
    """Dense-sampling decision for closed integer segments.

    Disjoint integer segments inside |coordinate| <= M are separated by at
    least 1/(2*sqrt(2)*M), while sampling one segment at N = 5*M*M steps
    puts a sample within sqrt(2)*M/N of any true common point; the
    threshold 3M/2 in N-scaled units sits strictly between the two bounds,
    so the verdict is exact.
    """
    M = int(coord_bound)
    N = 5 * M * M
    ax0, ay0, ax1, ay1 = _ints(a)
    bx0, by0, bx1, by1 = _ints(b)
    for v in (ax0, ay0, ax1, ay1, bx0, by0, bx1, by1):
        assert abs(v) <= M, "oracle bound violated"

    i = np.arange(N + 1, dtype=np.int64)
    px = np.int64(N) * ax0 + i * (ax1 - ax0)
    py = np.int64(N) * ay0 + i * (ay1 - ay0)
    sbx, sby = np.int64(N) * bx0, np.int64(N) * by0
    sex, sey = np.int64(N) * bx1, np.int64(N) * by1
    dx, dy = int(sex - sbx), int(sey - sby)
    seg2 = dx * dx + dy * dy
    rx, ry = px - sbx, py - sby
    if seg2 == 0:
        min_num = int(np.min(rx * rx + ry * ry))
        return 4 * min_num <= 9 * M * M
    dot = rx * dx + ry * dy
    t = np.clip(dot, 0, seg2)
    # dist^2 * seg2 = |r|^2 * seg2 - 2*t*dot + t^2; int64-safe for our bounds
    num = (rx * rx + ry * ry) * seg2 - 2 * t * dot + t * t
    min_num = int(np.min(num))
    return 4 * min_num <= 9 * M * M * seg2


def _touched_cells(seg, res: int):
    """Exact supercover: all cells (col, row) whose closed unit square meets
    the closed segment, in res-scaled lattice coordinates.

    Candidates come from a conservative column walk; each candidate is
    settled by the separating-axis test (bounding box plus line side), so
    the result is exactly the touched set.
    """
    x0, y0, x1, y1 = (v * res for v in _ints(seg))
    if x0 > x1 or (x0 == x1 and y0 > y1):
        x0, y0, x1, y1 = x1, y1, x0, y0
    dx, dy = x1 - x0, y1 - y0

    if dx == 0:
        cols = np.array([x0 - 1, x0], dtype=np.int64)
        rows = np.arange(y0 - 1, y1 + 1, dtype=np.int64)
        cand_c = np.repeat(cols, len(rows))
        cand_r = np.tile(rows, len(cols))
    else:
        # exact y-extent of the segment over each column [c, c+1]
        cols = np.arange(x0 - 1, x1 + 1, dtype=np.int64)
        xl = np.clip(cols, x0, x1)
        xr = np.clip(cols + 1, x0, x1)
        # y*dx at the clipped x values (dx > 0 after orientation)
        y_num_l = y0 * dx + (xl - x0) * dy
        y_num_r = y0 * dx + (xr - x0) * dy
        lo = np.minimum(y_num_l, y_num_r)
        hi = np.maximum(y_num_l, y_num_r)
        jlo = np.floor_divide(lo, dx) - 1
        jhi = np.floor_divide(hi, dx) + 1
        counts = (jhi - jlo + 1).astype(np.int64)
        cand_c = np.repeat(cols, counts)
        cand_r = np.concatenate([np.arange(a, b + 1, dtype=np.int64)
                                 for a, b in zip(jlo, jhi)])

    # separating axis: bounding box on both axes, then the segment's line
    keep = (np.maximum(x0, x1) >= cand_c) & (np.minimum(x0, x1) <= cand_c + 1) \
        & (np.maximum(y0, y1) >= cand_r) & (np.minimum(y0, y1) <= cand_r + 1)
    cand_c, cand_r = cand_c[keep], cand_r[keep]
    s1 = dx * (cand_r - y0) - dy * (cand_c - x0)
    s2 = dx * (cand_r - y0) - dy * (cand_c + 1 - x0)
    s3 = dx * (cand_r + 1 - y0) - dy * (cand_c - x0)
    s4 = dx * (cand_r + 1 - y0) - dy * (cand_c + 1 - x0)
    all_pos = (s1 > 0) & (s2 > 0) & (s3 > 0) & (s4 > 0)
    all_neg = (s1 < 0) & (s2 < 0) & (s3 < 0) & (s4 < 0)
    keep = ~(all_pos | all_neg)
    return cand_c[keep], cand_r[keep]


def _rasterize(segments, res: int, bounds):
    (xmin, ymin), (xmax, ymax) = bounds
    w = (xmax - xmin) * res
    h = (ymax - ymin) * res
    mask = np.zeros((h, w), dtype=bool)
    for seg in segments:
        cc, rr = _touched_cells(seg, res)
        cc = cc - xmin * res
        rr = rr - ymin * res
        keep = (cc >= 0) & (cc < w) & (rr >= 0) & (rr < h)
        mask[rr[keep], cc[keep]] = True
    return mask


def region_oracle(cap_points, p, res: int = 96, pad: int = 2) -> str:
    """Flood-fill classification of p against the cap-curve region.

    cap_points is the open cap polyline (endpoints on the baseline); the
    ring closes along the baseline. Returns "int", "ext" or "on"; "on" is
    decided by exact arithmetic, the rest by connectivity to the outside.
    """
    pts = list(cap_points)
    ring = pts + [pts[0]]
    px, py = int(p.x), int(p.y)
    for aa, bb in zip(ring, ring[1:]):
        ax, ay, bx, by = int(aa.x), int(aa.y), int(bb.x), int(bb.y)
        cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
        if cross == 0 and min(ax, bx) <= px <= max(ax, bx) \
                and min(ay, by) <= py <= max(ay, by):
            return "on"

    xs = [int(q.x) for q in pts] + [px]
    ys = [int(q.y) for q in pts] + [py]
    bounds = ((min(xs) - pad, min(ys) - pad), (max(xs) + pad, max(ys) + pad))
    segs = [((aa.x, aa.y), (bb.x, bb.y)) for aa, bb in zip(ring, ring[1:])]
    mask = _rasterize(segs, res, bounds)
    labels, _ = ndimage.label(~mask)
    cell = ((py - bounds[0][1]) * res, (px - bounds[0][0]) * res)
    assert not mask[cell], "query cell rasterized as boundary; raise res"
    outside = labels[0, 0]
    assert outside != 0
    return "ext" if labels[cell] == outside else "int"


def connectivity_oracle(polylines, res: int = 4):
    """Flood-fill component index per polyline over a shared raster.

    Exact for axis-parallel integer geometry at res >= 4: disjoint
    segments are at distance >= 1, so their cells are never 4-adjacent,
    while intersecting segments share a touched cell.
    """
    xs, ys = [], []
    for poly in polylines:
        for q in poly.points:
            xs.append(int(q.x))
            ys.append(int(q.y))
    bounds = ((min(xs) - 1, min(ys) - 1), (max(xs) + 1, max(ys) + 1))
    union = None
    per_curve = []
    for poly in polylines:
        segs = [((aa.x, aa.y), (bb.x, bb.y))
                for aa, bb in zip(poly.points, poly.points[1:])]
        m = _rasterize(segs, res, bounds)
        per_curve.append(m)
        union = m.copy() if union is None else (union | m)
    labels, _ = ndimage.label(union)
    comp = []
    for m in per_curve:
        ls = set(np.unique(labels[m])) - {0}
        assert len(ls) == 1, "a polyline rasterized into disconnected labels"
        comp.append(int(ls.pop()))
    return comp
