"""Generator, verifier, and coloring auditor for the recursive probe construction.

The construction builds, for every k, a triangle-free LR-family of
double-curves X_k together with pairwise disjoint vertical probes P_k such
that any proper coloring uses at least k colors on the double-curves
crossing some probe. Level 1 is a single double-curve crossed by a single
probe; the step places a scaled copy of the previous level inside every
probe, below the horizontal arms crossing it, and wires one new double-curve
plus two new probes for every probe of every inner copy.

Geometry is laid out in exact dyadic rationals inside a unit box and scaled
to integers at the end; every incidence claimed by the construction is also
asserted during generation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .errors import ContractError, ImproperColoring, ScaleOverflow
from .geometry import MAX_COORD_MAGNITUDE, Point, Polyline, polyline_meets_vstrip, polylines_disjoint
from .graphcore import Coloring, IntersectionGraph, build_graph, find_triangle, is_proper

#: Hard implementation cap on the recursion depth.
MAX_LEVEL = 6
#: Levels above this refuse without an explicit override.
DEFAULT_LEVEL_CAP = 5


def expected_sizes(k: int):
    """(member count, probe count) for level k, from the union recurrences."""
    n, p = 1, 1
    for _ in range(k - 1):
        n, p = n * (1 + p) + p * p, 2 * p * p
    return n, p


@dataclass(frozen=True)
class Probe:
    """A vertical strip of the upper half-plane over [x_lo, x_hi]."""

    x_lo: int
    x_hi: int

    def __post_init__(self):
        if self.x_lo >= self.x_hi:
            raise ContractError("probe needs positive width")

    def as_pair(self):
        return (self.x_lo, self.x_hi)


@dataclass(frozen=True)
class DoubleCurve:
    """Two disjoint 1-curves; the left is a vertical segment, the right an
    L-shaped stem plus horizontal arm. The id records the recursion path."""

    id: str
    left: Polyline
    right: Polyline

    def __post_init__(self):
        for name, poly in (("left", self.left), ("right", self.right)):
            foot = poly.points[0]
            if foot.y != 0:
                raise ContractError(f"{self.id!r}.{name} must start on the baseline")
            if any(p.y <= 0 for p in poly.points[1:]):
                raise ContractError(
                    f"{self.id!r}.{name} must stay strictly above the baseline")
        if self.left.points[0].x >= self.right.points[0].x:
            raise ContractError(
                f"{self.id!r}: left basepoint must precede the right one")
        if not polylines_disjoint(self.left, self.right):
            raise ContractError(f"{self.id!r}: the two 1-curves must be disjoint")

    def polylines(self):
        return (self.left, self.right)

    def parts(self):
        return (("L", self.left), ("R", self.right))

    @property
    def basepoints(self):
        return (self.left.points[0], self.right.points[0])

    def basepoint_xs(self):
        return [p.x for p in self.basepoints]


@dataclass(frozen=True)
class Gadget:
    x_id: str
    a: Probe
    b: Probe


@dataclass(frozen=True)
class BurlingNode:
    """Recursion-tree node for one (sub)instance.

    Level-1 nodes hold a single member and probe. Higher nodes hold the
    outer copy, one inner copy per outer probe, and per (outer probe, inner
    probe) the new double-curve id with its two probes.
    """

    level: int
    member_id: Optional[str] = None
    probe: Optional[Probe] = None
    outer: Optional["BurlingNode"] = None
    inner: tuple = ()
    gadgets: tuple = ()   # gadgets[i][j] for outer probe i, inner probe j

    @property
    def probes(self) -> tuple:
        if self.level == 1:
            return (self.probe,)
        out = []
        for row in self.gadgets:
            for g in row:
                out.append(g.a)
                out.append(g.b)
        return tuple(out)

    def member_ids(self) -> list:
        if self.level == 1:
            return [self.member_id]
        ids = self.outer.member_ids()
        for child in self.inner:
            ids.extend(child.member_ids())
        for row in self.gadgets:
            for g in row:
                ids.append(g.x_id)
        return ids


@dataclass(frozen=True)
class BurlingInstance:
    k: int
    members: tuple
    probes: tuple
    scale: int
    tree: BurlingNode
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def by_id(self, mid: str) -> DoubleCurve:
        table = self._cache.get("by_id")
        if table is None:
            table = {m.id: m for m in self.members}
            self._cache["by_id"] = table
        return table[mid]

    def graph(self) -> IntersectionGraph:
        g = self._cache.get("graph")
        if g is None:
            g = build_graph(self.members)
            self._cache["graph"] = g
        return g


# Construction-time rational layout.

@dataclass(frozen=True)
class _RMember:
    id: str
    lx: Fraction
    ltop: Fraction
    rx: Fraction
    rh: Fraction
    rend: Fraction


@dataclass(frozen=True)
class _RInst:
    members: tuple
    probes: tuple   # (lo, hi) fractions, canonical order
    tree: tuple     # nested tuples mirroring BurlingNode with fraction strips


def _rnode1(member_id, probe):
    return ("leaf", member_id, probe)


def _rnode(outer, inner, gadgets):
    return ("node", outer, tuple(inner), tuple(tuple(row) for row in gadgets))


def _remap_tree(tree, prefix, fx, fy):
    """Prefix member ids and apply the affine strip transform x -> fx(x)."""
    if tree[0] == "leaf":
        _, mid, (lo, hi) = tree
        return ("leaf", prefix + mid, (fx(lo), fx(hi)))
    _, outer, inner, gadgets = tree
    new_gadgets = []
    for row in gadgets:
        new_row = []
        for (xid, (alo, ahi), (blo, bhi)) in row:
            new_row.append((prefix + xid, (fx(alo), fx(ahi)), (fx(blo), fx(bhi))))
        new_gadgets.append(tuple(new_row))
    return ("node",
            _remap_tree(outer, prefix, fx, fy),
            tuple(_remap_tree(ch, prefix, fx, fy) for ch in inner),
            tuple(new_gadgets))


def _base() -> _RInst:
    e = Fraction(1, 8)
    m = _RMember("x", lx=e, ltop=4 * e, rx=3 * e, rh=2 * e, rend=7 * e)
    probe = (4 * e, 6 * e)
    return _RInst((m,), (probe,), _rnode1("x", probe))


def _crossing_arms(inst: _RInst, lo: Fraction, hi: Fraction) -> list:
    """Members crossing the strip, with layout-invariant assertions."""
    out = []
    for m in inst.members:
        assert not (lo <= m.lx <= hi), "left part inside a probe strip"
        assert not (lo <= m.rx <= hi), "stem inside a probe strip"
        if m.rend < lo or m.rx > hi:
            continue
        assert m.rx < lo and m.rend > hi, "arm must span the strip fully"
        out.append(m)
    heights = [m.rh for m in out]
    assert len(set(heights)) == len(heights), "arm heights must be distinct"
    return out


def _step(inst: _RInst) -> _RInst:
    members = [_RMember("o." + m.id, m.lx, m.ltop, m.rx, m.rh, m.rend)
               for m in inst.members]
    outer_tree = _remap_tree(inst.tree, "o.", lambda x: x, lambda y: y)
    p = len(inst.probes)
    inner_nodes = []
    gadget_rows = []
    probes = []

    for i, (lo, hi) in enumerate(inst.probes):
        width = hi - lo
        arms = _crossing_arms(inst, lo, hi)
        assert arms, "every probe is crossed by at least one member"
        h = min(m.rh for m in arms)

        # scaled copy of the whole instance inside the strip, below the arms
        x0 = lo + width / 8
        sx = 3 * width / 8
        sy = h / 2
        fx = lambda x, x0=x0, sx=sx: x0 + x * sx
        fy = lambda y, sy=sy: y * sy
        pre = f"p{i}."
        for m in inst.members:
            members.append(_RMember(pre + m.id, fx(m.lx), fy(m.ltop),
                                    fx(m.rx), fy(m.rh), fx(m.rend)))
        copy_probes = [(fx(a), fx(b)) for (a, b) in inst.probes]
        inner_nodes.append(_remap_tree(inst.tree, pre, fx, fy))

        row = []
        for j, (c, d) in enumerate(copy_probes):
            w = d - c
            a_strip = (c + w / 4, c + w / 2)
            l_x = c + 3 * w / 4
            l_top = 3 * h / 4
            slot = width / (2 * p)
            s0 = lo + width / 2 + j * slot
            stem = s0 + slot / 8
            b_strip = (s0 + 3 * slot / 8, s0 + 5 * slot / 8)
            arm_end = s0 + 7 * slot / 8
            arm_h = h / 2 + (j + 1) * h / (4 * p)
            gid = f"g{i}.{j}"
            members.append(_RMember(gid, l_x, l_top, stem, arm_h, arm_end))
            row.append((gid, a_strip, b_strip))
            probes.append(a_strip)
            probes.append(b_strip)
        gadget_rows.append(row)

    return _RInst(tuple(members), tuple(probes),
                  _rnode(outer_tree, inner_nodes, gadget_rows))


def _power_of_two_lcm(fractions_iter) -> int:
    scale = 1
    for f in fractions_iter:
        d = Fraction(f).denominator
        if d & (d - 1):
            raise AssertionError(f"non-dyadic coordinate denominator {d}")
        scale = max(scale, d)
    return scale


def _tree_fractions(tree):
    if tree[0] == "leaf":
        yield from tree[2]
        return
    _, outer, inner, gadgets = tree
    yield from _tree_fractions(outer)
    for ch in inner:
        yield from _tree_fractions(ch)
    for row in gadgets:
        for (_, a, b) in row:
            yield from a
            yield from b


def _freeze_tree(tree, scale: int) -> BurlingNode:
    if tree[0] == "leaf":
        _, mid, (lo, hi) = tree
        return BurlingNode(level=1, member_id=mid,
                           probe=Probe(int(lo * scale), int(hi * scale)))
    _, outer, inner, gadgets = tree
    fouter = _freeze_tree(outer, scale)
    finner = tuple(_freeze_tree(ch, scale) for ch in inner)
    frows = []
    for row in gadgets:
        frows.append(tuple(
            Gadget(xid,
                   Probe(int(a[0] * scale), int(a[1] * scale)),
                   Probe(int(b[0] * scale), int(b[1] * scale)))
            for (xid, a, b) in row))
    return BurlingNode(level=fouter.level + 1, outer=fouter,
                       inner=finner, gadgets=tuple(frows))


def generate(k: int, allow_beyond_cap: bool = False) -> BurlingInstance:
    """Generate the level-k instance with exact integer coordinates.

    Levels beyond 5 refuse unless allow_beyond_cap is set; 6 is a hard cap.
    Raises ScaleOverflow when the requested level cannot be realized within
    the 2**62 coordinate contract (the strips shrink doubly exponentially,
    which in this realization overflows at k = 5).
    """
    if not 1 <= k <= MAX_LEVEL:
        raise ContractError(f"k must be between 1 and {MAX_LEVEL}")
    if k > DEFAULT_LEVEL_CAP and not allow_beyond_cap:
        raise ContractError(
            f"k = {k} exceeds the default cap {DEFAULT_LEVEL_CAP}; "
            "pass allow_beyond_cap=True to try anyway")

    inst = _base()
    for _ in range(k - 1):
        inst = _step(inst)

    coords = []
    for m in inst.members:
        coords.extend((m.lx, m.ltop, m.rx, m.rh, m.rend))
    for lo, hi in inst.probes:
        coords.extend((lo, hi))
    coords.extend(_tree_fractions(inst.tree))
    scale = _power_of_two_lcm(coords)
    if scale > MAX_COORD_MAGNITUDE:
        raise ScaleOverflow(
            f"level {k} needs scale 2**{scale.bit_length() - 1}, beyond the "
            f"2**62 coordinate contract")

    members = []
    for m in inst.members:
        lx, ltop = int(m.lx * scale), int(m.ltop * scale)
        rx, rh, rend = int(m.rx * scale), int(m.rh * scale), int(m.rend * scale)
        left = Polyline((Point(lx, 0), Point(lx, ltop)), f"{m.id}.L")
        right = Polyline((Point(rx, 0), Point(rx, rh), Point(rend, rh)), f"{m.id}.R")
        members.append(DoubleCurve(m.id, left, right))
    probes = tuple(Probe(int(lo * scale), int(hi * scale)) for lo, hi in inst.probes)
    tree = _freeze_tree(inst.tree, scale)

    n_exp, p_exp = expected_sizes(k)
    if (len(members), len(probes)) != (n_exp, p_exp):
        raise AssertionError(
            f"size mismatch: got ({len(members)}, {len(probes)}), "
            f"expected ({n_exp}, {p_exp})")
    xs = [x for m in members for x in m.basepoint_xs()]
    if len(set(xs)) != len(xs):
        raise AssertionError("basepoints are not pairwise distinct")
    return BurlingInstance(k, tuple(members), probes, scale, tree)


def crossing_set(inst: BurlingInstance, probe: Probe) -> list:
    """Ids of the double-curves whose point set meets the closed strip."""
    return _crossing_ids(inst, inst.members, probe, cache_key="all")


def _crossing_ids(inst: BurlingInstance, members, probe: Probe, cache_key=None) -> list:
    key = None
    if cache_key is not None:
        key = ("crossing", cache_key, probe.as_pair())
        cached = inst._cache.get(key)
        if cached is not None:
            return cached
    out = [m.id for m in members
           if polyline_meets_vstrip(m.left, probe.x_lo, probe.x_hi)
           or polyline_meets_vstrip(m.right, probe.x_lo, probe.x_hi)]
    if key is not None:
        inst._cache[key] = out
    return out


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class BurlingReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def lines(self) -> list:
        return [f"{'PASS' if c.ok else 'FAIL'} {c.name}: {c.detail}" for c in self.checks]


def verify_properties(inst: BurlingInstance) -> BurlingReport:
    """Geometric verification of the construction's defining properties.

    Checks, in order: the size recurrences; distinct basepoints; every probe
    disjoint from every left 1-curve; pairwise disjointness of each probe's
    crossing set; triangle-freeness by exhaustive search; and LR-family
    validation of the whole instance. Failures become report entries, never
    exceptions.
    """
    from .families import validate_lr

    checks = []
    n_exp, p_exp = expected_sizes(inst.k)
    ok = (len(inst.members), len(inst.probes)) == (n_exp, p_exp)
    checks.append(CheckResult(
        "sizes-match-recurrence", ok,
        f"|X|={len(inst.members)}, |P|={len(inst.probes)}, expected ({n_exp}, {p_exp})"))

    xs = [x for m in inst.members for x in m.basepoint_xs()]
    ok = len(set(xs)) == len(xs)
    checks.append(CheckResult("basepoints-distinct", ok,
                              f"{len(xs)} basepoints" if ok else "duplicate basepoint"))

    strips = sorted(p.as_pair() for p in inst.probes)
    overlap = [(a, b) for a, b in zip(strips, strips[1:]) if b[0] <= a[1]]
    checks.append(CheckResult(
        "probes-pairwise-disjoint", not overlap,
        f"{len(strips)} disjoint strips" if not overlap
        else f"overlapping strips {overlap[:3]}"))

    bad = []
    for pi, probe in enumerate(inst.probes):
        for m in inst.members:
            if polyline_meets_vstrip(m.left, probe.x_lo, probe.x_hi):
                bad.append((pi, m.id))
    checks.append(CheckResult(
        "probes-avoid-left-parts", not bad,
        "all probes disjoint from every L(X)" if not bad else f"violations: {bad[:5]}"))

    bad = []
    for pi, probe in enumerate(inst.probes):
        ids = crossing_set(inst, probe)
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                m1, m2 = inst.by_id(ids[a]), inst.by_id(ids[b])
                disjoint = all(polylines_disjoint(x, y)
                               for x in m1.polylines() for y in m2.polylines())
                if not disjoint:
                    bad.append((pi, ids[a], ids[b]))
    checks.append(CheckResult(
        "crossing-sets-pairwise-disjoint", not bad,
        "members crossing each probe are pairwise disjoint" if not bad
        else f"violations: {bad[:5]}"))

    g = inst.graph()
    tri = find_triangle(g)
    omega = 2 if g.m else (1 if g.n else 0)
    checks.append(CheckResult(
        "triangle-free", tri is None,
        f"no triangle among {g.n} vertices, omega={omega}" if tri is None
        else f"triangle {tuple(g.labels[v] for v in tri)}"))

    lr = validate_lr(inst.members)
    checks.append(CheckResult(
        "lr-family", lr.ok,
        f"{lr.checked_pairs} pairs checked" if lr.ok
        else "; ".join(lr.report_lines()[:5])))

    return BurlingReport(tuple(checks))


@dataclass(frozen=True)
class AuditResult:
    probe: Probe
    probe_index: int
    colors: frozenset


def audit_coloring(inst: BurlingInstance, coloring: Mapping[str, int]) -> AuditResult:
    """Find a probe of the instance carrying at least k distinct colors.

    Implements the recursive argument behind the chromatic lower bound:
    descend through the copies picking a probe of the outer copy and a probe
    of the matching inner copy that already carry many colors, then compare
    the two color sets and pick the first or second new probe accordingly.
    The input coloring must be proper (checked; ImproperColoring otherwise).
    """
    missing = [m.id for m in inst.members if m.id not in coloring]
    if missing:
        raise ContractError(f"coloring misses members {missing[:3]}")
    g = inst.graph()
    ok, edge = is_proper(g, Coloring(tuple(coloring[l] for l in g.labels)))
    if not ok:
        raise ImproperColoring((g.labels[edge[0]], g.labels[edge[1]]))

    member_lists = inst._cache.setdefault("node_members", {})

    def members_of(node: BurlingNode):
        got = member_lists.get(id(node))
        if got is None:
            got = tuple(inst.by_id(mid) for mid in node.member_ids())
            member_lists[id(node)] = got
        return got

    def colors_on(node: BurlingNode, probe: Probe) -> frozenset:
        ids = _crossing_ids(inst, members_of(node), probe, cache_key=id(node))
        return frozenset(coloring[mid] for mid in ids)

    def descend(node: BurlingNode):
        if node.level == 1:
            return 0, colors_on(node, node.probe)
        i, _ = descend(node.outer)
        probe_p = node.outer.probes[i]
        colors_p = colors_on(node.outer, probe_p)
        j, _ = descend(node.inner[i])
        probe_q = node.inner[i].probes[j]
        colors_q = colors_on(node.inner[i], probe_q)

        gadget = node.gadgets[i][j]
        if colors_p != colors_q:
            picked = gadget.a
        else:
            x_color = coloring[gadget.x_id]
            if x_color in colors_p:
                raise AssertionError(
                    "new double-curve shares a color with the set it crosses")
            picked = gadget.b
        idx = node.probes.index(picked)
        colors = colors_on(node, picked)
        if len(colors) < node.level:
            raise AssertionError(
                f"audit invariant broken: {len(colors)} colors at level {node.level}")
        return idx, colors

    idx, colors = descend(inst.tree)
    if len(colors) < inst.k:
        raise AssertionError("audit returned fewer colors than the level")
    return AuditResult(inst.probes[idx], idx, colors)
