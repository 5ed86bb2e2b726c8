"""Intersection graphs and exact solvers for clique and chromatic number.

Graphs are stored as per-vertex adjacency bitmasks. The solvers are exact
branch-and-bound procedures sized for the instances this toolkit produces
(a few hundred vertices); both honor a node budget and raise
SolverBudgetExceeded with their best bounds when it runs out.
"""

from __future__ import annotations

import os
import sys
import time
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import ContractError, SolverBudgetExceeded

ENV_NODE_BUDGET = "CURVEFAM_NODE_BUDGET"
DEFAULT_NODE_BUDGET = 50_000_000


class Budget:
    """Node-count (and optional wall-time) budget shared across solver calls.

    The node count is deterministic; the time limit is a safety valve and
    only checked every 1024 ticks.
    """

    def __init__(self, nodes: Optional[int] = None, time_ms: Optional[int] = None):
        if nodes is None:
            nodes = int(os.environ.get(ENV_NODE_BUDGET, DEFAULT_NODE_BUDGET))
        if nodes <= 0 or (time_ms is not None and time_ms <= 0):
            raise ContractError("budget must be positive")
        self.remaining = nodes
        self.deadline = None if time_ms is None else time.monotonic() + time_ms / 1000.0
        self.lower: Optional[int] = None
        self.upper: Optional[int] = None

    def tick(self):
        self.remaining -= 1
        if self.remaining < 0:
            raise SolverBudgetExceeded(
                "solver node budget exhausted", lower=self.lower, upper=self.upper)
        if self.deadline is not None and self.remaining % 1024 == 0:
            if time.monotonic() > self.deadline:
                raise SolverBudgetExceeded(
                    "solver time budget exhausted", lower=self.lower, upper=self.upper)


def _as_budget(budget) -> Budget:
    return budget if isinstance(budget, Budget) else Budget(budget)


@dataclass(frozen=True)
class IntersectionGraph:
    """Undirected graph with vertex labels; irreflexive and symmetric."""

    n: int
    adj: tuple          # bitmask of neighbors per vertex
    labels: tuple

    def __post_init__(self):
        for v in range(self.n):
            if self.adj[v] >> self.n:
                raise ContractError("adjacency mask out of range")
            if (self.adj[v] >> v) & 1:
                raise ContractError("graph must be irreflexive")
            for u in _bits(self.adj[v]):
                if not (self.adj[u] >> v) & 1:
                    raise ContractError("adjacency must be symmetric")
        if len(self.labels) != self.n:
            raise ContractError("labels must match vertex count")

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def edges(self):
        for u in range(self.n):
            m = self.adj[u] >> (u + 1)
            v = u + 1
            while m:
                if m & 1:
                    yield (u, v)
                m >>= 1
                v += 1

    @property
    def m(self) -> int:
        return sum(1 for _ in self.edges())


def graph_from_edges(n: int, edges: Iterable, labels=None) -> IntersectionGraph:
    adj = [0] * n
    for u, v in edges:
        if u == v:
            raise ContractError(f"self-loop at {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    if labels is None:
        labels = tuple(str(i) for i in range(n))
    return IntersectionGraph(n, tuple(adj), tuple(labels))


def build_graph(members) -> IntersectionGraph:
    """Intersection graph of a curve family.

    Members must expose .id and .polylines(); an edge joins two members iff
    some pair of their polylines intersects.
    """
    from .geometry import segments_intersect

    ms = list(members)
    edges = []
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            hit = False
            for a in ms[i].polylines():
                for b in ms[j].polylines():
                    if segments_intersect(a, b):
                        hit = True
                        break
                if hit:
                    break
            if hit:
                edges.append((i, j))
    return graph_from_edges(len(ms), edges, tuple(m.id for m in ms))


def induced_subgraph(G: IntersectionGraph, vertices: Sequence[int]):
    """Induced subgraph plus the list mapping new indices to old."""
    vs = list(vertices)
    index = {v: i for i, v in enumerate(vs)}
    adj = [0] * len(vs)
    for i, v in enumerate(vs):
        m = G.adj[v]
        for j, u in enumerate(vs):
            if (m >> u) & 1:
                adj[i] |= 1 << j
    return IntersectionGraph(len(vs), tuple(adj),
                             tuple(G.labels[v] for v in vs)), vs


@dataclass(frozen=True)
class Coloring:
    """A total assignment of 0-based colors to vertices."""

    colors: tuple

    @property
    def num_colors(self) -> int:
        return max(self.colors) + 1 if self.colors else 0

    def as_label_map(self, G: IntersectionGraph) -> dict:
        return {G.labels[v]: self.colors[v] for v in range(G.n)}


def is_proper(G: IntersectionGraph, coloring: Coloring):
    """(True, None) or (False, first monochromatic edge in index order)."""
    if len(coloring.colors) != G.n:
        raise ContractError("coloring must be total on vertices")
    for u, v in G.edges():
        if coloring.colors[u] == coloring.colors[v]:
            return False, (u, v)
    return True, None


def greedy_coloring(G: IntersectionGraph, order: Sequence[int]) -> Coloring:
    """First-fit proper coloring along the given vertex order."""
    if sorted(order) != list(range(G.n)):
        raise ContractError("order must be a permutation of the vertices")
    colors = [-1] * G.n
    for v in order:
        used = {colors[u] for u in _bits(G.adj[v]) if colors[u] >= 0}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
    return Coloring(tuple(colors))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _dsatur_heuristic(G: IntersectionGraph) -> Coloring:
    colors = [-1] * G.n
    neighbor_colors = [set() for _ in range(G.n)]
    degrees = [G.degree(v) for v in range(G.n)]
    for _ in range(G.n):
        v = max((u for u in range(G.n) if colors[u] < 0),
                key=lambda u: (len(neighbor_colors[u]), degrees[u], -u))
        c = 0
        while c in neighbor_colors[v]:
            c += 1
        colors[v] = c
        for u in _bits(G.adj[v]):
            if colors[u] < 0:
                neighbor_colors[u].add(c)
    return Coloring(tuple(colors))


# Maximum clique: branch and bound with a greedy coloring bound.

def _color_order(mask: int, adj) -> list:
    """Vertices of mask annotated with greedy color classes, colors ascending."""
    out = []
    color = 0
    rest = mask
    while rest:
        color += 1
        avail = rest
        while avail:
            v = (avail & -avail).bit_length() - 1
            out.append((v, color))
            avail &= ~adj[v] & ~(1 << v)
            rest &= ~(1 << v)
    return out


def maximum_clique(G: IntersectionGraph, budget=None) -> list:
    """An exact maximum clique as a vertex list (empty for the empty graph)."""
    budget = _as_budget(budget)
    best: list = []
    adj = G.adj

    def expand(r: list, mask: int):
        nonlocal best
        budget.tick()
        order = _color_order(mask, adj)
        for v, bound in reversed(order):
            if len(r) + bound <= len(best):
                return
            r.append(v)
            nxt = mask & adj[v]
            if nxt:
                expand(r, nxt)
            elif len(r) > len(best):
                best = r[:]
                budget.lower = len(best)
            r.pop()
            mask &= ~(1 << v)

    if G.n:
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * G.n + 100))
        expand([], (1 << G.n) - 1)
    return sorted(best)


def clique_number(G: IntersectionGraph, budget=None) -> int:
    """Exact clique number; 0 for the empty graph, 1 for edgeless graphs."""
    return len(maximum_clique(G, budget))


def find_triangle(G: IntersectionGraph):
    """A triangle (u, v, w) if one exists, else None. Exhaustive edge scan."""
    for u, v in G.edges():
        common = G.adj[u] & G.adj[v]
        if common:
            w = (common & -common).bit_length() - 1
            return (u, v, w)
    return None


# Exact chromatic number: kernelized DSATUR branch and bound.

def _kernelize(G: IntersectionGraph, c: int):
    """Iteratively strip vertices of degree < c; they are always colorable.

    Returns (core vertex list, removal stack in removal order).
    """
    alive = set(range(G.n))
    deg = {v: G.degree(v) for v in alive}
    removed = []
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            if deg[v] < c:
                alive.remove(v)
                removed.append(v)
                for u in _bits(G.adj[v]):
                    if u in alive:
                        deg[u] -= 1
                changed = True
    return sorted(alive), removed


def chromatic_decision(G: IntersectionGraph, c: int, budget=None) -> Optional[Coloring]:
    """Exhaustively decide whether G is c-colorable.

    Returns a witness Coloring using at most c colors, or None after an
    exhaustive refutation. Degree-< c vertices are stripped first and
    recolored greedily afterwards, which preserves the decision.
    """
    budget = _as_budget(budget)
    if c < 0:
        raise ContractError("color count must be nonnegative")
    if G.n == 0:
        return Coloring(())
    if c == 0:
        return None
    core, removed = _kernelize(G, c)
    colors = [-1] * G.n

    if core:
        sub, mapping = induced_subgraph(G, core)
        sub_colors = _decide_core(sub, c, budget)
        if sub_colors is None:
            return None
        for i, v in enumerate(mapping):
            colors[v] = sub_colors[i]
    for v in reversed(removed):
        used = {colors[u] for u in _bits(G.adj[v]) if colors[u] >= 0}
        col = 0
        while col in used:
            col += 1
        colors[v] = col
    return Coloring(tuple(colors))


def _decide_core(G: IntersectionGraph, c: int, budget: Budget) -> Optional[list]:
    n = G.n
    adj = G.adj
    full = (1 << c) - 1
    colors = [-1] * n
    forbid = [0] * n          # bitmask of colors excluded by colored neighbors
    forbid_count = [0] * n

    clique = maximum_clique(G, budget)
    if len(clique) > c:
        return None
    max_used = 0
    trail = []

    def do_assign(v: int, col: int):
        nonlocal max_used
        colors[v] = col
        bit = 1 << col
        touched = []
        for u in _bits(adj[v]):
            if colors[u] < 0 and not (forbid[u] & bit):
                forbid[u] |= bit
                forbid_count[u] += 1
                touched.append(u)
        trail.append((v, touched, max_used))
        max_used = max(max_used, col + 1)

    def undo():
        nonlocal max_used
        v, touched, prev_max = trail.pop()
        bit = 1 << colors[v]
        for u in touched:
            forbid[u] &= ~bit
            forbid_count[u] -= 1
        colors[v] = -1
        max_used = prev_max

    for i, v in enumerate(clique):
        do_assign(v, i)

    degrees = [G.degree(v) for v in range(n)]

    def search() -> bool:
        budget.tick()
        # Unit propagation: saturated vertices fail, forced vertices assign.
        assigned_here = 0
        while True:
            forced = -1
            for v in range(n):
                if colors[v] >= 0:
                    continue
                free = full & ~forbid[v]
                if free == 0:
                    for _ in range(assigned_here):
                        undo()
                    return False
                if free & (free - 1) == 0 and forced < 0:
                    forced = v
            if forced < 0:
                break
            free = full & ~forbid[forced]
            # forbid only holds opened classes, so a lone free color is
            # always within reach of the symmetry-broken class order
            col = (free & -free).bit_length() - 1
            do_assign(forced, col)
            assigned_here += 1

        pick = -1
        best_key = None
        for v in range(n):
            if colors[v] < 0:
                key = (-forbid_count[v], -degrees[v], v)
                if best_key is None or key < best_key:
                    best_key = key
                    pick = v
        if pick < 0:
            return True

        free = full & ~forbid[pick]
        limit = min(c, max_used + 1)   # new color classes open in index order
        for col in range(limit):
            if not (free >> col) & 1:
                continue
            do_assign(pick, col)
            if search():
                return True
            undo()
        for _ in range(assigned_here):
            undo()
        return False

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n + 100))
    if search():
        return colors[:]
    return None


def chromatic_number(G: IntersectionGraph, upper_bound_hint: Optional[int] = None,
                     budget=None):
    """Exact chromatic number with a witness coloring.

    The witness is proper and optimal; its specific color classes are not
    canonical. Raises SolverBudgetExceeded with the best bounds when the
    budget runs out.
    """
    budget = _as_budget(budget)
    if G.n == 0:
        return 0, Coloring(())
    lb = clique_number(G, budget)
    heur = _dsatur_heuristic(G)
    ub = heur.num_colors
    if upper_bound_hint is not None:
        ub = min(ub, upper_bound_hint)
    budget.lower, budget.upper = lb, ub
    witness = heur
    for c in range(lb, ub):
        w = chromatic_decision(G, c, budget)
        if w is not None:
            ok, _ = is_proper(G, w)
            assert ok and w.num_colors <= c
            return c, w
        budget.lower = c + 1
    return ub, witness


# Plain edge-list exchange format: header "n m", one edge per line.

def format_edge_list(G: IntersectionGraph) -> str:
    lines = [f"{G.n} {G.m}"]
    lines.extend(f"{u} {v}" for u, v in G.edges())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> IntersectionGraph:
    from .errors import FileFormatError

    rows = [ln for ln in (s.strip() for s in text.splitlines())
            if ln and not ln.startswith("#")]
    if not rows:
        raise FileFormatError("empty edge list")
    try:
        n, m = map(int, rows[0].split())
        edges = [tuple(map(int, r.split())) for r in rows[1:]]
    except ValueError as exc:
        raise FileFormatError(f"bad edge list: {exc}") from None
    if len(edges) != m:
        raise FileFormatError(f"expected {m} edges, found {len(edges)}")
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise FileFormatError(f"edge ({u},{v}) out of range")
    return graph_from_edges(n, edges)
