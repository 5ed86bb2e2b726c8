import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvefam.errors import ContractError, SolverBudgetExceeded
from curvefam.graphcore import (
    Budget,
    Coloring,
    IntersectionGraph,
    build_graph,
    chromatic_decision,
    chromatic_number,
    clique_number,
    find_triangle,
    format_edge_list,
    graph_from_edges,
    greedy_coloring,
    induced_subgraph,
    is_proper,
    maximum_clique,
    parse_edge_list,
)


def K(n):
    return graph_from_edges(n, itertools.combinations(range(n), 2))


def C(n):
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def brute_chi(g):
    if g.n == 0:
        return 0
    edges = list(g.edges())
    for c in range(1, g.n + 1):
        for assign in itertools.product(range(c), repeat=g.n):
            if all(assign[u] != assign[v] for u, v in edges):
                return c


@st.composite
def small_graphs(draw):
    n = draw(st.integers(min_value=0, max_value=7))
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                edges.append((i, j))
    return graph_from_edges(n, edges)


class TestClique:
    def test_known_values(self):
        assert clique_number(K(4)) == 4
        assert clique_number(C(5)) == 2
        assert clique_number(graph_from_edges(0, [])) == 0
        assert clique_number(graph_from_edges(3, [])) == 1

    def test_witness_is_clique(self):
        g = graph_from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5)])
        clique = maximum_clique(g)
        assert len(clique) == 3
        for u, v in itertools.combinations(clique, 2):
            assert g.has_edge(u, v)

    @given(small_graphs())
    @settings(max_examples=80, deadline=None)
    def test_against_brute_force(self, g):
        want = 0
        for size in range(g.n, 0, -1):
            if any(all(g.has_edge(u, v) for u, v in itertools.combinations(vs, 2))
                   for vs in itertools.combinations(range(g.n), size)):
                want = size
                break
        assert clique_number(g) == want


class TestChromatic:
    def test_known_values(self):
        assert chromatic_number(C(5))[0] == 3
        assert chromatic_number(K(4))[0] == 4
        assert chromatic_number(graph_from_edges(0, []))[0] == 0
        assert chromatic_number(graph_from_edges(3, []))[0] == 1

    def test_decision_consistency(self):
        g = C(5)
        chi, witness = chromatic_number(g)
        assert chromatic_decision(g, chi - 1) is None
        w = chromatic_decision(g, chi)
        assert w is not None and w.num_colors <= chi
        ok, _ = is_proper(g, w)
        assert ok

    @given(small_graphs())
    @settings(max_examples=60, deadline=None)
    def test_against_brute_force(self, g):
        chi, witness = chromatic_number(g)
        assert chi == brute_chi(g)
        ok, _ = is_proper(g, witness)
        assert ok
        assert witness.num_colors == chi or g.n == 0
        assert clique_number(g) <= chi

    @given(small_graphs(), st.randoms(use_true_random=False))
    @settings(max_examples=40, deadline=None)
    def test_permutation_invariance(self, g, rnd):
        perm = list(range(g.n))
        rnd.shuffle(perm)
        edges = [(perm[u], perm[v]) for u, v in g.edges()]
        h = graph_from_edges(g.n, edges)
        assert chromatic_number(h)[0] == chromatic_number(g)[0]
        assert clique_number(h) == clique_number(g)

    def test_budget_exhaustion_carries_bounds(self):
        g = K(8)
        with pytest.raises(SolverBudgetExceeded):
            chromatic_number(g, budget=Budget(3))

    def test_upper_bound_hint_respected(self):
        assert chromatic_number(C(5), upper_bound_hint=3)[0] == 3
        assert chromatic_number(K(4), upper_bound_hint=4)[0] == 4

    def test_kernelization_path(self):
        # a long path hangs off a clique; stripped vertices must recolor fine
        edges = list(itertools.combinations(range(5), 2))
        edges += [(4, 5), (5, 6), (6, 7), (7, 8)]
        g = graph_from_edges(9, edges)
        chi, w = chromatic_number(g)
        assert chi == 5
        ok, _ = is_proper(g, w)
        assert ok


class TestGreedyAndProper:
    def test_path_order_example(self):
        g = graph_from_edges(3, [(0, 1), (1, 2)], ("a", "b", "c"))
        col = greedy_coloring(g, [0, 2, 1])  # a, c, b
        assert col.colors[0] == 0 and col.colors[2] == 0 and col.colors[1] == 1

    def test_triangle_needs_three(self):
        assert greedy_coloring(K(3), [0, 1, 2]).num_colors == 3

    def test_order_must_be_permutation(self):
        with pytest.raises(ContractError):
            greedy_coloring(K(3), [0, 1, 1])

    @given(small_graphs(), st.randoms(use_true_random=False))
    @settings(max_examples=60, deadline=None)
    def test_greedy_proper_and_degree_bound(self, g, rnd):
        order = list(range(g.n))
        rnd.shuffle(order)
        col = greedy_coloring(g, order)
        ok, _ = is_proper(g, col)
        assert ok
        if g.n:
            assert col.num_colors <= max(g.degree(v) for v in range(g.n)) + 1

    def test_is_proper_reports_first_edge(self):
        g = graph_from_edges(4, [(0, 1), (1, 2), (2, 3)])
        ok, edge = is_proper(g, Coloring((0, 1, 1, 0)))
        assert not ok and edge == (1, 2)
        ok, edge = is_proper(g, Coloring((0, 1, 0, 1)))
        assert ok and edge is None

    def test_coloring_must_be_total(self):
        with pytest.raises(ContractError):
            is_proper(K(3), Coloring((0, 1)))


class TestGraphStructure:
    def test_build_graph_triangle(self):
        from curvefam.geometry import Point as P, Polyline
        from curvefam.families import make_one_curve

        curves = [make_one_curve(Polyline((P(0, 0), P(4, 4)), "a")),
                  make_one_curve(Polyline((P(4, 0), P(0, 4)), "b")),
                  make_one_curve(Polyline((P(2, 0), P(2, 5)), "c"))]
        g = build_graph(curves)
        assert g.m == 3 and clique_number(g) == 3

    def test_build_graph_disjoint(self):
        from curvefam.geometry import Point as P, Polyline
        from curvefam.families import make_one_curve

        curves = [make_one_curve(Polyline((P(0, 0), P(0, 1)), "a")),
                  make_one_curve(Polyline((P(2, 0), P(2, 1)), "b"))]
        assert build_graph(curves).m == 0

    def test_find_triangle(self):
        assert find_triangle(C(5)) is None
        tri = find_triangle(K(4))
        assert tri is not None and len(set(tri)) == 3

    def test_induced_subgraph(self):
        g = C(5)
        sub, mapping = induced_subgraph(g, [0, 1, 2])
        assert sub.m == 2 and mapping == [0, 1, 2]

    def test_symmetry_enforced(self):
        with pytest.raises(ContractError):
            IntersectionGraph(2, (0b10, 0b00), ("a", "b"))

    def test_edge_list_round_trip(self):
        g = C(6)
        text = format_edge_list(g)
        g2 = parse_edge_list(text)
        assert format_edge_list(g2) == text
        assert text.splitlines()[0] == "6 6"

    def test_edge_list_malformed(self):
        from curvefam.errors import FileFormatError

        with pytest.raises(FileFormatError):
            parse_edge_list("3 1\n0 5\n")
        with pytest.raises(FileFormatError):
            parse_edge_list("")
