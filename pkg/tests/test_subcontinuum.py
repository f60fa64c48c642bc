from __future__ import annotations

import math
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypergraphx.errors import InvalidSubcontinuumError, PointNotInSubcontinuumError
from hypergraphx.families import build_example, build_pi
from hypergraphx.graph import EdgePoint, PointClass, Shape, TopoGraph, Vertex, normalize, parse_graph, point_class, point_order
from hypergraphx.subcontinuum import (
    Spanning,
    Stub,
    WithinEdge,
    cell_dimension_at,
    complement_components,
    contains_point,
    decompose_at_point,
    kod_core_number,
    random_subcontinuum,
    sample_subcontinua,
    subcontinuum_from_json,
    validate,
)
from hypergraphx.errors import BudgetExceeded

from .conftest import connected_graphs, graph_points

HALF = Fraction(1, 2)
TRIOD = parse_graph("vertex c; vertex x; vertex y; vertex z; edge e1 c x; edge e2 c y; edge e3 c z")
CIRCLE = parse_graph("vertex a; edge l a a")
ARC = parse_graph("vertex a; vertex b; edge e a b")


def _breakpoints(A) -> list[Fraction]:
    if isinstance(A, WithinEdge):
        return [A.a, A.b]
    return [s.length for s in A.stubs] + [1 - s.length for s in A.stubs]


def grid_complement_count(g: TopoGraph, A) -> int:
    """Oracle: cut every edge on a grid fine enough for A's endpoints, then count components."""
    den = math.lcm(*(Fraction(t).denominator for t in _breakpoints(A) + [Fraction(1)]))
    G = nx.Graph()
    for v in g.vertices:
        if not contains_point(g, A, Vertex(v)):
            G.add_node(("v", v))
    for e in g.edges:
        def node(j):
            if j == 0:
                return ("v", e.u), Vertex(e.u)
            if j == den:
                return ("v", e.v), Vertex(e.v)
            return ("p", e.id, j), EdgePoint(e.id, Fraction(j, den))

        for j in range(den):
            cell = ("c", e.id, j)
            if contains_point(g, A, EdgePoint(e.id, Fraction(2 * j + 1, 2 * den))):
                continue
            G.add_node(cell)
            for end in (j, j + 1):
                name, pt = node(end)
                if not contains_point(g, A, pt):
                    G.add_edge(cell, name)
    return nx.number_connected_components(G)


class TestMembership:
    def test_single_point(self):
        assert contains_point(ARC, WithinEdge("e", HALF, HALF), EdgePoint("e", HALF))

    def test_core_vertex(self):
        assert contains_point(TRIOD, Spanning(frozenset({"c"})), Vertex("c"))

    def test_stub_boundary(self):
        A = Spanning(frozenset({"a"}), stubs=(Stub("e", "u", Fraction(1, 3)),))
        assert not contains_point(ARC, A, EdgePoint("e", HALF))
        assert contains_point(ARC, A, EdgePoint("e", Fraction(1, 3)))

    def test_stub_from_v_end(self):
        A = Spanning(frozenset({"b"}), stubs=(Stub("e", "v", Fraction(1, 3)),))
        assert contains_point(ARC, A, EdgePoint("e", Fraction(3, 4)))
        assert not contains_point(ARC, A, EdgePoint("e", Fraction(1, 2)))

    def test_invalid_representations(self):
        with pytest.raises(InvalidSubcontinuumError):
            WithinEdge("e", Fraction(2, 3), Fraction(1, 3))
        with pytest.raises(InvalidSubcontinuumError):
            Stub("e", "u", Fraction(1))
        bad_anchor = Spanning(frozenset({"a"}), stubs=(Stub("e", "v", HALF),))
        with pytest.raises(InvalidSubcontinuumError):
            validate(ARC, bad_anchor)
        with pytest.raises(InvalidSubcontinuumError):
            validate(TRIOD, Spanning(frozenset({"x", "y"})))
        overlap = Spanning(frozenset({"a", "b"}), stubs=(Stub("e", "u", HALF), Stub("e", "v", HALF)))
        with pytest.raises(InvalidSubcontinuumError):
            validate(ARC, overlap)

    def test_json_round_trip(self):
        A = Spanning(frozenset({"a", "q"}), frozenset({"L"}), (Stub("J1", "u", Fraction(2, 5)),))
        assert subcontinuum_from_json(A.to_json()) == A
        B = WithinEdge("S", Fraction(1, 4), Fraction(3, 4))
        assert subcontinuum_from_json(B.to_json()) == B


class TestComplement:
    def test_circle_minus_arc(self):
        assert len(complement_components(CIRCLE, WithinEdge("l", Fraction(1, 4), Fraction(3, 4)))) == 1

    def test_triod_minus_center(self):
        assert len(complement_components(TRIOD, Spanning(frozenset({"c"})))) == 3

    def test_example_core_segment(self):
        g = build_example().graph
        comps = complement_components(g, Spanning(frozenset({"a", "q"}), frozenset({"L"})))
        assert len(comps) == 3
        assert sorted(p[0] for c in comps for p in c.pieces) == ["J1", "J2", "S"]

    def test_piece_description(self):
        comps = complement_components(ARC, WithinEdge("e", Fraction(1, 3), Fraction(2, 3)))
        assert [c.vertices for c in comps] == [("a",), ("b",)]
        assert [c.pieces for c in comps] == [(("e", 0, Fraction(1, 3)),), (("e", Fraction(2, 3), 1),)]

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_matches_grid_oracle(self, data):
        g = data.draw(connected_graphs(max_vertices=5, max_edges=6))
        p = data.draw(graph_points(g))
        A = random_subcontinuum(g, p, random.Random(data.draw(st.integers(0, 10**6))))
        assert len(complement_components(g, A)) == grid_complement_count(g, A)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10**6))
    def test_circle_and_arc_bounds(self, seed):
        rng = random.Random(seed)
        for g, bound in ((CIRCLE, 1), (ARC, 2)):
            p = rng.choice([Vertex(g.vertices[0]), EdgePoint(g.edges[0].id, Fraction(rng.randint(1, 6), 7))])
            assert len(complement_components(g, random_subcontinuum(g, p, rng))) <= bound


class TestKappa:
    def test_triod_center(self):
        assert kod_core_number(TRIOD, Vertex("c")).kappa == 3

    def test_circle(self):
        assert kod_core_number(CIRCLE, EdgePoint("l", HALF)).kappa == 1

    def test_example_point_on_segment(self):
        res = kod_core_number(build_example().graph, EdgePoint("L", HALF))
        assert res.kappa == 3
        assert len(complement_components(build_example().graph, res.witness)) == 3

    def test_budget_guard(self):
        with pytest.raises(BudgetExceeded):
            kod_core_number(build_pi(5).graph, Vertex("a1"), max_edges=12)

    def test_deterministic_witness(self):
        g = build_example().graph
        assert kod_core_number(g, Vertex("q")) == kod_core_number(g, Vertex("q"))

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_dominates_point_and_samples(self, data):
        g = data.draw(connected_graphs(max_vertices=4, max_edges=4))
        p = data.draw(graph_points(g))
        k = kod_core_number(g, p).kappa
        single = WithinEdge(p.edge, p.t, p.t) if isinstance(p, EdgePoint) else Spanning(frozenset({p.id}))
        assert k >= len(complement_components(g, single))
        for A in sample_subcontinua(g, p, 10, seed=data.draw(st.integers(0, 99))):
            assert len(complement_components(g, A)) <= k


class TestDecomposition:
    def test_point_subcontinuum(self):
        d = decompose_at_point(TRIOD, Vertex("c"), Spanning(frozenset({"c"})))
        assert (d.l, d.m, d.k, d.r) == (0, 0, 0, 3)
        assert cell_dimension_at(TRIOD, Vertex("c"), Spanning(frozenset({"c"}))) == 3

    def test_whole_triod(self):
        A = Spanning(frozenset(TRIOD.vertices), frozenset({"e1", "e2", "e3"}))
        d = decompose_at_point(TRIOD, Vertex("c"), A)
        assert (d.l, d.m, d.k, d.r) == (0, 0, 3, 0)
        assert cell_dimension_at(TRIOD, Vertex("c"), A) == 3

    def test_loop_component(self):
        g = build_pi(1).graph
        A = Spanning(frozenset({"a2"}), frozenset({"C2"}))
        d = decompose_at_point(g, Vertex("a2"), A)
        assert (d.l, d.m, d.k, d.r) == (1, 2, 0, 3)
        assert cell_dimension_at(g, Vertex("a2"), A) == 6

    def test_point_outside(self):
        with pytest.raises(PointNotInSubcontinuumError):
            decompose_at_point(TRIOD, Vertex("x"), Spanning(frozenset({"c"})))

    def test_end_and_ordinary_dimensions(self):
        A = Spanning(frozenset(TRIOD.vertices), frozenset({"e1", "e2", "e3"}))
        assert cell_dimension_at(TRIOD, Vertex("x"), A) == 1
        assert cell_dimension_at(TRIOD, EdgePoint("e1", HALF), A) == 2

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_counts_and_guarantee(self, data):
        g = data.draw(connected_graphs())
        p = data.draw(graph_points(g))
        A = random_subcontinuum(g, p, random.Random(data.draw(st.integers(0, 10**6))))
        d = decompose_at_point(g, p, A)
        n = point_order(g, p)
        assert min(d.l, d.m, d.k, d.r) >= 0
        assert d.m >= 2 * d.l and d.m + d.k + d.r == n
        if point_class(g, p) is PointClass.RAMIFICATION:
            dim = cell_dimension_at(g, p, A)
            assert dim == n + d.m - d.l >= n


def test_samples_contain_the_point():
    g = build_example().graph
    for p in (Vertex("a"), EdgePoint("S", Fraction(1, 3))):
        samples = sample_subcontinua(g, p, 50, seed=3)
        assert len(samples) == 50
        for A in samples:
            validate(g, A)
            assert contains_point(g, A, p)
    assert sample_subcontinua(g, Vertex("a"), 20, seed=1) == sample_subcontinua(g, Vertex("a"), 20, seed=1)
