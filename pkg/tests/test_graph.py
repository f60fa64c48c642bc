from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypergraphx.errors import (
    ArcGraphError,
    CircleGraphError,
    DanglingEndpointError,
    DegenerateGraphError,
    DisconnectedGraphError,
    DuplicateIdentifierError,
    GraphSyntaxError,
    NotAnEndpointError,
    NotOrdinaryError,
    PointNotInGraphError,
)
from hypergraphx.families import build_example, build_pi
from hypergraphx.graph import (
    EdgePoint,
    PointClass,
    Shape,
    TopoGraph,
    Vertex,
    neighbor_vertex,
    normalize,
    parse_graph,
    parse_landmarks,
    point_class,
    point_order,
    serialize_graph,
    sigma,
    subdivide,
)

from .conftest import connected_graphs, graph_points

TRIOD = "vertex c; vertex x; vertex y; vertex z; edge e1 c x; edge e2 c y; edge e3 c z"


def order_by_subdivision(g: TopoGraph, p) -> int:
    """Independent order count: distinct neighbours in the 3-fold subdivision (a simple graph)."""
    r = subdivide(g, 3)
    v = r.map_point(p)
    if isinstance(v, EdgePoint):  # interior of a middle segment
        return 2
    nbrs = set()
    for e in r.graph.edges:
        if e.u == v.id:
            nbrs.add(e.v)
        if e.v == v.id:
            nbrs.add(e.u)
    return len(nbrs)


class TestParse:
    def test_arc(self):
        g = parse_graph("vertex a; vertex b; edge e a b")
        assert g.vertices == ("a", "b")
        assert [(e.id, e.u, e.v) for e in g.edges] == [("e", "a", "b")]

    def test_loop_is_a_circle(self):
        g = parse_graph("vertex a; edge l a a")
        assert g.edges[0].is_loop
        assert normalize(g).shape is Shape.CIRCLE

    def test_comments_and_lines(self):
        g = parse_graph("# header\nvertex a  # trailing\n\nvertex b\nedge e a b\n")
        assert len(g.edges) == 1

    def test_dangling_endpoint(self):
        with pytest.raises(DanglingEndpointError):
            parse_graph("vertex a\nedge e a b\n")

    def test_duplicate_identifier(self):
        with pytest.raises(DuplicateIdentifierError):
            parse_graph("vertex a\nvertex a\nedge e a a\n")

    def test_vertex_and_edge_share_namespace(self):
        with pytest.raises(DuplicateIdentifierError):
            parse_graph("vertex a\nedge a a a\n")

    def test_disconnected(self):
        with pytest.raises(DisconnectedGraphError):
            parse_graph("vertex a\nvertex b\nedge l a a\nedge m b b\n")

    def test_syntax_error_carries_position(self):
        with pytest.raises(GraphSyntaxError) as info:
            parse_graph("vertex a\n  edge e a\n")
        assert (info.value.line, info.value.column) == (2, 3)

    def test_bad_identifier(self):
        with pytest.raises(GraphSyntaxError) as info:
            parse_graph("vertex a-b\n")
        assert info.value.column == 8

    def test_unknown_keyword(self):
        with pytest.raises(GraphSyntaxError):
            parse_graph("node a\n")

    def test_zero_edges_rejected(self):
        with pytest.raises(DegenerateGraphError):
            parse_graph("vertex a\n")

    def test_error_kinds_are_distinct(self):
        kinds = {DanglingEndpointError, DuplicateIdentifierError, DisconnectedGraphError, GraphSyntaxError}
        assert len(kinds) == 4 and not any(issubclass(a, b) for a in kinds for b in kinds if a is not b)

    def test_round_trip_with_landmarks(self):
        fg = build_example()
        text = serialize_graph(fg.graph, fg.landmarks, "example")
        assert parse_graph(text) == fg.graph
        assert parse_landmarks(text) == fg.landmarks


class TestLocalInvariants:
    def test_triod_orders_and_classes(self):
        g = parse_graph(TRIOD)
        assert point_order(g, Vertex("c")) == 3
        assert point_class(g, Vertex("c")) is PointClass.RAMIFICATION
        assert point_class(g, Vertex("x")) is PointClass.END
        assert point_order(g, EdgePoint("e1", Fraction(1, 3))) == 2

    def test_circle_point_is_ordinary(self):
        g = parse_graph("vertex a; edge l a a")
        assert point_class(g, Vertex("a")) is PointClass.ORDINARY
        assert point_class(g, EdgePoint("l", Fraction(1, 2))) is PointClass.ORDINARY

    def test_loop_vertex_of_p1(self):
        g = build_pi(1).graph
        assert point_order(g, Vertex("a2")) == 5
        assert order_by_subdivision(g, Vertex("a2")) == 5

    def test_missing_point(self):
        g = parse_graph(TRIOD)
        with pytest.raises(PointNotInGraphError):
            point_order(g, Vertex("nope"))
        with pytest.raises(PointNotInGraphError):
            point_order(g, EdgePoint("nope", Fraction(1, 2)))

    def test_edge_parameter_must_be_interior(self):
        with pytest.raises(ValueError):
            EdgePoint("e", Fraction(1))

    @settings(max_examples=150, deadline=None)
    @given(st.data())
    def test_order_matches_subdivision_count(self, data):
        g = data.draw(connected_graphs())
        p = data.draw(graph_points(g))
        assert point_order(g, p) == order_by_subdivision(g, p)


class TestNormalize:
    def test_path_becomes_arc(self):
        ng = normalize(parse_graph("vertex a; vertex b; vertex c; edge x a b; edge y b c"))
        assert ng.shape is Shape.ARC
        assert [(e.u, e.v) for e in ng.graph.edges] == [("a", "c")]

    def test_triangle_becomes_circle(self):
        ng = normalize(parse_graph("vertex a; vertex b; vertex c; edge x a b; edge y b c; edge z c a"))
        assert ng.shape is Shape.CIRCLE
        assert len(ng.graph.edges) == 1

    def test_p3_orders(self):
        ng = normalize(build_pi(3).graph)
        assert ng.shape is Shape.GENERAL
        assert len(ng.graph.vertices) == 5
        assert ng.graph.order("a1") == 4 and ng.graph.order("a2") == 5

    def test_point_mapping_through_chain(self):
        g = parse_graph("vertex a; vertex b; vertex c; edge x a b; edge y b c")
        ng = normalize(g)
        q = ng.map_point(Vertex("b"))
        assert isinstance(q, EdgePoint) and q.t == Fraction(1, 2)

    @settings(max_examples=150, deadline=None)
    @given(connected_graphs())
    def test_idempotent_and_orders_clean(self, g):
        ng = normalize(g)
        again = normalize(ng.graph)
        assert again.graph == ng.graph and again.shape is ng.shape
        if ng.shape is Shape.GENERAL:
            assert all(ng.graph.order(v) != 2 for v in ng.graph.vertices)

    @settings(max_examples=150, deadline=None)
    @given(st.data())
    def test_order_survives_normalize_and_subdivide(self, data):
        g = data.draw(connected_graphs())
        p = data.draw(graph_points(g))
        n = point_order(g, p)
        ng = normalize(g)
        if ng.shape is not Shape.CIRCLE:
            assert point_order(ng.graph, ng.map_point(p)) == n
        r = subdivide(g, 2)
        assert point_order(r.graph, r.map_point(p)) == n

    @settings(max_examples=150, deadline=None)
    @given(connected_graphs())
    def test_shape_tags_match_definitions(self, g):
        orders = [g.order(v) for v in g.vertices]
        shape = normalize(g).shape
        is_circle = all(n == 2 for n in orders)
        is_arc = orders.count(1) == 2 and max(orders) <= 2
        assert (shape is Shape.CIRCLE) == is_circle
        assert (shape is Shape.ARC) == is_arc


class TestNeighborAndSigma:
    def test_triod_tip(self):
        assert neighbor_vertex(parse_graph(TRIOD), Vertex("x")) == (Vertex("c"), 3)

    def test_p3_tip(self):
        assert neighbor_vertex(build_pi(3).graph, Vertex("t1_1")) == (Vertex("a1"), 4)

    def test_walks_through_order_two(self):
        g = parse_graph(TRIOD + "; vertex w; edge f x w")
        assert neighbor_vertex(g, Vertex("w")) == (Vertex("c"), 3)

    def test_arc_endpoint_rejected(self):
        with pytest.raises(ArcGraphError):
            neighbor_vertex(parse_graph("vertex a; vertex b; edge e a b"), Vertex("a"))

    def test_not_an_endpoint(self):
        with pytest.raises(NotAnEndpointError):
            neighbor_vertex(parse_graph(TRIOD), Vertex("c"))

    def test_sigma_values(self):
        half = Fraction(1, 2)
        assert sigma(parse_graph("vertex a; vertex b; edge e a b"), EdgePoint("e", half)) == (2, False)
        assert sigma(build_pi(1).graph, EdgePoint("C2", half)) == (5, True)
        assert sigma(build_example().graph, EdgePoint("L", half)) == (6, False)

    def test_sigma_errors(self):
        with pytest.raises(CircleGraphError):
            sigma(parse_graph("vertex a; edge l a a"), EdgePoint("l", Fraction(1, 2)))
        with pytest.raises(NotOrdinaryError):
            sigma(parse_graph(TRIOD), Vertex("c"))

    def test_sigma_independent_of_names(self):
        g = parse_graph("vertex P; vertex Q; vertex R; vertex S; edge k P P; edge m P Q; edge n Q R; edge o Q S")
        assert sigma(g, EdgePoint("m", Fraction(1, 3))) == (6, False)

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_sigma_and_neighbor_stable_under_subdivision(self, data):
        g = data.draw(connected_graphs())
        p = data.draw(graph_points(g))
        ng = normalize(g)
        r = subdivide(g, 3)
        q = r.map_point(p)
        cls = point_class(g, p)
        if cls is PointClass.ORDINARY and ng.shape is not Shape.CIRCLE:
            assert sigma(g, p) == sigma(r.graph, q)
        if cls is PointClass.END and ng.shape is not Shape.ARC:
            assert neighbor_vertex(g, p) == neighbor_vertex(r.graph, q)


class TestSubdivide:
    def test_loop_to_triangle(self):
        r = subdivide(parse_graph("vertex a; edge l a a"), 3)
        assert len(r.graph.edges) == 3 and len(r.graph.vertices) == 3
        assert not any(e.is_loop for e in r.graph.edges)

    def test_arc_to_path(self):
        r = subdivide(parse_graph("vertex a; vertex b; edge e a b"), 2)
        assert len(r.graph.edges) == 2

    def test_triod_nine_edges(self):
        r = subdivide(parse_graph(TRIOD), 3)
        assert len(r.graph.edges) == 9
        assert r.graph.order("c") == 3

    def test_point_mapping(self):
        r = subdivide(parse_graph("vertex a; vertex b; edge e a b"), 3)
        assert isinstance(r.map_point(EdgePoint("e", Fraction(1, 3))), Vertex)
        mid = r.map_point(EdgePoint("e", Fraction(1, 2)))
        assert isinstance(mid, EdgePoint) and mid.t == Fraction(1, 2)
