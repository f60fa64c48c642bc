from __future__ import annotations

from collections import Counter

from hypergraphx.corpus import connected_multigraphs, normalized_corpus
from hypergraphx.graph import Shape
from hypergraphx.symmetry import _Multigraph, find_isomorphism

# connected multigraphs with loops allowed, by edge count
KNOWN_COUNTS = [2, 4, 11, 30, 95]


def test_counts_per_edge_number():
    counts = Counter(len(g.edges) for g in connected_multigraphs(5))
    assert [counts[m] for m in range(1, 6)] == KNOWN_COUNTS


def test_no_duplicates():
    graphs = connected_multigraphs(4)
    for i, g in enumerate(graphs):
        for h in graphs[i + 1:]:
            if len(g.edges) == len(h.edges) and len(g.vertices) == len(h.vertices):
                assert find_isomorphism(_Multigraph.of(g), _Multigraph.of(h), []) is None


def test_normalized_corpus():
    corpus = normalized_corpus(5)
    assert len(corpus) == 63
    shapes = Counter(ng.shape for ng in corpus)
    assert shapes[Shape.CIRCLE] == 1 and shapes[Shape.ARC] == 1
    for ng in corpus:
        if ng.shape is Shape.GENERAL:
            assert all(ng.graph.order(v) != 2 for v in ng.graph.vertices)


def test_zero_edges():
    assert connected_multigraphs(0) == []
