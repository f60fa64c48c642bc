"""Exhaustive enumeration of small connected multigraphs up to isomorphism.

Every connected multigraph arises by adding edges one at a time, each new edge
touching the vertices already present: a loop, an edge between two existing
vertices, or a pendant edge to a fresh vertex.  Duplicates are removed level by
level with an isomorphism test inside buckets of equal refinement invariants.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache

from .graph import Edge, NormalizedGraph, TopoGraph, normalize
from .symmetry import _Multigraph, _refine, _relabel, find_isomorphism


def _invariant(g: TopoGraph) -> tuple:
    mg = _Multigraph.of(g)
    colors = _refine(list(g.vertices), mg.adj, _relabel({v: mg.loops[v] for v in g.vertices}))
    return (len(g.vertices), len(g.edges), tuple(sorted(Counter(colors.values()).items())),
            tuple(sorted((g.order(v), mg.loops[v]) for v in g.vertices)))


class _Dedup:
    def __init__(self) -> None:
        self.buckets: dict[tuple, list[tuple[TopoGraph, _Multigraph]]] = {}
        self.items: list[TopoGraph] = []

    def add(self, g: TopoGraph) -> bool:
        key = _invariant(g)
        mg = _Multigraph.of(g)
        bucket = self.buckets.setdefault(key, [])
        for _, other in bucket:
            if find_isomorphism(mg, other) is not None:
                return False
        bucket.append((g, mg))
        self.items.append(g)
        return True


def _extensions(g: TopoGraph):
    n, m = len(g.vertices), len(g.edges)
    eid = f"e{m}"
    for i, u in enumerate(g.vertices):
        yield TopoGraph(g.vertices, g.edges + (Edge(eid, u, u),))
        for w in g.vertices[i + 1:]:
            yield TopoGraph(g.vertices, g.edges + (Edge(eid, u, w),))
        fresh = f"v{n}"
        yield TopoGraph(g.vertices + (fresh,), g.edges + (Edge(eid, u, fresh),))


@lru_cache(maxsize=None)
def _levels(max_edges: int) -> tuple[tuple[TopoGraph, ...], ...]:
    start = _Dedup()
    start.add(TopoGraph(("v0",), (Edge("e0", "v0", "v0"),)))
    start.add(TopoGraph(("v0", "v1"), (Edge("e0", "v0", "v1"),)))
    levels = [tuple(start.items)]
    for _ in range(1, max_edges):
        nxt = _Dedup()
        for g in levels[-1]:
            for h in _extensions(g):
                nxt.add(h)
        levels.append(tuple(nxt.items))
    return tuple(levels)


def connected_multigraphs(max_edges: int) -> list[TopoGraph]:
    """All connected multigraphs with 1..max_edges edges, one per isomorphism class."""
    if max_edges < 1:
        return []
    return [g for level in _levels(max_edges) for g in level]


@lru_cache(maxsize=None)
def _normalized(max_edges: int) -> tuple[NormalizedGraph, ...]:
    seen = _Dedup()
    out = []
    for g in connected_multigraphs(max_edges):
        ng = normalize(g)
        if seen.add(ng.graph):
            out.append(ng)
    return tuple(out)


def normalized_corpus(max_edges: int) -> list[NormalizedGraph]:
    """Distinct normalized graphs (circle and arc included) with at most ``max_edges`` edges."""
    return list(_normalized(max_edges))
