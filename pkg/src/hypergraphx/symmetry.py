"""Automorphisms of normalized graphs and the point orbits they induce.

Self-homeomorphisms of a finite graph (other than an arc or a circle) are
exactly the automorphisms of its normalized multigraph, where a loop may be
traversed either way.  Interior points of one edge form a single orbit, so the
point orbits are the vertex orbits plus one orbit per edge orbit.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterator, Mapping, Sequence

from .errors import BudgetExceeded
from .graph import Edge, NormalizedGraph, Shape, TopoGraph, normalize, suppress_keeping

DEFAULT_SEARCH_NODES = 2_000_000
DEFAULT_MAX_AUTOMORPHISMS = 200_000


class SearchBudget:
    """Counts search nodes across one analysis and raises when the cap is hit."""

    def __init__(self, nodes: int = DEFAULT_SEARCH_NODES):
        self.limit = nodes
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded(f"search exceeded {self.limit} nodes")


@dataclass(frozen=True)
class GraphAutomorphism:
    """Vertex bijection plus edge bijection with orientation flags.

    ``reversed`` on an edge means its ``u`` end goes to the image's ``v`` end.
    """

    vertex_map: tuple[tuple[str, str], ...]
    edge_map: tuple[tuple[str, str, bool], ...]

    def vertex(self, v: str) -> str:
        return dict(self.vertex_map)[v]

    def edge(self, e: str) -> tuple[str, bool]:
        for eid, image, rev in self.edge_map:
            if eid == e:
                return image, rev
        raise KeyError(e)

    def compose(self, other: GraphAutomorphism) -> GraphAutomorphism:
        """``self`` after ``other``."""
        vm = dict(self.vertex_map)
        em = {e: (f, r) for e, f, r in self.edge_map}
        vertices = tuple((v, vm[w]) for v, w in other.vertex_map)
        edges = []
        for e, f, r in other.edge_map:
            g, r2 = em[f]
            edges.append((e, g, r != r2))
        return GraphAutomorphism(vertices, tuple(edges))

    def inverse(self) -> GraphAutomorphism:
        vertices = tuple(sorted((w, v) for v, w in self.vertex_map))
        order = {e: i for i, (e, _, _) in enumerate(self.edge_map)}
        edges = sorted(((f, e, r) for e, f, r in self.edge_map), key=lambda x: order[x[0]])
        return GraphAutomorphism(vertices, tuple(edges))

    def is_identity(self) -> bool:
        return all(v == w for v, w in self.vertex_map) and all(
            e == f and not r for e, f, r in self.edge_map
        )

    def preserves(self, g: TopoGraph) -> bool:
        vm = dict(self.vertex_map)
        if sorted(vm) != sorted(g.vertices) or sorted(vm.values()) != sorted(g.vertices):
            return False
        images = [f for _, f, _ in self.edge_map]
        if sorted(images) != sorted(e.id for e in g.edges) or len(self.edge_map) != len(g.edges):
            return False
        for e, f, r in self.edge_map:
            src, dst = g.edge(e), g.edge(f)
            if src.is_loop != dst.is_loop:
                return False
            want = (dst.v, dst.u) if r else (dst.u, dst.v)
            if (vm[src.u], vm[src.v]) != want:
                return False
        return True


class _Multigraph:
    """Loop counts and pair multiplicities; the data the search looks at."""

    def __init__(self, vertices: Sequence[Hashable], edges: Sequence[Edge], labels: Mapping | None = None):
        self.vertices = list(vertices)
        self.labels = {v: (labels or {}).get(v, "") for v in self.vertices}
        self.loops = Counter()
        self.mult: Counter = Counter()
        for e in edges:
            if e.is_loop:
                self.loops[e.u] += 1
            else:
                self.mult[frozenset((e.u, e.v))] += 1
        self.adj: dict = {v: [] for v in self.vertices}
        for pair, m in self.mult.items():
            a, b = tuple(pair)
            self.adj[a].append((b, m))
            self.adj[b].append((a, m))

    @classmethod
    def of(cls, g: TopoGraph, labels: Mapping | None = None) -> _Multigraph:
        return cls(g.vertices, g.edges, labels)


def _refine(nodes: list, adj: Mapping, colors: dict) -> dict:
    """Colour refinement to the coarsest equitable partition finer than ``colors``."""
    n_classes = len(set(colors.values()))
    while True:
        sigs = {v: (colors[v], tuple(sorted((colors[w], m) for w, m in adj[v]))) for v in nodes}
        palette = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
        colors = {v: palette[sigs[v]] for v in nodes}
        if len(palette) == n_classes:
            return colors
        n_classes = len(palette)


def _relabel(values: dict) -> dict:
    palette = {s: i for i, s in enumerate(sorted(set(values.values()), key=repr))}
    return {v: palette[s] for v, s in values.items()}


def _isomorphisms(
    left: _Multigraph,
    right: _Multigraph,
    pairs: Sequence[tuple] = (),
    budget: SearchBudget | None = None,
) -> Iterator[dict]:
    """Vertex bijections ``left -> right`` preserving labels, loops and multiplicities.

    Individualization-refinement: after each forced pair the colouring of the
    disjoint union is refined; unequal colour histograms prune the branch.
    Every isomorphism extending ``pairs`` is produced exactly once.
    """
    if len(left.vertices) != len(right.vertices):
        return
    budget = budget or SearchBudget()
    nodes = [("L", v) for v in left.vertices] + [("R", v) for v in right.vertices]
    adj = {("L", v): [(("L", w), m) for w, m in left.adj[v]] for v in left.vertices}
    adj.update({("R", v): [(("R", w), m) for w, m in right.adj[v]] for v in right.vertices})

    def rec(assign: list[tuple]) -> Iterator[dict]:
        budget.tick()
        li = {v: i for i, (v, _) in enumerate(assign)}
        ri = {w: i for i, (_, w) in enumerate(assign)}
        if len(li) != len(assign) or len(ri) != len(assign):
            return
        init = {("L", v): (left.labels[v], left.loops[v], li.get(v, -1)) for v in left.vertices}
        init.update({("R", v): (right.labels[v], right.loops[v], ri.get(v, -1)) for v in right.vertices})
        colors = _refine(nodes, adj, _relabel(init))
        cells_l: dict[int, list] = {}
        cells_r: dict[int, list] = {}
        for v in left.vertices:
            cells_l.setdefault(colors[("L", v)], []).append(v)
        for v in right.vertices:
            cells_r.setdefault(colors[("R", v)], []).append(v)
        if {c: len(x) for c, x in cells_l.items()} != {c: len(x) for c, x in cells_r.items()}:
            return
        open_cells = [c for c in sorted(cells_l) if len(cells_l[c]) > 1]
        if not open_cells:
            sigma = {cells_l[c][0]: cells_r[c][0] for c in cells_l}
            if _is_isomorphism(left, right, sigma):
                yield sigma
            return
        c = open_cells[0]
        v = cells_l[c][0]
        for w in cells_r[c]:
            yield from rec(assign + [(v, w)])

    yield from rec(list(pairs))


def _is_isomorphism(left: _Multigraph, right: _Multigraph, sigma: dict) -> bool:
    for v, w in sigma.items():
        if left.labels[v] != right.labels[w] or left.loops[v] != right.loops[w]:
            return False
    if len(left.mult) != len(right.mult):
        return False
    for pair, m in left.mult.items():
        a, b = tuple(pair)
        if right.mult.get(frozenset((sigma[a], sigma[b])), 0) != m:
            return False
    return True


def find_isomorphism(left: _Multigraph, right: _Multigraph, pairs=(), budget=None) -> dict | None:
    forced: dict = {}
    for v, w in pairs:
        if forced.setdefault(v, w) != w:
            return None
    if len(set(forced.values())) != len(forced):
        return None
    return next(_isomorphisms(left, right, list(forced.items()), budget), None)


def _graph_of(ng: NormalizedGraph | TopoGraph) -> TopoGraph:
    return ng.graph if isinstance(ng, NormalizedGraph) else ng


def _edge_classes(g: TopoGraph) -> dict[tuple, list[Edge]]:
    classes: dict[tuple, list[Edge]] = {}
    for e in g.edges:
        key = (e.u,) if e.is_loop else tuple(sorted((e.u, e.v)))
        classes.setdefault(key, []).append(e)
    return classes


def _completions(g: TopoGraph, sigma: dict) -> Iterator[GraphAutomorphism]:
    """All edge bijections compatible with the vertex bijection ``sigma``."""
    classes = _edge_classes(g)
    vertex_map = tuple((v, sigma[v]) for v in g.vertices)
    choices = []
    for key, edges in classes.items():
        target_key = (sigma[key[0]],) if len(key) == 1 else tuple(sorted(sigma[x] for x in key))
        targets = classes[target_key]
        options = []
        for perm in itertools.permutations(targets):
            if len(key) == 1:
                for flips in itertools.product((False, True), repeat=len(edges)):
                    options.append(tuple((e.id, f.id, r) for e, f, r in zip(edges, perm, flips)))
            else:
                options.append(tuple((e.id, f.id, sigma[e.u] != f.u) for e, f in zip(edges, perm)))
        choices.append(options)
    order = {e.id: i for i, e in enumerate(g.edges)}
    for combo in itertools.product(*choices):
        edge_map = sorted((m for part in combo for m in part), key=lambda x: order[x[0]])
        yield GraphAutomorphism(vertex_map, tuple(edge_map))


def _completion_count(g: TopoGraph) -> int:
    total = 1
    for key, edges in _edge_classes(g).items():
        total *= math.factorial(len(edges)) * (2 ** len(edges) if len(key) == 1 else 1)
    return total


def automorphisms(
    ng: NormalizedGraph | TopoGraph,
    budget: SearchBudget | None = None,
    max_count: int = DEFAULT_MAX_AUTOMORPHISMS,
) -> list[GraphAutomorphism]:
    """The full automorphism group of the (normalized) multigraph."""
    g = _graph_of(ng)
    mg = _Multigraph.of(g)
    per_vertex_map = _completion_count(g)
    out: list[GraphAutomorphism] = []
    for sigma in _isomorphisms(mg, mg, budget=budget):
        if len(out) + per_vertex_map > max_count:
            raise BudgetExceeded(f"automorphism group has more than {max_count} elements")
        out.extend(_completions(g, sigma))
    return out


def brute_force_automorphisms(
    ng: NormalizedGraph | TopoGraph,
    max_vertices: int = 8,
    max_edges: int = 10,
    max_count: int = DEFAULT_MAX_AUTOMORPHISMS,
) -> list[GraphAutomorphism]:
    """Exhaustive oracle: every vertex permutation times every edge matching."""
    g = _graph_of(ng)
    if len(g.vertices) > max_vertices or len(g.edges) > max_edges:
        raise BudgetExceeded(
            f"brute force limited to {max_vertices} vertices and {max_edges} edges"
        )
    edges = list(g.edges)
    out: list[GraphAutomorphism] = []
    for perm in itertools.permutations(g.vertices):
        sigma = dict(zip(g.vertices, perm))
        chosen: list[tuple[str, str, bool]] = []
        used: set[str] = set()

        def assign(i: int) -> None:
            if i == len(edges):
                if len(out) >= max_count:
                    raise BudgetExceeded(f"more than {max_count} automorphisms")
                out.append(GraphAutomorphism(tuple(sigma.items()), tuple(chosen)))
                return
            e = edges[i]
            for f in edges:
                if f.id in used:
                    continue
                for rev in (False, True):
                    want = (f.v, f.u) if rev else (f.u, f.v)
                    if (sigma[e.u], sigma[e.v]) == want:
                        used.add(f.id)
                        chosen.append((e.id, f.id, rev))
                        assign(i + 1)
                        chosen.pop()
                        used.discard(f.id)

        assign(0)
    return out


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Orbit:
    kind: str  # "vertex" | "edge_interior"
    members: tuple[str, ...]

    @property
    def representative(self) -> str:
        return self.members[0]

    @property
    def label(self) -> str:
        return f"{'vertex' if self.kind == 'vertex' else 'edge'}:{self.representative}"


@dataclass(frozen=True)
class OrbitPartition:
    shape: Shape
    orbits: tuple[Orbit, ...]

    @property
    def degree(self) -> int:
        return len(self.orbits)

    def index_of(self, kind: str, name: str) -> int:
        for i, o in enumerate(self.orbits):
            if o.kind == kind and name in o.members:
                return i
        raise KeyError((kind, name))

    def to_json(self) -> dict:
        return {
            "orbits": [{"representatives": list(o.members), "kind": o.kind} for o in self.orbits],
            "degree": self.degree,
            "shape": self.shape.value,
        }


class _UF:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # keep the earlier item as root so representatives are stable
        if self._rank[ra] > self._rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def rank_by(self, order):
        self._rank = {x: i for i, x in enumerate(order)}
        return self


def _twin_transpositions(mg: _Multigraph) -> list[dict]:
    """Swaps of non-adjacent vertices with identical neighbourhoods."""
    groups: dict[tuple, list] = {}
    for v in mg.vertices:
        key = (mg.labels[v], mg.loops[v], tuple(sorted(mg.adj[v], key=repr)))
        groups.setdefault(key, []).append(v)
    swaps = []
    for members in groups.values():
        for a, b in zip(members, members[1:]):
            if frozenset((a, b)) in mg.mult:
                continue
            sigma = {v: v for v in mg.vertices}
            sigma[a], sigma[b] = b, a
            swaps.append(sigma)
    return swaps


def vertex_and_edge_orbits(
    g: TopoGraph,
    labels: Mapping | None = None,
    budget: SearchBudget | None = None,
) -> tuple[list[list[str]], list[list[str]]]:
    """Orbits of vertices and of edges under the multigraph automorphism group."""
    budget = budget or SearchBudget()
    mg = _Multigraph.of(g, labels)
    v_order = list(g.vertices)
    e_order = [e.id for e in g.edges]
    vuf = _UF(v_order).rank_by(v_order)
    euf = _UF(e_order).rank_by(e_order)
    classes = _edge_classes(g)
    class_of = {}
    for key, edges in classes.items():
        for e in edges:
            class_of[e.id] = key
            euf.union(edges[0].id, e.id)

    def absorb(sigma: dict) -> None:
        for v, w in sigma.items():
            vuf.union(v, w)
        for key, edges in classes.items():
            image = (sigma[key[0]],) if len(key) == 1 else tuple(sorted(sigma[x] for x in key))
            euf.union(edges[0].id, classes[image][0].id)

    for sigma in _twin_transpositions(mg):
        absorb(sigma)

    colors = _refine(list(g.vertices), mg.adj, _relabel({v: (mg.labels[v], mg.loops[v]) for v in g.vertices}))
    by_color: dict[int, list[str]] = {}
    for v in v_order:
        by_color.setdefault(colors[v], []).append(v)
    for members in by_color.values():
        roots: list[str] = []
        for x in members:
            if any(vuf.find(x) == vuf.find(r) for r in roots):
                continue
            for r in roots:
                sigma = find_isomorphism(mg, mg, [(r, x)], budget)
                if sigma is not None:
                    absorb(sigma)
                    break
            else:
                roots.append(x)

    by_shape: dict[tuple, list[Edge]] = {}
    for key, edges in classes.items():
        e = edges[0]
        shape_key = (len(key), len(edges), tuple(sorted(colors[x] for x in key)))
        by_shape.setdefault(shape_key, []).append(e)
    for reps in by_shape.values():
        roots_e: list[Edge] = []
        for f in reps:
            if any(euf.find(f.id) == euf.find(r.id) for r in roots_e):
                continue
            for r in roots_e:
                attempts = [[(r.u, f.u)]] if r.is_loop else [[(r.u, f.u), (r.v, f.v)], [(r.u, f.v), (r.v, f.u)]]
                sigma = None
                for pairs in attempts:
                    sigma = find_isomorphism(mg, mg, pairs, budget)
                    if sigma is not None:
                        break
                if sigma is not None:
                    absorb(sigma)
                    break
            else:
                roots_e.append(f)

    def collect(uf: _UF, order: list[str]) -> list[list[str]]:
        groups: dict[str, list[str]] = {}
        for x in order:
            groups.setdefault(uf.find(x), []).append(x)
        return sorted(groups.values(), key=lambda grp: order.index(grp[0]))

    return collect(vuf, v_order), collect(euf, e_order)


def point_orbits(ng: NormalizedGraph | TopoGraph, budget: SearchBudget | None = None) -> OrbitPartition:
    if isinstance(ng, TopoGraph):
        ng = normalize(ng)
    g = ng.graph
    if ng.shape is Shape.CIRCLE:
        # a circle has no topological vertices: one orbit of ordinary points
        return OrbitPartition(ng.shape, (Orbit("edge_interior", (g.edges[0].id,)),))
    v_orbits, e_orbits = vertex_and_edge_orbits(g, budget=budget)
    orbits = [Orbit("vertex", tuple(o)) for o in v_orbits] + [
        Orbit("edge_interior", tuple(o)) for o in e_orbits
    ]
    return OrbitPartition(ng.shape, tuple(orbits))


def homogeneity_degree(ng: NormalizedGraph | TopoGraph, budget: SearchBudget | None = None) -> int:
    return point_orbits(ng, budget).degree


def rooted_isomorphism(
    g1: TopoGraph,
    root1: str,
    g2: TopoGraph,
    root2: str,
    budget: SearchBudget | None = None,
) -> dict | None:
    """Vertex map of a homeomorphism ``g1 -> g2`` sending ``root1`` to ``root2``.

    Both roots must be vertices.  Order-2 vertices other than the roots are
    suppressed first, so the test is topological.
    """
    h1 = suppress_keeping(g1, [root1])
    h2 = suppress_keeping(g2, [root2])
    m1 = _Multigraph.of(h1, {root1: "root"})
    m2 = _Multigraph.of(h2, {root2: "root"})
    return find_isomorphism(m1, m2, [(root1, root2)], budget)


def constrained_automorphism(
    g: TopoGraph,
    pairs: Sequence[tuple[str, str]],
    budget: SearchBudget | None = None,
) -> dict | None:
    """A vertex automorphism of ``g`` (as a multigraph) extending the vertex pairs."""
    mg = _Multigraph.of(g)
    return find_isomorphism(mg, mg, pairs, budget)
