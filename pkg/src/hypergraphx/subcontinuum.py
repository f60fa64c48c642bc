"""Subcontinua of a finite graph and their combinatorics around a point.

Every subcontinuum is realized exactly by cutting the host graph at the
rational breakpoints of its representation; after the cut it is a
subcomplex, so membership, complement components and local decompositions
reduce to union-find over vertices and segments.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .errors import (
    BudgetExceeded,
    InvalidSubcontinuumError,
    MismatchedGraphError,
    PointNotInSubcontinuumError,
)
from .graph import (
    EdgePoint,
    PointClass,
    PointRef,
    Refinement,
    TopoGraph,
    Vertex,
    point_class,
    point_order,
    refine,
)

DEFAULT_KAPPA_EDGES = 24


@dataclass(frozen=True)
class WithinEdge:
    """The closed interval ``[a, b]`` of one edge; ``a == b`` is a single point."""

    edge: str
    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        a, b = Fraction(self.a), Fraction(self.b)
        if not 0 <= a <= b <= 1:
            raise InvalidSubcontinuumError(f"need 0 <= a <= b <= 1, got [{a}, {b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def to_json(self) -> dict:
        return {"within_edge": {"edge": self.edge, "a": str(self.a), "b": str(self.b)}}


@dataclass(frozen=True, order=True)
class Stub:
    """Closed segment of length ``length`` starting at the ``end`` side of an edge."""

    edge: str
    end: str
    length: Fraction

    def __post_init__(self) -> None:
        length = Fraction(self.length)
        if self.end not in ("u", "v"):
            raise InvalidSubcontinuumError(f"stub end must be 'u' or 'v', got {self.end!r}")
        if not 0 < length < 1:
            raise InvalidSubcontinuumError(f"stub length must lie in (0, 1), got {length}")
        object.__setattr__(self, "length", length)


@dataclass(frozen=True)
class Spanning:
    """Core vertices, full edges between them, and partial stubs at edge ends."""

    vertices: frozenset[str]
    full_edges: frozenset[str] = frozenset()
    stubs: tuple[Stub, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "full_edges", frozenset(self.full_edges))
        object.__setattr__(self, "stubs", tuple(sorted(self.stubs)))

    def to_json(self) -> dict:
        return {
            "spanning": {
                "vertices": sorted(self.vertices),
                "full_edges": sorted(self.full_edges),
                "stubs": [{"edge": s.edge, "end": s.end, "len": str(s.length)} for s in self.stubs],
            }
        }


SubcontinuumRepr = Union[WithinEdge, Spanning]


def subcontinuum_from_json(data: dict) -> SubcontinuumRepr:
    if "within_edge" in data:
        d = data["within_edge"]
        return WithinEdge(d["edge"], Fraction(d["a"]), Fraction(d["b"]))
    d = data["spanning"]
    stubs = tuple(Stub(s["edge"], s["end"], Fraction(s["len"])) for s in d.get("stubs", ()))
    return Spanning(frozenset(d["vertices"]), frozenset(d.get("full_edges", ())), stubs)


def validate(g: TopoGraph, A: SubcontinuumRepr) -> None:
    if isinstance(A, WithinEdge):
        if not g.has_edge(A.edge):
            raise MismatchedGraphError(f"no edge {A.edge!r} in host graph")
        return
    for v in A.vertices:
        if not g.has_vertex(v):
            raise MismatchedGraphError(f"no vertex {v!r} in host graph")
    for eid in A.full_edges | {s.edge for s in A.stubs}:
        if not g.has_edge(eid):
            raise MismatchedGraphError(f"no edge {eid!r} in host graph")
    if not A.vertices:
        raise InvalidSubcontinuumError("spanning subcontinuum needs at least one core vertex")
    for eid in A.full_edges:
        e = g.edge(eid)
        if e.u not in A.vertices or e.v not in A.vertices:
            raise InvalidSubcontinuumError(f"full edge {eid!r} has an endpoint outside the core")
    per_edge: dict[str, list[Stub]] = {}
    for s in A.stubs:
        e = g.edge(s.edge)
        if s.edge in A.full_edges:
            raise InvalidSubcontinuumError(f"edge {s.edge!r} is both full and stubbed")
        if e.end(s.end) not in A.vertices:
            raise InvalidSubcontinuumError(f"stub on {s.edge!r} anchored outside the core")
        per_edge.setdefault(s.edge, []).append(s)
    for eid, stubs in per_edge.items():
        if len({s.end for s in stubs}) != len(stubs):
            raise InvalidSubcontinuumError(f"edge {eid!r} has two stubs at one end")
        if sum(s.length for s in stubs) >= 1:
            raise InvalidSubcontinuumError(f"stubs on {eid!r} overlap; use a full edge")
    # connectivity of core vertices through full edges
    adj: dict[str, set[str]] = {v: set() for v in A.vertices}
    for eid in A.full_edges:
        e = g.edge(eid)
        adj[e.u].add(e.v)
        adj[e.v].add(e.u)
    start = min(A.vertices)
    seen = {start}
    stack = [start]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if seen != set(A.vertices):
        raise InvalidSubcontinuumError("core vertices are not connected by full edges")


def _vertex_set(g: TopoGraph, A: SubcontinuumRepr) -> frozenset[str]:
    if isinstance(A, Spanning):
        return A.vertices
    e = g.edge(A.edge)
    out = set()
    if A.a == 0:
        out.add(e.u)
    if A.b == 1:
        out.add(e.v)
    return frozenset(out)


def _intervals(g: TopoGraph, A: SubcontinuumRepr, eid: str, verts: frozenset[str]) -> list[tuple[Fraction, Fraction]]:
    """Closed parameter intervals of edge ``eid`` covered by ``A``."""
    e = g.edge(eid)
    out = []
    if isinstance(A, WithinEdge):
        if A.edge == eid:
            out.append((A.a, A.b))
    else:
        if eid in A.full_edges:
            out.append((Fraction(0), Fraction(1)))
        for s in A.stubs:
            if s.edge == eid:
                out.append((Fraction(0), s.length) if s.end == "u" else (1 - s.length, Fraction(1)))
    if e.u in verts:
        out.append((Fraction(0), Fraction(0)))
    if e.v in verts:
        out.append((Fraction(1), Fraction(1)))
    return out


def _breakpoints(A: SubcontinuumRepr) -> dict[str, set[Fraction]]:
    cuts: dict[str, set[Fraction]] = {}
    if isinstance(A, WithinEdge):
        cuts[A.edge] = {t for t in (A.a, A.b) if 0 < t < 1}
    else:
        for s in A.stubs:
            cuts.setdefault(s.edge, set()).add(s.length if s.end == "u" else 1 - s.length)
    return cuts


def _member(g: TopoGraph, A: SubcontinuumRepr, verts: frozenset[str], p: PointRef) -> bool:
    if isinstance(p, Vertex):
        return p.id in verts
    return any(a <= p.t <= b for a, b in _intervals(g, A, p.edge, verts))


def contains_point(g: TopoGraph, A: SubcontinuumRepr, p: PointRef) -> bool:
    validate(g, A)
    g.check_point(p)
    return _member(g, A, _vertex_set(g, A), p)


@dataclass(frozen=True)
class Realization:
    """``A`` as a subcomplex of a refinement of the host graph."""

    refinement: Refinement
    vertices: frozenset[str]
    segments: frozenset[str]


def realize(g: TopoGraph, A: SubcontinuumRepr, extra: Iterable[PointRef] = ()) -> Realization:
    validate(g, A)
    cuts = _breakpoints(A)
    for p in extra:
        if isinstance(p, EdgePoint):
            cuts.setdefault(p.edge, set()).add(p.t)
    R = refine(g, cuts)
    verts = _vertex_set(g, A)
    in_vertices = {v for v in R.graph.vertices if _member(g, A, verts, R.vertex_origin(v))}
    in_segments = set()
    for seg in R.graph.edges:
        eid, lo, hi = R.segment_span(seg.id)
        mid = (lo + hi) / 2
        if any(a <= mid <= b for a, b in _intervals(g, A, eid, verts)):
            in_segments.add(seg.id)
    return Realization(R, frozenset(in_vertices), frozenset(in_segments))


class _UnionFind:
    def __init__(self, items: Iterable) -> None:
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def groups(self) -> list[list]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


@dataclass(frozen=True)
class ComplementComponent:
    """One component of ``X - A``: free vertices plus open edge pieces ``(edge, lo, hi)``."""

    vertices: tuple[str, ...]
    pieces: tuple[tuple[str, Fraction, Fraction], ...]

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "pieces": [{"edge": e, "lo": str(lo), "hi": str(hi)} for e, lo, hi in self.pieces],
        }


def complement_components(g: TopoGraph, A: SubcontinuumRepr) -> list[ComplementComponent]:
    """Components of the open set ``X - A``, in deterministic order."""
    real = realize(g, A)
    R = real.refinement
    free_vertices = [v for v in R.graph.vertices if v not in real.vertices]
    open_segments = [s for s in R.graph.edges if s.id not in real.segments]
    uf = _UnionFind([("v", v) for v in free_vertices] + [("s", s.id) for s in open_segments])
    for s in open_segments:
        for x in (s.u, s.v):
            if x not in real.vertices:
                uf.union(("s", s.id), ("v", x))
    originals = set(g.vertices)
    result = []
    for group in uf.groups():
        members = set(group)
        vertices = tuple(sorted(v for kind, v in members if kind == "v" and v in originals))
        pieces = []
        for e in g.edges:
            segs = R.segments[e.id]
            joints = R.cut_vertices[e.id]
            run_start = None
            for j, seg in enumerate(segs):
                if ("s", seg) not in members:
                    continue
                _, lo, hi = R.segment_span(seg)
                if run_start is None:
                    run_start = lo
                if j + 1 < len(segs) and ("v", joints[j]) in members:
                    continue
                pieces.append((e.id, run_start, hi))
                run_start = None
        result.append(ComplementComponent(vertices, tuple(pieces)))
    result.sort(key=lambda c: (c.pieces[:1], c.vertices))
    return result


# ---------------------------------------------------------------------------
# k-od core numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KodResult:
    kappa: int
    witness: SubcontinuumRepr
    enumerated: int


def _pinned_subdivision(g: TopoGraph, p: PointRef, k: int) -> tuple[Refinement, str]:
    cuts: dict[str, set[Fraction]] = {}
    for e in g.edges:
        if isinstance(p, EdgePoint) and p.edge == e.id:
            left = {p.t * Fraction(j, k) for j in range(1, k + 1)}
            right = {p.t + (1 - p.t) * Fraction(j, k) for j in range(1, k)}
            cuts[e.id] = left | right
        else:
            cuts[e.id] = {Fraction(j, k) for j in range(1, k)}
    R = refine(g, cuts)
    anchor = R.map_point(p)
    assert isinstance(anchor, Vertex)
    return R, anchor.id


def _connected_edge_sets(G: TopoGraph, start: str) -> Iterator[tuple[frozenset[str], frozenset[str]]]:
    """Every connected subcomplex containing ``start``, each exactly once.

    Yields ``(vertex set, edge set)``; the first item is the bare vertex.
    """
    inc = {v: [e for e, _ in G.incidences(v)] for v in G.vertices}
    yield frozenset([start]), frozenset()

    def grow(F: frozenset, V: frozenset, banned: frozenset):
        candidate = None
        for v in sorted(V):
            for e in inc[v]:
                if e.id not in F and e.id not in banned:
                    if candidate is None or e.id < candidate.id:
                        candidate = e
        if candidate is None:
            return
        F2 = F | {candidate.id}
        V2 = V | {candidate.u, candidate.v}
        yield V2, F2
        yield from grow(F2, V2, banned)
        yield from grow(F, V, banned | {candidate.id})

    yield from grow(frozenset(), frozenset([start]), frozenset())


def _complement_count(G: TopoGraph, V: frozenset[str], F: frozenset[str]) -> int:
    count = 0
    uf = _UnionFind(v for v in G.vertices if v not in V)
    for e in G.edges:
        if e.id in F:
            continue
        inside_u, inside_v = e.u in V, e.v in V
        if inside_u and inside_v:
            count += 1
        elif not inside_u and not inside_v:
            uf.union(e.u, e.v)
    roots = {uf.find(v) for v in uf.parent}
    return count + len(roots)


def _to_repr(R: Refinement, V: frozenset[str], F: frozenset[str]) -> SubcontinuumRepr:
    g = R.original
    core = frozenset(v for v in V if g.has_vertex(v))
    covered: dict[str, list[tuple[Fraction, Fraction]]] = {}
    for s in F:
        eid, lo, hi = R.segment_span(s)
        covered.setdefault(eid, []).append((lo, hi))
    for v in V:
        origin = R.vertex_origin(v)
        if isinstance(origin, EdgePoint):
            covered.setdefault(origin.edge, []).append((origin.t, origin.t))
    if not core:
        ((eid, spans),) = covered.items()
        return WithinEdge(eid, min(a for a, _ in spans), max(b for _, b in spans))
    full, stubs = set(), []
    for eid, spans in covered.items():
        merged = _merge(spans)
        if merged == [(0, 1)]:
            full.add(eid)
            continue
        for lo, hi in merged:
            if lo == 0 and hi > 0:
                stubs.append(Stub(eid, "u", hi))
            elif hi == 1 and lo < 1:
                stubs.append(Stub(eid, "v", 1 - lo))
    return Spanning(core, frozenset(full), tuple(stubs))


def _merge(spans: list[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    out: list[list[Fraction]] = []
    for a, b in sorted(spans):
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return [(a, b) for a, b in out]


def kod_core_number(
    g: TopoGraph,
    p: PointRef,
    subdivision: int = 3,
    max_edges: int = DEFAULT_KAPPA_EDGES,
    node_budget: int | None = None,
) -> KodResult:
    """Largest number of components of ``X - M`` over subcontinua ``M`` containing ``p``.

    Brute force over connected subcomplexes of the ``subdivision``-fold
    subdivision (with ``p`` made a vertex first).  ``max_edges`` caps the size
    of that subdivision.
    """
    g.check_point(p)
    n_edges = (len(g.edges) + (1 if isinstance(p, EdgePoint) else 0)) * subdivision
    if n_edges > max_edges:
        raise BudgetExceeded(
            f"{subdivision}-fold subdivision has {n_edges} edges, cap is {max_edges}"
        )
    R, anchor = _pinned_subdivision(g, p, subdivision)
    G = R.graph
    best, best_set, count = -1, None, 0
    for V, F in _connected_edge_sets(G, anchor):
        count += 1
        if node_budget is not None and count > node_budget:
            raise BudgetExceeded(f"more than {node_budget} subcontinua enumerated")
        c = _complement_count(G, V, F)
        if c > best:
            best, best_set = c, (V, F)
    return KodResult(best, _to_repr(R, *best_set), count)


# ---------------------------------------------------------------------------
# decomposition at a point and cell dimensions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointComponent:
    """A component ``C`` of ``A - {p}``; ``multiplicity`` is ord(p, C + {p})."""

    edges: tuple[str, ...]
    multiplicity: int

    @property
    def kind(self) -> str:
        return "i" if self.multiplicity >= 2 else "ii"


@dataclass(frozen=True)
class DecompositionAtPoint:
    components: tuple[PointComponent, ...]
    l: int  # noqa: E741
    m: int
    k: int
    r: int
    order: int

    def __post_init__(self) -> None:
        assert self.m + self.k + self.r == self.order
        assert self.m >= 2 * self.l


def decompose_at_point(g: TopoGraph, p: PointRef, A: SubcontinuumRepr) -> DecompositionAtPoint:
    if not contains_point(g, A, p):
        raise PointNotInSubcontinuumError(f"{p} is not in the subcontinuum")
    real = realize(g, A, extra=[p])
    R = real.refinement
    P = R.map_point(p).id
    G = R.graph
    nodes = [("v", v) for v in real.vertices if v != P] + [("s", s) for s in real.segments]
    uf = _UnionFind(nodes)
    for sid in real.segments:
        s = G.edge(sid)
        for x in (s.u, s.v):
            if x != P and x in real.vertices:
                uf.union(("s", sid), ("v", x))
    directions: dict = {}
    for e, _side in G.incidences(P):
        if e.id in real.segments:
            root = uf.find(("s", e.id))
            directions[root] = directions.get(root, 0) + 1
    groups = {uf.find(x): x for x in nodes}
    components = []
    for root, mult in directions.items():
        edges = sorted(
            {R.segment_span(s)[0] for kind, s in nodes if kind == "s" and uf.find((kind, s)) == root}
        )
        components.append(PointComponent(tuple(edges), mult))
    assert set(directions) == set(groups), "component of A - {p} not reaching p"
    components.sort(key=lambda c: (c.edges, c.multiplicity))
    n = point_order(g, p)
    type_i = [c for c in components if c.multiplicity >= 2]
    l = len(type_i)  # noqa: E741
    m = sum(c.multiplicity for c in type_i)
    k = len(components) - l
    r = n - sum(directions.values())
    return DecompositionAtPoint(tuple(components), l, m, k, r, n)


def cell_dimension_at(g: TopoGraph, p: PointRef, A: SubcontinuumRepr) -> int:
    """Dimension of a cell guaranteed in ``C(p, X)`` arbitrarily close to ``A``.

    This is a lower-bound certificate, not the local dimension.
    """
    d = decompose_at_point(g, p, A)
    cls = point_class(g, p)
    if cls is PointClass.END:
        return 1
    if cls is PointClass.ORDINARY:
        return 2
    return 2 * d.m - d.l + d.k + d.r


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _random_length(rng: random.Random, limit: Fraction = Fraction(1)) -> Fraction:
    den = rng.choice((2, 3, 4, 5, 7, 8))
    num = rng.randint(1, den - 1)
    return Fraction(num, den) * limit


def random_subcontinuum(g: TopoGraph, p: PointRef, rng: random.Random) -> SubcontinuumRepr:
    """A random subcontinuum of ``g`` containing ``p``."""
    g.check_point(p)
    if isinstance(p, EdgePoint):
        if rng.random() < 0.5:
            a = p.t * (1 - _random_length(rng)) if rng.random() < 0.8 else p.t
            b = p.t + (1 - p.t) * _random_length(rng) if rng.random() < 0.8 else p.t
            return WithinEdge(p.edge, a, b)
        e = g.edge(p.edge)
        V, F = {e.u, e.v}, {e.id}
    else:
        V, F = {p.id}, set()
    stop = rng.choice((0.15, 0.35, 0.6))
    while rng.random() > stop:
        frontier = sorted({e.id for v in sorted(V) for e, _ in g.incidences(v)} - F)
        if not frontier:
            break
        e = g.edge(rng.choice(frontier))
        F.add(e.id)
        V |= {e.u, e.v}
    stubs = []
    for e in g.edges:
        if e.id in F:
            continue
        ends = [side for side in ("u", "v") if e.end(side) in V]
        chosen = [side for side in ends if rng.random() < 0.4]
        if len(chosen) == 2:
            first = _random_length(rng, Fraction(1, 2))
            second = _random_length(rng, Fraction(1, 2))
            stubs += [Stub(e.id, "u", first), Stub(e.id, "v", second)]
        elif chosen:
            stubs.append(Stub(e.id, chosen[0], _random_length(rng)))
    return Spanning(frozenset(V), frozenset(F), tuple(stubs))


def sample_subcontinua(g: TopoGraph, p: PointRef, count: int, seed: int = 0) -> list[SubcontinuumRepr]:
    rng = random.Random(f"{seed}:{p}")
    out = [WithinEdge(p.edge, p.t, p.t) if isinstance(p, EdgePoint) else Spanning(frozenset([p.id]))]
    while len(out) < count:
        out.append(random_subcontinuum(g, p, rng))
    return out
