"""Combinatorial model of finite graph continua.

A finite graph continuum is stored as a connected multigraph whose loops and
parallel edges are first-class.  No lengths or coordinates are kept: every
quantity computed downstream is a topological invariant.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Union

from .errors import (
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

IDENTIFIER = re.compile(r"[A-Za-z0-9_]+\Z")


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def end(self, side: str) -> str:
        return self.u if side == "u" else self.v


@dataclass(frozen=True, order=True)
class Vertex:
    id: str

    def __str__(self) -> str:
        return f"vertex:{self.id}"


@dataclass(frozen=True)
class EdgePoint:
    """Interior point of an edge, ``t`` measured from the edge's ``u`` end."""

    edge: str
    t: Fraction

    def __post_init__(self) -> None:
        t = Fraction(self.t)
        if not 0 < t < 1:
            raise ValueError(f"edge parameter must lie strictly in (0, 1), got {t}")
        object.__setattr__(self, "t", t)

    def __str__(self) -> str:
        return f"edge:{self.edge}@{self.t}"


PointRef = Union[Vertex, EdgePoint]


class PointClass(str, Enum):
    END = "end"
    ORDINARY = "ordinary"
    RAMIFICATION = "ramification"


class Shape(str, Enum):
    CIRCLE = "circle"
    ARC = "arc"
    GENERAL = "general"


@dataclass(frozen=True)
class TopoGraph:
    """A finite connected multigraph; ``Edge(id, x, x)`` is a loop at ``x``.

    Vertex and edge identifiers share one namespace, so a name never refers
    to both a vertex and an edge.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    labels: Mapping[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(
            self, "edges", tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        )
        self._validate()

    def _validate(self) -> None:
        if not self.vertices:
            raise DegenerateGraphError("graph has no vertices")
        if not self.edges:
            raise DegenerateGraphError("graph has no edges; a single point is out of scope")
        seen: set[str] = set()
        for name in list(self.vertices) + [e.id for e in self.edges]:
            if not IDENTIFIER.match(name):
                raise GraphSyntaxError(f"invalid identifier {name!r}", 0, 0)
            if name in seen:
                raise DuplicateIdentifierError(f"identifier {name!r} declared twice")
            seen.add(name)
        vset = set(self.vertices)
        for e in self.edges:
            for x in (e.u, e.v):
                if x not in vset:
                    raise DanglingEndpointError(f"edge {e.id!r} names missing vertex {x!r}")
        reached = self._reachable(self.vertices[0])
        if len(reached) != len(self.vertices):
            missing = sorted(vset - reached)
            raise DisconnectedGraphError(f"vertices not reachable: {', '.join(missing)}")

    def _reachable(self, start: str) -> set[str]:
        nbrs: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            nbrs[e.u].append(e.v)
            nbrs[e.v].append(e.u)
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in nbrs[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str, str]], vertices: Iterable[str] = ()) -> TopoGraph:
        """Build from ``(id, u, v)`` triples; vertices default to first appearance order."""
        edges = [Edge(*e) for e in edges]
        order = list(vertices)
        known = set(order)
        for e in edges:
            for x in (e.u, e.v):
                if x not in known:
                    known.add(x)
                    order.append(x)
        return cls(tuple(order), tuple(edges))

    @cached_property
    def _edge_index(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _incidence(self) -> dict[str, tuple[tuple[Edge, str], ...]]:
        inc: dict[str, list[tuple[Edge, str]]] = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.u].append((e, "u"))
            inc[e.v].append((e, "v"))
        return {v: tuple(ends) for v, ends in inc.items()}

    @cached_property
    def _vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge_index[eid]
        except KeyError:
            raise PointNotInGraphError(f"no edge {eid!r}") from None

    def has_edge(self, eid: str) -> bool:
        return eid in self._edge_index

    def has_vertex(self, vid: str) -> bool:
        return vid in self._vertex_set

    def incidences(self, vid: str) -> tuple[tuple[Edge, str], ...]:
        """Edge-ends at ``vid`` as ``(edge, side)``; a loop contributes both sides."""
        return self._incidence[vid]

    def order(self, vid: str) -> int:
        return len(self._incidence[vid])

    def names(self) -> frozenset[str]:
        return self._vertex_set | frozenset(self._edge_index)

    def check_point(self, p: PointRef) -> None:
        if isinstance(p, Vertex):
            if not self.has_vertex(p.id):
                raise PointNotInGraphError(f"no vertex {p.id!r}")
        elif isinstance(p, EdgePoint):
            if not self.has_edge(p.edge):
                raise PointNotInGraphError(f"no edge {p.edge!r}")
        else:
            raise TypeError(f"not a point reference: {p!r}")


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def _tokens(text: str, offset: int) -> Iterator[tuple[str, int]]:
    for m in re.finditer(r"\S+", text):
        yield m.group(0), offset + m.start() + 1


def parse_graph(text: str) -> TopoGraph:
    """Parse the line-oriented graph format.

    ``vertex <id>`` and ``edge <id> <u> <v>`` declarations, one per line (a
    ``;`` also separates declarations), ``#`` starts a comment.
    """
    vertices: list[str] = []
    edges: list[Edge] = []
    where: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        offset = 0
        for chunk in line.split(";"):
            toks = list(_tokens(chunk, offset))
            offset += len(chunk) + 1
            if not toks:
                continue
            keyword, col = toks[0]
            args = toks[1:]
            for name, c in args:
                if not IDENTIFIER.match(name):
                    raise GraphSyntaxError(f"invalid identifier {name!r}", lineno, c)
            if keyword == "vertex":
                if len(args) != 1:
                    raise GraphSyntaxError("expected: vertex <id>", lineno, col)
                name = args[0][0]
                if name in where:
                    raise DuplicateIdentifierError(
                        f"line {lineno}: identifier {name!r} already declared on line {where[name]}"
                    )
                where[name] = lineno
                vertices.append(name)
            elif keyword == "edge":
                if len(args) != 3:
                    raise GraphSyntaxError("expected: edge <id> <u> <v>", lineno, col)
                name, u, v = (a[0] for a in args)
                if name in where:
                    raise DuplicateIdentifierError(
                        f"line {lineno}: identifier {name!r} already declared on line {where[name]}"
                    )
                where[name] = lineno
                edges.append(Edge(name, u, v))
            else:
                raise GraphSyntaxError(f"unknown declaration {keyword!r}", lineno, col)
    declared = set(vertices)
    for e in edges:
        for x in (e.u, e.v):
            if x not in declared:
                raise DanglingEndpointError(
                    f"line {where[e.id]}: edge {e.id!r} names undeclared vertex {x!r}"
                )
    return TopoGraph(tuple(vertices), tuple(edges))


def format_point(p: PointRef) -> str:
    if isinstance(p, Vertex):
        return f"vertex {p.id}"
    return f"edge {p.edge} {p.t}"


def parse_point(text: str) -> PointRef:
    parts = text.split()
    if len(parts) == 2 and parts[0] == "vertex":
        return Vertex(parts[1])
    if len(parts) == 3 and parts[0] == "edge":
        return EdgePoint(parts[1], Fraction(parts[2]))
    raise ValueError(f"cannot parse point {text!r}")


def serialize_graph(
    g: TopoGraph,
    landmarks: Mapping[str, PointRef] | None = None,
    title: str | None = None,
) -> str:
    lines = []
    if title:
        lines.append(f"# {title}")
    for name, p in (landmarks or {}).items():
        lines.append(f"# landmark {name} = {format_point(p)}")
    lines.extend(f"vertex {v}" for v in g.vertices)
    lines.extend(f"edge {e.id} {e.u} {e.v}" for e in g.edges)
    return "\n".join(lines) + "\n"


def parse_landmarks(text: str) -> dict[str, PointRef]:
    found = {}
    for m in re.finditer(r"^#\s*landmark\s+(\S+)\s*=\s*(.+?)\s*$", text, re.MULTILINE):
        found[m.group(1)] = parse_point(m.group(2))
    return found


# ---------------------------------------------------------------------------
# local invariants
# ---------------------------------------------------------------------------


def point_order(g: TopoGraph, p: PointRef) -> int:
    g.check_point(p)
    if isinstance(p, EdgePoint):
        return 2
    return g.order(p.id)


def point_class(g: TopoGraph, p: PointRef) -> PointClass:
    n = point_order(g, p)
    if n == 1:
        return PointClass.END
    if n == 2:
        return PointClass.ORDINARY
    return PointClass.RAMIFICATION


@dataclass(frozen=True)
class Chain:
    """A topological edge assembled from original edges, listed from ``u`` to ``v``."""

    edge: Edge
    pieces: tuple[tuple[str, bool], ...]  # (original edge id, traversed u -> v)


@dataclass(frozen=True)
class NormalizedGraph:
    graph: TopoGraph
    shape: Shape
    original: TopoGraph
    chains: tuple[Chain, ...]

    @cached_property
    def _positions(self) -> tuple[dict[str, Edge | None], dict[str, tuple[str, int, int, bool]]]:
        vertex_pos: dict[str, tuple[str, Fraction] | None] = {}
        edge_pos: dict[str, tuple[str, int, int, bool]] = {}
        kept = set(self.graph.vertices)
        for ch in self.chains:
            k = len(ch.pieces)
            for j, (eid, forward) in enumerate(ch.pieces):
                edge_pos[eid] = (ch.edge.id, j, k, forward)
                if j:
                    orig = self.original.edge(eid)
                    joint = orig.u if forward else orig.v
                    if joint not in kept:
                        vertex_pos[joint] = (ch.edge.id, Fraction(j, k))
        return vertex_pos, edge_pos

    def map_point(self, p: PointRef) -> PointRef:
        """Image of an original point in the normalized graph."""
        self.original.check_point(p)
        vertex_pos, edge_pos = self._positions
        if isinstance(p, Vertex):
            if self.graph.has_vertex(p.id):
                return p
            eid, t = vertex_pos[p.id]
            return EdgePoint(eid, t)
        eid, j, k, forward = edge_pos[p.edge]
        s = p.t if forward else 1 - p.t
        return EdgePoint(eid, (j + s) / k)


def _suppress(g: TopoGraph, keep: frozenset[str] = frozenset()) -> tuple[TopoGraph, tuple[Chain, ...]]:
    kept = [v for v in g.vertices if g.order(v) != 2 or v in keep]
    if not kept:
        kept = [g.vertices[0]]
    kept_set = set(kept)
    used: set[tuple[str, str]] = set()
    chains: list[Chain] = []
    for x in kept:
        for e, side in g.incidences(x):
            if (e.id, side) in used:
                continue
            pieces = []
            cur, cur_side = e, side
            while True:
                other = "v" if cur_side == "u" else "u"
                used.add((cur.id, cur_side))
                used.add((cur.id, other))
                pieces.append((cur.id, cur_side == "u"))
                w = cur.end(other)
                if w in kept_set:
                    break
                cur, cur_side = next((f, s) for f, s in g.incidences(w) if (f.id, s) not in used)
            chains.append(Chain(Edge(pieces[0][0], x, w), tuple(pieces)))
    graph = TopoGraph(tuple(kept), tuple(c.edge for c in chains))
    return graph, tuple(chains)


def normalize(g: TopoGraph) -> NormalizedGraph:
    """Suppress every order-2 vertex and tag the shape."""
    graph, chains = _suppress(g)
    if all(g.order(v) == 2 for v in g.vertices):
        shape = Shape.CIRCLE
    elif len(graph.vertices) == 2 and all(graph.order(v) == 1 for v in graph.vertices):
        shape = Shape.ARC
    else:
        shape = Shape.GENERAL
    return NormalizedGraph(graph, shape, g, chains)


def suppress_keeping(g: TopoGraph, keep: Iterable[str]) -> TopoGraph:
    """Suppress order-2 vertices except those in ``keep``."""
    return _suppress(g, frozenset(keep))[0]


def neighbor_vertex(g: TopoGraph, e: PointRef) -> tuple[Vertex, int]:
    """First ramification point reached from the end point ``e``."""
    if point_class(g, e) is not PointClass.END:
        raise NotAnEndpointError(f"{e} is not an end point")
    ng = normalize(g)
    if ng.shape is Shape.ARC:
        raise ArcGraphError("neighbor vertex is undefined on an arc")
    ((edge, side),) = ng.graph.incidences(e.id)
    w = edge.end("v" if side == "u" else "u")
    return Vertex(w), ng.graph.order(w)


def sigma(g: TopoGraph, p: PointRef) -> tuple[int, bool]:
    """Order sum of the topological edge through the ordinary point ``p``.

    Returns ``(value, loop_flag)``; a loop contributes its vertex's order once.
    """
    if point_class(g, p) is not PointClass.ORDINARY:
        raise NotOrdinaryError(f"{p} is not an ordinary point")
    ng = normalize(g)
    if ng.shape is Shape.CIRCLE:
        raise CircleGraphError("sigma is undefined on a simple closed curve")
    q = ng.map_point(p)
    edge = ng.graph.edge(q.edge)
    if edge.is_loop:
        return ng.graph.order(edge.u), True
    return ng.graph.order(edge.u) + ng.graph.order(edge.v), False


# ---------------------------------------------------------------------------
# refinement / subdivision
# ---------------------------------------------------------------------------


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "_"
    taken.add(name)
    return name


@dataclass(frozen=True)
class Refinement:
    """A graph obtained by cutting original edges at rational parameters."""

    graph: TopoGraph
    original: TopoGraph
    cuts: Mapping[str, tuple[Fraction, ...]]
    cut_vertices: Mapping[str, tuple[str, ...]]
    segments: Mapping[str, tuple[str, ...]]

    @cached_property
    def _segment_span(self) -> dict[str, tuple[str, Fraction, Fraction]]:
        spans = {}
        for eid, segs in self.segments.items():
            bounds = (Fraction(0),) + self.cuts[eid] + (Fraction(1),)
            for j, s in enumerate(segs):
                spans[s] = (eid, bounds[j], bounds[j + 1])
        return spans

    @cached_property
    def _vertex_origin(self) -> dict[str, PointRef]:
        origin: dict[str, PointRef] = {v: Vertex(v) for v in self.original.vertices}
        for eid, names in self.cut_vertices.items():
            for t, name in zip(self.cuts[eid], names):
                origin[name] = EdgePoint(eid, t)
        return origin

    def segment_span(self, seg: str) -> tuple[str, Fraction, Fraction]:
        """``(original edge, lo, hi)`` covered by a refined edge."""
        return self._segment_span[seg]

    def vertex_origin(self, vid: str) -> PointRef:
        return self._vertex_origin[vid]

    def map_point(self, p: PointRef) -> PointRef:
        self.original.check_point(p)
        if isinstance(p, Vertex):
            return p
        cuts = self.cuts[p.edge]
        if p.t in cuts:
            return Vertex(self.cut_vertices[p.edge][cuts.index(p.t)])
        bounds = (Fraction(0),) + cuts + (Fraction(1),)
        j = sum(1 for c in cuts if c < p.t)
        lo, hi = bounds[j], bounds[j + 1]
        seg = self.segments[p.edge][j]
        if len(cuts) == 0:
            return EdgePoint(seg, p.t)
        return EdgePoint(seg, (p.t - lo) / (hi - lo))


def refine(g: TopoGraph, cuts: Mapping[str, Iterable[Fraction]]) -> Refinement:
    """Cut each edge at the given interior parameters (values in (0, 1))."""
    taken = set(g.names())
    new_vertices = list(g.vertices)
    new_edges: list[Edge] = []
    all_cuts: dict[str, tuple[Fraction, ...]] = {}
    cut_vertices: dict[str, tuple[str, ...]] = {}
    segments: dict[str, tuple[str, ...]] = {}
    for e in g.edges:
        ts = tuple(sorted({Fraction(t) for t in cuts.get(e.id, ())}))
        if any(not 0 < t < 1 for t in ts):
            raise ValueError(f"cut parameters on {e.id!r} must lie in (0, 1)")
        all_cuts[e.id] = ts
        if not ts:
            cut_vertices[e.id] = ()
            segments[e.id] = (e.id,)
            new_edges.append(e)
            continue
        names = tuple(_fresh(f"{e.id}_p{j + 1}", taken) for j in range(len(ts)))
        segs = tuple(_fresh(f"{e.id}_s{j}", taken) for j in range(len(ts) + 1))
        chain = (e.u,) + names + (e.v,)
        new_vertices.extend(names)
        new_edges.extend(Edge(s, chain[j], chain[j + 1]) for j, s in enumerate(segs))
        cut_vertices[e.id] = names
        segments[e.id] = segs
    graph = TopoGraph(tuple(new_vertices), tuple(new_edges))
    return Refinement(graph, g, all_cuts, cut_vertices, segments)


def subdivide(g: TopoGraph, k: int) -> Refinement:
    """Replace every edge by a path of ``k`` edges through fresh order-2 vertices."""
    if k < 1:
        raise ValueError("subdivision level must be positive")
    return refine(g, {e.id: [Fraction(j, k) for j in range(1, k)] for e in g.edges})
