"""Constructors for the named graph families.

Geometry is discarded: circles become loops, tangent circles share a vertex,
segments become edges.  Coordinates survive only as landmark names.

Naming scheme: spine vertices ``a1, a2, ...`` joined by edges ``I2, I3, ...``;
loops ``C1``, ``C``, ``C2``, ``C3``, ...; legs ``l{m}_{i}`` from ``a{m}`` to tips
``t{m}_{i}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import FamilyParameterError
from .graph import Edge, PointRef, TopoGraph, Vertex, serialize_graph


@dataclass(frozen=True)
class FamilyGraph:
    name: str
    graph: TopoGraph
    landmarks: dict[str, PointRef] = field(default_factory=dict)
    attach: str | None = None  # rightmost spine vertex, used by the recursion

    def serialize(self) -> str:
        return serialize_graph(self.graph, self.landmarks, title=self.name)


class _Builder:
    def __init__(self) -> None:
        self.vertices: list[str] = []
        self.edges: list[Edge] = []

    def vertex(self, v: str) -> str:
        if v not in self.vertices:
            self.vertices.append(v)
        return v

    def edge(self, eid: str, u: str, v: str) -> None:
        self.vertex(u)
        self.vertex(v)
        self.edges.append(Edge(eid, u, v))

    def legs(self, m: int, count: int, start: int = 1) -> None:
        for i in range(start, start + count):
            self.edge(f"l{m}_{i}", f"a{m}", f"t{m}_{i}")

    def absorb(self, g: TopoGraph) -> None:
        for v in g.vertices:
            self.vertex(v)
        self.edges.extend(g.edges)

    def graph(self) -> TopoGraph:
        return TopoGraph(tuple(self.vertices), tuple(self.edges))


_TIP = re.compile(r"t\d+_\d+\Z")


def _vertex_landmarks(g: TopoGraph) -> dict[str, PointRef]:
    # leg tips are interchangeable and would only clutter the header
    return {v: Vertex(v) for v in g.vertices if not _TIP.match(v)}


def _check_int(value, name: str, low: int, high: int | None = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise FamilyParameterError(f"{name} needs an integer parameter, got {value!r}")
    if value < low or (high is not None and value > high):
        bound = f"{low}..{high}" if high is not None else f">= {low}"
        raise FamilyParameterError(f"{name} parameter must be {bound}, got {value}")
    return value


def build_sn(n: int) -> FamilyGraph:
    """Spine edge ``a{n-1} a{n}``, a loop and ``2n`` legs at ``a{n}``."""
    _check_int(n, "S_n", 3)
    b = _Builder()
    b.edge(f"I{n}", f"a{n - 1}", f"a{n}")
    b.edge(f"C{n}", f"a{n}", f"a{n}")
    b.legs(n, 2 * n)
    g = b.graph()
    return FamilyGraph(f"S_{n}", g, _vertex_landmarks(g), attach=f"a{n}")


def build_pi(i: int) -> FamilyGraph:
    _check_int(i, "P_i", 1, 5)
    b = _Builder()
    b.edge("I2", "a1", "a2")
    b.edge("C2", "a2", "a2")
    b.edge("C", "a2", "a2")
    if i in (2, 4):
        b.edge("C1", "a1", "a1")
    if i == 3:
        b.legs(1, 3)
    elif i == 4:
        b.legs(1, 1)
    elif i == 5:
        b.legs(1, 2)
        b.legs(2, 2)
    g = b.graph()
    return FamilyGraph(f"P_{i}", g, _vertex_landmarks(g), attach="a2")


def _glue_star(host: FamilyGraph, m: int, name: str) -> FamilyGraph:
    """Attach ``S_m`` by identifying its ``a{m-1}`` with the host's rightmost vertex."""
    if host.attach != f"a{m - 1}":
        raise FamilyParameterError(f"cannot attach S_{m} to {host.name} at {host.attach}")
    star = build_sn(m)
    b = _Builder()
    b.absorb(host.graph)
    b.absorb(star.graph)
    g = b.graph()
    landmarks = dict(host.landmarks)
    landmarks.update(star.landmarks)
    return FamilyGraph(name, g, landmarks, attach=star.attach)


def _recursion_index(n: int) -> tuple[int, int]:
    """``(k, r)`` with ``n = 5(k+1) + r`` and ``-1 <= r <= 3``."""
    k = (n + 1) // 5 - 1
    return k, n - 5 * (k + 1)


def build_xn(n: int) -> FamilyGraph:
    _check_int(n, "X_n", 1)
    if n == 1:
        g = TopoGraph(("a",), (Edge("C", "a", "a"),))
        return FamilyGraph("X_1", g, {"a": Vertex("a")})
    if n == 2:
        g = TopoGraph(("a", "b"), (Edge("I", "a", "b"),))
        return FamilyGraph("X_2", g, _vertex_landmarks(g))
    if n == 3:
        b = _Builder()
        for j in range(1, 4):
            b.edge(f"l{j}", "c", f"t{j}")
        g = b.graph()
        return FamilyGraph("X_3", g, _vertex_landmarks(g))
    if n <= 8:
        base = build_pi(n - 3)
        return FamilyGraph(f"X_{n}", base.graph, base.landmarks, base.attach)
    k, r = _recursion_index(n)
    return _glue_star(build_xn(5 * k + r), k + 2, f"X_{n}")


def build_qi(i: int) -> FamilyGraph:
    """``P_i`` with a circle attached on ``C2`` at ``p`` and an arc crossing ``C`` at ``q``."""
    _check_int(i, "Q_i", 1, 5)
    base = build_pi(i)
    b = _Builder()
    for v in base.graph.vertices:
        b.vertex(v)
    for e in base.graph.edges:
        if e.id == "C2":
            b.edge("C2a", "a2", "p")
            b.edge("C2b", "a2", "p")
        elif e.id == "C":
            b.edge("Ca", "a2", "q")
            b.edge("Cb", "a2", "q")
        else:
            b.edges.append(e)
    b.edge("D", "p", "p")
    b.edge("J1", "q", "b1")
    b.edge("J2", "q", "b2")
    g = b.graph()
    return FamilyGraph(f"Q_{i}", g, _vertex_landmarks(g), attach="a2")


def build_yn(n: int) -> FamilyGraph:
    _check_int(n, "Y_n", 1)
    if n <= 3:
        b = _Builder()
        b.edge("J1", "u", "b1")
        b.edge("J2", "u", "b2")
        if n == 1:
            b.edge("L", "u", "w")
        elif n == 2:
            b.edge("La", "u", "m1")
            b.edge("Lb", "u", "m1")
            b.edge("Ma", "m1", "w")
            b.edge("Mb", "m1", "w")
        else:
            b.edge("La", "u", "v1")
            b.edge("Lb", "u", "v1")
            b.edge("M", "v1", "v2")
            b.edge("Na", "v2", "w")
            b.edge("Nb", "v2", "w")
        b.edge("S", "w", "w")
        g = b.graph()
        return FamilyGraph(f"Y_{n}", g, _vertex_landmarks(g))
    if n <= 8:
        base = build_qi(n - 3)
        return FamilyGraph(f"Y_{n}", base.graph, base.landmarks, base.attach)
    k, r = _recursion_index(n)
    return _glue_star(build_yn(5 * k + r), k + 2, f"Y_{n}")


def build_example() -> FamilyGraph:
    """A circle ``S`` at ``a``, a segment ``L`` from ``a`` to ``q``, an arc through ``q``."""
    b = _Builder()
    b.edge("S", "a", "a")
    b.edge("L", "a", "q")
    b.edge("J1", "q", "e1")
    b.edge("J2", "q", "e2")
    g = b.graph()
    return FamilyGraph("example", g, _vertex_landmarks(g))


_INDEXED = {"sn": build_sn, "pi": build_pi, "xn": build_xn, "qi": build_qi, "yn": build_yn}
FAMILY_NAMES = tuple(sorted([*_INDEXED, "example"]))


def build_family(name: str, n: int | None = None) -> FamilyGraph:
    key = name.lower()
    if key == "example":
        if n is not None:
            raise FamilyParameterError("example takes no parameter")
        return build_example()
    if key not in _INDEXED:
        raise FamilyParameterError(f"unknown family {name!r}; choose from {', '.join(FAMILY_NAMES)}")
    if n is None:
        raise FamilyParameterError(f"family {name} needs a parameter")
    return _INDEXED[key](n)


def all_family_graphs(max_x: int = 20, max_y: int = 14) -> list[FamilyGraph]:
    """Every builder output used by the verification suite."""
    out = [build_xn(n) for n in range(1, max_x + 1)]
    out += [build_yn(n) for n in range(1, max_y + 1)]
    out += [build_pi(i) for i in range(1, 6)] + [build_qi(i) for i in range(1, 6)]
    out += [build_sn(n) for n in range(3, 6)]
    out.append(build_example())
    return out
