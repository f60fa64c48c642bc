"""Two-sided bounds on the number of hyperspace types C(x, X).

The lower bound counts distinct signatures: each signature field is a
homeomorphism invariant of C(x, X), so distinct signatures certify distinct
types.  The upper bound starts from the point orbits and coarsens them with
gluing merges, each backed by an explicit witness.

Three ingredients are conjectural and switch off under ``rules="paper"``:
the loop flag and the end-order pair of an ordinary point's edge (which refine
the order sum), and the extended gluing rule.  Separations resting only on the
conjectured fields are listed as such in reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .errors import BudgetExceeded, InternalConsistencyError
from .graph import (
    EdgePoint,
    NormalizedGraph,
    PointClass,
    PointRef,
    Shape,
    TopoGraph,
    Vertex,
    normalize,
    point_order,
    refine,
)
from .subcontinuum import DEFAULT_KAPPA_EDGES, KodResult, kod_core_number
from .symmetry import (
    DEFAULT_SEARCH_NODES,
    OrbitPartition,
    SearchBudget,
    _Multigraph,
    find_isomorphism,
    point_orbits,
    rooted_isomorphism,
)

RULES = ("paper", "extended")
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ClassifierConfig:
    rules: str = "extended"
    kappa: bool = False
    budget: int = DEFAULT_SEARCH_NODES
    kappa_edges: int = DEFAULT_KAPPA_EDGES

    def __post_init__(self) -> None:
        if self.rules not in RULES:
            raise ValueError(f"rules must be one of {RULES}, got {self.rules!r}")

    @property
    def extended(self) -> bool:
        return self.rules == "extended"

    def to_json(self) -> dict:
        return {
            "rules": self.rules,
            "loop_flag": self.extended,
            "end_orders": self.extended,
            "gluing_extension": self.extended,
            "kappa": self.kappa,
            "budget": self.budget,
        }


@dataclass(frozen=True)
class PointSignature:
    point_class: PointClass
    order: int
    neighbor_order: int | None = None
    sigma: int | None = None
    loop_flag: bool | None = None
    kappa: int | None = None
    end_orders: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        c = self.point_class
        ok = (
            (c is PointClass.END and self.order == 1 and self.sigma is None and self.loop_flag is None)
            or (c is PointClass.ORDINARY and self.order == 2 and self.neighbor_order is None)
            or (
                c is PointClass.RAMIFICATION
                and self.order >= 3
                and self.neighbor_order is None
                and self.sigma is None
                and self.loop_flag is None
            )
        )
        if self.end_orders is not None and c is not PointClass.ORDINARY:
            ok = False
        if not ok:
            raise InternalConsistencyError(f"malformed signature {self}")

    def strict_key(self) -> tuple:
        return (self.point_class.value, self.order, self.neighbor_order, self.sigma, self.kappa)

    def key(self, config: ClassifierConfig) -> tuple:
        return self.strict_key() + ((self.loop_flag, self.end_orders) if config.extended else ())

    def to_json(self) -> dict:
        return {
            "class": self.point_class.value,
            "order": self.order,
            "neighbor_order": self.neighbor_order,
            "sigma": self.sigma,
            "loop_flag": self.loop_flag,
            "kappa": self.kappa,
            "end_orders": list(self.end_orders) if self.end_orders is not None else None,
        }


def _class_of(order: int) -> PointClass:
    if order == 1:
        return PointClass.END
    if order == 2:
        return PointClass.ORDINARY
    return PointClass.RAMIFICATION


def _normalized_signature(ng: NormalizedGraph, p: PointRef, kappa: int | None = None) -> PointSignature:
    """Signature of a point given on the normalized graph itself."""
    g = ng.graph
    if ng.shape is Shape.CIRCLE:
        return PointSignature(PointClass.ORDINARY, 2, kappa=kappa)
    if isinstance(p, EdgePoint):
        e = g.edge(p.edge)
        if e.is_loop:
            return PointSignature(
                PointClass.ORDINARY, 2, sigma=g.order(e.u), loop_flag=True, kappa=kappa, end_orders=(g.order(e.u),)
            )
        ends = tuple(sorted((g.order(e.u), g.order(e.v))))
        return PointSignature(
            PointClass.ORDINARY, 2, sigma=sum(ends), loop_flag=False, kappa=kappa, end_orders=ends
        )
    order = g.order(p.id)
    cls = _class_of(order)
    if cls is PointClass.END:
        neighbor = None
        if ng.shape is not Shape.ARC:
            ((e, side),) = g.incidences(p.id)
            neighbor = g.order(e.end("v" if side == "u" else "u"))
        return PointSignature(cls, 1, neighbor_order=neighbor, kappa=kappa)
    return PointSignature(cls, order, kappa=kappa)


def signature(g: TopoGraph, p: PointRef, config: ClassifierConfig | None = None) -> PointSignature:
    """The invariant vector of C(p, X)."""
    config = config or ClassifierConfig()
    point_order(g, p)  # validates p
    ng = normalize(g)
    q = ng.map_point(p)
    kappa = None
    if config.kappa:
        kappa = kod_core_number(g, p, max_edges=config.kappa_edges).kappa
    return _normalized_signature(ng, q, kappa)


# ---------------------------------------------------------------------------
# representatives
# ---------------------------------------------------------------------------


def rep_label(kind: str, name: str) -> str:
    return f"{'vertex' if kind == 'vertex' else 'edge'}:{name}"


def rep_point(label: str) -> PointRef:
    kind, name = label.split(":", 1)
    return Vertex(name) if kind == "vertex" else EdgePoint(name, HALF)


def _representatives(orbits: OrbitPartition) -> list[str]:
    return [rep_label(o.kind, m) for o in orbits.orbits for m in o.members]


# ---------------------------------------------------------------------------
# catalog of certified rooted pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    kind: str  # "rooted_isomorphism" | "catalog"
    detail: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.detail}


def _pin(g: TopoGraph, p: PointRef) -> tuple[TopoGraph, str]:
    if isinstance(p, Vertex):
        return g, p.id
    r = refine(g, {p.edge: [p.t]})
    (vid,) = [v for v in r.graph.vertices if v not in g.vertices]
    return r.graph, vid


def _catalog_entry(g: TopoGraph, p: PointRef) -> str | None:
    ng = normalize(g)
    if ng.shape is Shape.CIRCLE:
        return "circle"
    if ng.shape is Shape.ARC and point_order(g, p) == 2:
        return "arc_interior"
    return None


def catalog_lookup(
    rooted_l: tuple[TopoGraph, PointRef],
    rooted_k: tuple[TopoGraph, PointRef],
    budget: SearchBudget | None = None,
) -> Certificate | None:
    """Certify C(p, L) ~ C(q, K) with {p} -> {q} and L -> K, or return None."""
    (gl, pl), (gk, pk) = rooted_l, rooted_k
    hl, rl = _pin(gl, pl)
    hk, rk = _pin(gk, pk)
    sigma = rooted_isomorphism(hl, rl, hk, rk, budget)
    if sigma is not None:
        return Certificate("rooted_isomorphism", {"vertex_map": sorted([a, b] for a, b in sigma.items())})
    pair = {_catalog_entry(gl, pl), _catalog_entry(gk, pk)}
    if pair == {"circle", "arc_interior"}:
        # both hyperspaces are 2-cells with the two distinguished elements on the boundary
        return Certificate("catalog", {"entry": "circle~arc_interior"})
    return None


# ---------------------------------------------------------------------------
# gluing decompositions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MergeWitness:
    rule: str  # "SameOrbit" | "GluingTheorem" | "GluingExtension"
    pair: tuple[str, str]
    witness: dict = field(default_factory=dict)

    @property
    def paper_rule(self) -> bool:
        return self.rule != "GluingExtension"

    def to_json(self) -> dict:
        return {"rule": self.rule, "pair": list(self.pair), "witness": self.witness}


@dataclass(frozen=True)
class Decomposition:
    p: str
    q: str
    Y: TopoGraph
    L: TopoGraph
    K: TopoGraph

    def to_json(self) -> dict:
        return {
            "attachments": [self.p, self.q],
            "Y": [e.id for e in self.Y.edges],
            "L": [e.id for e in self.L.edges],
            "K": [e.id for e in self.K.edges],
        }


def _components_without(g: TopoGraph, p: str) -> list[list[str]]:
    """Edge sets of the components of ``X - {p}``, in edge order."""
    parent = {e.id: e.id for e in g.edges}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    by_vertex: dict[str, str] = {}
    for e in g.edges:
        for x in {e.u, e.v} - {p}:
            if x in by_vertex:
                parent[find(e.id)] = find(by_vertex[x])
            else:
                by_vertex[x] = e.id
    groups: dict[str, list[str]] = {}
    for e in g.edges:
        groups.setdefault(find(e.id), []).append(e.id)
    return list(groups.values())


def _subgraph(g: TopoGraph, edge_ids: Iterable[str]) -> TopoGraph:
    keep = set(edge_ids)
    edges = [e for e in g.edges if e.id in keep]
    used = {x for e in edges for x in (e.u, e.v)}
    return TopoGraph(tuple(v for v in g.vertices if v in used), tuple(edges))


def cut_vertices(g: TopoGraph) -> list[str]:
    return [v for v in g.vertices if len(_components_without(g, v)) > 1]


def gluing_decompositions(g: TopoGraph) -> list[Decomposition]:
    """Every split ``X = L u Y u K`` with ``L n Y = {p}`` and ``K n Y = {q}``."""
    cuts = cut_vertices(g)
    comps = {v: _components_without(g, v) for v in cuts}
    out = []
    for p, q in combinations(cuts, 2):
        side_l = [e for c in comps[p] if not _touches(g, c, q) for e in c]
        side_k = [e for c in comps[q] if not _touches(g, c, p) for e in c]
        if not side_l or not side_k:
            continue
        rest = [e.id for e in g.edges if e.id not in set(side_l) | set(side_k)]
        out.append(Decomposition(p, q, _subgraph(g, rest), _subgraph(g, side_l), _subgraph(g, side_k)))
    return out


def _touches(g: TopoGraph, comp: list[str], v: str) -> bool:
    return any(v in (g.edge(e).u, g.edge(e).v) for e in comp)


def _edge_attempts(e, f) -> list[list[tuple[str, str]]]:
    if e.is_loop:
        return [[(e.u, f.u)]] if f.is_loop else []
    if f.is_loop:
        return []
    return [[(e.u, f.u), (e.v, f.v)], [(e.u, f.v), (e.v, f.u)]]


class _Classes:
    def __init__(self, labels: list[str], orbits: OrbitPartition):
        self.parent = {x: x for x in labels}
        self.rank = {x: i for i, x in enumerate(labels)}
        for o in orbits.orbits:
            first = rep_label(o.kind, o.members[0])
            for m in o.members[1:]:
                self.union(first, rep_label(o.kind, m))

    def find(self, x: str) -> str:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: str, b: str) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] > self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def groups(self) -> list[list[str]]:
        out: dict[str, list[str]] = {}
        for x in sorted(self.parent, key=self.rank.get):
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


def gluing_merges(
    ng: NormalizedGraph | TopoGraph,
    config: ClassifierConfig | None = None,
    orbits: OrbitPartition | None = None,
    budget: SearchBudget | None = None,
    order_of=None,
) -> list[MergeWitness]:
    """Effective merges of point classes justified by gluing decompositions."""
    config = config or ClassifierConfig()
    if isinstance(ng, TopoGraph):
        ng = normalize(ng)
    budget = budget or SearchBudget(config.budget)
    if ng.shape is not Shape.GENERAL:
        return []
    g = ng.graph
    orbits = orbits or point_orbits(ng, budget)
    classes = _Classes(_representatives(orbits), orbits)
    return _gluing(g, config, classes, budget)


def _gluing(g: TopoGraph, config: ClassifierConfig, classes: _Classes, budget: SearchBudget) -> list[MergeWitness]:
    merges: list[MergeWitness] = []
    for d in gluing_decompositions(g):
        p, q = d.p, d.q
        cert = catalog_lookup((d.L, Vertex(p)), (d.K, Vertex(q)), budget)
        if cert is None:
            continue
        base = {**d.to_json(), "certificate": cert.to_json()}
        lp, lq = rep_label("vertex", p), rep_label("vertex", q)
        if classes.find(lp) != classes.find(lq):
            phi = rooted_isomorphism(d.Y, p, d.Y, q, budget)
            if phi is not None:
                classes.union(lp, lq)
                witness = {**base, "y_map": sorted([a, b] for a, b in phi.items())}
                merges.append(MergeWitness("GluingTheorem", (lp, lq), witness))
        if not config.extended:
            continue
        merges.extend(_extension(g, d, base, classes, budget))
    return merges


def _extension(g: TopoGraph, d: Decomposition, base: dict, classes: _Classes, budget: SearchBudget) -> list[MergeWitness]:
    """Merge points of Y swapped by an automorphism of Y that exchanges p and q."""
    Y = d.Y
    my = _Multigraph.of(Y)
    swap = [(d.p, d.q), (d.q, d.p)]
    if find_isomorphism(my, my, swap, budget) is None:
        return []
    out = []
    candidates: list[tuple[str, str, list[list[tuple[str, str]]]]] = []
    for x, y in combinations(Y.vertices, 2):
        if g.order(x) == g.order(y):
            candidates.append((rep_label("vertex", x), rep_label("vertex", y), [[(x, y)]]))
    for e, f in combinations(Y.edges, 2):
        attempts = _edge_attempts(e, f)
        if attempts:
            candidates.append((rep_label("edge", e.id), rep_label("edge", f.id), attempts))
    for lx, ly, attempts in candidates:
        if classes.find(lx) == classes.find(ly):
            continue
        for pairs in attempts:
            phi = find_isomorphism(my, my, swap + pairs, budget)
            if phi is not None:
                classes.union(lx, ly)
                witness = {**base, "y_map": sorted([a, b] for a, b in phi.items()), "non_paper": True}
                out.append(MergeWitness("GluingExtension", (lx, ly), witness))
                break
    return out


# ---------------------------------------------------------------------------
# size report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SizeReport:
    lower: int
    upper: int
    degree: int
    config: ClassifierConfig
    classes_lower: tuple[tuple[str, ...], ...]
    classes_upper: tuple[tuple[str, ...], ...]
    merges: tuple[MergeWitness, ...]
    conjectured_separations: tuple[tuple[str, ...], ...]
    signatures: dict = field(default_factory=dict, compare=False)
    orbits: OrbitPartition | None = field(default=None, compare=False)
    kappa_results: dict | None = field(default_factory=dict, compare=False)

    @property
    def kappa_skipped(self) -> bool:
        return self.config.kappa and self.kappa_results is None

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "config": self.config.to_json(),
            "classes_lower": [list(c) for c in self.classes_lower],
            "classes_upper": [list(c) for c in self.classes_upper],
            "merges": [m.to_json() for m in self.merges],
            "conjectured_separations": [list(c) for c in self.conjectured_separations],
        }


def _group_by(labels: list[str], key) -> list[tuple[str, ...]]:
    groups: dict = {}
    for x in labels:
        groups.setdefault(key(x), []).append(x)
    return [tuple(v) for v in groups.values()]


def signature_table(
    ng: NormalizedGraph,
    orbits: OrbitPartition,
    config: ClassifierConfig,
) -> tuple[dict[str, PointSignature], dict[str, KodResult] | None]:
    """Signature of every representative; kappa only on orbit leaders.

    The second value maps orbit leaders to their kappa results, or is None
    when kappa was requested but the graph is over the brute-force cap.
    """
    kappas: dict[int, int] = {}
    results: dict[str, KodResult] | None = {}
    if config.kappa:
        try:
            for i, o in enumerate(orbits.orbits):
                label = rep_label(o.kind, o.members[0])
                res = kod_core_number(ng.graph, rep_point(label), max_edges=config.kappa_edges)
                results[label] = res
                kappas[i] = res.kappa
        except BudgetExceeded:
            kappas, results = {}, None
    table = {}
    for i, o in enumerate(orbits.orbits):
        for m in o.members:
            label = rep_label(o.kind, m)
            table[label] = _normalized_signature(ng, rep_point(label), kappas.get(i))
    return table, results


def signature_partition(
    g: TopoGraph | NormalizedGraph,
    config: ClassifierConfig | None = None,
) -> list[tuple[str, ...]]:
    config = config or ClassifierConfig()
    ng = g if isinstance(g, NormalizedGraph) else normalize(g)
    orbits = point_orbits(ng, SearchBudget(config.budget))
    table, _ = signature_table(ng, orbits, config)
    return _group_by(list(table), lambda x: table[x].key(config))


def kx_size(g: TopoGraph | NormalizedGraph, config: ClassifierConfig | None = None) -> SizeReport:
    """Bracket the number of hyperspace types, with witnesses both ways."""
    config = config or ClassifierConfig()
    ng = g if isinstance(g, NormalizedGraph) else normalize(g)
    budget = SearchBudget(config.budget)
    orbits = point_orbits(ng, budget)
    table, kappa_results = signature_table(ng, orbits, config)
    labels = list(table)

    strict = _group_by(labels, lambda x: table[x].strict_key())
    lower_classes = _group_by(labels, lambda x: table[x].key(config))
    conjectured = []
    if config.extended:
        for cls in strict:
            if len({table[x].key(config) for x in cls}) > 1:
                conjectured.append(cls)

    classes = _Classes(labels, orbits)
    merges: list[MergeWitness] = []
    for o in orbits.orbits:
        if len(o.members) > 1:
            pair = (rep_label(o.kind, o.members[0]), rep_label(o.kind, o.members[1]))
            merges.append(MergeWitness("SameOrbit", pair, {"orbit": [rep_label(o.kind, m) for m in o.members]}))
    if ng.shape is Shape.GENERAL:
        merges.extend(_gluing(ng.graph, config, classes, budget))
    upper_classes = [tuple(c) for c in classes.groups()]

    report = SizeReport(
        lower=len(lower_classes),
        upper=len(upper_classes),
        degree=orbits.degree,
        config=config,
        classes_lower=tuple(lower_classes),
        classes_upper=tuple(upper_classes),
        merges=tuple(merges),
        conjectured_separations=tuple(conjectured),
        signatures=table,
        orbits=orbits,
        kappa_results=kappa_results,
    )
    check_report(report)
    return report


def check_report(report: SizeReport) -> None:
    """Hard invariants; any failure means a merge rule or an invariant is wrong."""
    sig = report.signatures
    for m in report.merges:
        a, b = m.pair
        if sig[a].strict_key() != sig[b].strict_key():
            raise InternalConsistencyError(
                f"{m.rule} merge joins {a} and {b} with different signatures"
            )
    where = {}
    for i, cls in enumerate(report.classes_lower):
        for x in cls:
            where[x] = i
    for cls in report.classes_upper:
        if len({where[x] for x in cls}) > 1:
            raise InternalConsistencyError(f"merged class {list(cls)} crosses signature classes")
    if not report.lower <= report.upper <= report.degree:
        raise InternalConsistencyError(
            f"bounds out of order: lower {report.lower}, upper {report.upper}, degree {report.degree}"
        )
