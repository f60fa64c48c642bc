from __future__ import annotations

import json
from pathlib import Path

import pytest
from hypothesis import strategies as st

from hypergraphx.graph import TopoGraph, Vertex, EdgePoint
from fractions import Fraction

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "docs" / "schemas"

# lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@st.composite
def connected_graphs(draw, max_vertices: int = 6, max_edges: int = 8) -> TopoGraph:
    """Random connected multigraph: a random spanning tree plus extra edges and loops."""
    n = draw(st.integers(1, max_vertices))
    edges = [(draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    room = max(0, max_edges - len(edges))
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    edges += draw(st.lists(pair, min_size=0 if edges else 1, max_size=max(room, 1)))
    return TopoGraph.from_edges(
        [(f"e{j}", f"v{u}", f"v{v}") for j, (u, v) in enumerate(edges)],
        vertices=[f"v{i}" for i in range(n)],
    )


@st.composite
def graph_points(draw, g: TopoGraph):
    if draw(st.booleans()):
        return Vertex(draw(st.sampled_from(g.vertices)))
    e = draw(st.sampled_from([e.id for e in g.edges]))
    den = draw(st.integers(2, 9))
    return EdgePoint(e, Fraction(draw(st.integers(1, den - 1)), den))


def load_schema(name: str) -> dict:
    return json.loads((SCHEMA_DIR / name).read_text())


@pytest.fixture(scope="session")
def schema_validator():
    jsonschema = pytest.importorskip("jsonschema")
    from referencing import Registry, Resource

    resources = []
    for path in SCHEMA_DIR.glob("*.json"):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
    registry = Registry().with_resources(resources)

    def validate(instance: dict, name: str) -> None:
        validator = jsonschema.Draft202012Validator(load_schema(name), registry=registry)
        validator.validate(instance)

    return validate


def all_points(g: TopoGraph):
    """Every vertex plus the midpoint and a third-point of each edge."""
    pts = [Vertex(v) for v in g.vertices]
    for e in g.edges:
        pts += [EdgePoint(e.id, Fraction(1, 2)), EdgePoint(e.id, Fraction(1, 3))]
    return pts
