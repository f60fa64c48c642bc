"""Analysis reports and the claim-verification table.

Reports are plain dicts built in a fixed order so that JSON output is
byte-stable for a given input and flag set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classify import ClassifierConfig, SizeReport, kx_size
from .corpus import normalized_corpus
from .errors import InternalConsistencyError
from .families import all_family_graphs, build_example, build_xn, build_yn
from .graph import Shape, TopoGraph, normalize

MATCH, MISMATCH, BOUND = "match", "mismatch", "bound-contains"
INTERNAL = "internal-error"


@dataclass(frozen=True)
class Claim:
    name: str
    expected: object
    computed: object
    status: str
    note: str = ""

    def to_json(self) -> dict:
        return {
            "claim": self.name,
            "expected": self.expected,
            "computed": self.computed,
            "status": self.status,
            "note": self.note,
        }


def compare_value(name: str, expected: int, computed: int, note: str = "") -> Claim:
    return Claim(name, expected, computed, MATCH if expected == computed else MISMATCH, note)


def compare_size(name: str, expected: int, size: SizeReport, note: str = "") -> Claim:
    computed = [size.lower, size.upper]
    if size.exact and size.lower == expected:
        status = MATCH
    elif size.lower <= expected <= size.upper:
        status = BOUND
    else:
        status = MISMATCH
    return Claim(name, expected, computed, status, note)


def analyze_graph(g: TopoGraph, config: ClassifierConfig) -> dict:
    """Everything ``hypergraphx analyze`` prints, as one JSON-ready dict."""
    ng = normalize(g)
    size = kx_size(ng, config)
    orbits = size.orbits
    index = {}
    for i, o in enumerate(orbits.orbits):
        for m in o.members:
            index[f"{'vertex' if o.kind == 'vertex' else 'edge'}:{m}"] = i
    reps = [
        {"label": label, "orbit": index[label], "signature": sig.to_json()}
        for label, sig in size.signatures.items()
    ]
    kappa = None
    if config.kappa:
        if size.kappa_results is None:
            kappa = {"skipped": True, "reason": f"more than {config.kappa_edges} edges after subdivision"}
        else:
            kappa = {
                "skipped": False,
                "values": [
                    {"label": label, "kappa": res.kappa, "witness": res.witness.to_json()}
                    for label, res in size.kappa_results.items()
                ],
            }
    claims = [
        Claim(
            "size bounded by homogeneity degree",
            f"upper <= {orbits.degree}",
            size.upper,
            MATCH if size.lower <= size.upper <= orbits.degree else MISMATCH,
        ).to_json()
    ]
    return {
        "graph": {
            "vertices": len(g.vertices),
            "edges": len(g.edges),
            "shape": ng.shape.value,
            "normalized_vertices": len(ng.graph.vertices),
            "normalized_edges": len(ng.graph.edges),
        },
        "representatives": reps,
        "orbits": orbits.to_json(),
        "degree": orbits.degree,
        "size": size.to_json(),
        "kappa": kappa,
        "claims": claims,
    }


def format_analysis_text(report: dict) -> str:
    g = report["graph"]
    size = report["size"]
    lines = [
        f"shape: {g['shape']}  vertices: {g['vertices']}  edges: {g['edges']}"
        f"  (normalized {g['normalized_vertices']}/{g['normalized_edges']})",
        f"homogeneity degree: {report['degree']}",
    ]
    bound = f"{size['lower']}" if size["exact"] else f"[{size['lower']}, {size['upper']}]"
    lines.append(f"size of K(X): {bound}{' (exact)' if size['exact'] else ''}  rules: {size['config']['rules']}")
    lines.append("orbits:")
    for i, o in enumerate(report["orbits"]["orbits"]):
        lines.append(f"  {i}: {o['kind']} {' '.join(o['representatives'])}")
    lines.append("signatures:")
    seen = set()
    for r in report["representatives"]:
        if r["orbit"] in seen:
            continue
        seen.add(r["orbit"])
        s = r["signature"]
        fields = [s["class"], f"ord={s['order']}"]
        for key in ("neighbor_order", "sigma", "loop_flag", "end_orders", "kappa"):
            if s[key] is not None:
                fields.append(f"{key}={s[key]}")
        lines.append(f"  {r['label']}: {' '.join(str(f) for f in fields)}")
    lines.append("merges:")
    for m in size["merges"]:
        lines.append(f"  {m['rule']}: {m['pair'][0]} ~ {m['pair'][1]}")
    if size["conjectured_separations"]:
        lines.append("conjectured separations:")
        for c in size["conjectured_separations"]:
            lines.append(f"  {' '.join(c)}")
    if report["kappa"] is not None:
        if report["kappa"]["skipped"]:
            lines.append(f"kappa: skipped ({report['kappa']['reason']})")
        else:
            lines.append("kappa:")
            for k in report["kappa"]["values"]:
                lines.append(f"  {k['label']}: {k['kappa']}")
    lines.append("claims:")
    for c in report["claims"]:
        lines.append(f"  {c['claim']}: {c['status']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# verification table
# ---------------------------------------------------------------------------


def _size_or_error(g, config: ClassifierConfig, errors: list[str], name: str) -> SizeReport | None:
    try:
        return kx_size(g, config)
    except InternalConsistencyError as exc:
        errors.append(f"{name}: {exc}")
        return None


def verify_claims(config: ClassifierConfig, max_x: int = 20, max_y: int = 14, corpus_edges: int = 5) -> dict:
    """The published numeric claims against what the tool computes.

    Mismatches are data; only internal-consistency errors are collected as
    failures.
    """
    claims: list[Claim] = []
    errors: list[str] = []

    def internal(name: str) -> None:
        claims.append(Claim(name, None, None, INTERNAL, errors[-1]))

    for n in range(1, max_x + 1):
        size = _size_or_error(build_xn(n).graph, config, errors, f"X_{n}")
        if size is None:
            internal(f"X_{n} size")
            continue
        claims.append(compare_size(f"X_{n} size", n, size))
        claims.append(compare_value(f"X_{n} homogeneity degree", n, size.degree))

    ex = _size_or_error(build_example().graph, config, errors, "example")
    if ex is None:
        internal("example size")
    else:
        claims.append(compare_size("example size", 5, ex))
        claims.append(compare_value("example homogeneity degree", 6, ex.degree))
        glued = any(m.rule == "GluingTheorem" and set(m.pair) == {"vertex:a", "vertex:q"} for m in ex.merges)
        claims.append(
            Claim("example gluing merges a and q", True, glued, MATCH if glued else MISMATCH)
        )

    for n in range(1, max_y + 1):
        size = _size_or_error(build_yn(n).graph, config, errors, f"Y_{n}")
        if size is None:
            internal(f"Y_{n} size")
            continue
        claims.append(compare_size(f"Y_{n} size", n + 4, size))
        claims.append(compare_value(f"Y_{n} homogeneity degree", n + 5, size.degree, "claimed n+5"))

    graphs = [(f"corpus#{i}", ng) for i, ng in enumerate(normalized_corpus(corpus_edges))]
    graphs += [(fg.name, normalize(fg.graph)) for fg in all_family_graphs(max_x, max_y)]
    violations = []
    inequality_failures = []
    for name, ng in graphs:
        size = _size_or_error(ng, config, errors, name)
        if size is None:
            continue
        if (size.exact and size.lower == 1) != (ng.shape is Shape.CIRCLE):
            violations.append(name)
        if not size.lower <= size.upper <= size.degree:
            inequality_failures.append(name)
    claims.append(
        Claim(
            "size 1 exactly for the simple closed curve",
            0,
            len(violations),
            MATCH if not violations else MISMATCH,
            f"{len(graphs)} graphs checked" + (f"; counterexamples {violations}" if violations else ""),
        )
    )
    claims.append(
        Claim(
            "lower <= upper <= homogeneity degree",
            0,
            len(inequality_failures),
            MATCH if not inequality_failures else MISMATCH,
            f"{len(graphs)} graphs checked",
        )
    )
    for e in errors:
        if not any(c.status == INTERNAL and c.note == e for c in claims):
            claims.append(Claim("internal consistency", None, None, INTERNAL, e))
    return {
        "config": config.to_json(),
        "claims": [c.to_json() for c in claims],
        "summary": {
            status: sum(1 for c in claims if c.status == status) for status in (MATCH, BOUND, MISMATCH, INTERNAL)
        },
        "internal_errors": errors,
    }


def format_claims_text(table: dict) -> str:
    rows = [("claim", "expected", "computed", "status")]
    for c in table["claims"]:
        rows.append((c["claim"], _cell(c["expected"]), _cell(c["computed"]), c["status"]))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    s = table["summary"]
    lines.append("")
    lines.append(
        f"rules: {table['config']['rules']}  match: {s[MATCH]}  bound-contains: {s[BOUND]}"
        f"  mismatch: {s[MISMATCH]}  internal-error: {s[INTERNAL]}"
    )
    for e in table["internal_errors"]:
        lines.append(f"internal error: {e}")
    return "\n".join(lines) + "\n"


def _cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, list):
        return f"[{value[0]}, {value[1]}]" if value[0] != value[1] else str(value[0])
    return str(value)
