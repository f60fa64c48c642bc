"""Hyperspace invariants of finite graph continua.

Computes point orbits, signature invariants of C(p, X) and certified bounds
on the number of hyperspace types for finite graphs given as multigraphs.
"""

from __future__ import annotations

from .classify import ClassifierConfig, PointSignature, SizeReport, catalog_lookup, gluing_merges, kx_size, signature, signature_partition
from .errors import HypergraphError
from .families import build_example, build_pi, build_qi, build_sn, build_xn, build_yn
from .graph import EdgePoint, NormalizedGraph, PointClass, Shape, TopoGraph, Vertex, normalize, parse_graph, point_class, point_order
from .subcontinuum import cell_dimension_at, complement_components, decompose_at_point, kod_core_number
from .symmetry import automorphisms, brute_force_automorphisms, homogeneity_degree, point_orbits

__version__ = "0.1.0"

__all__ = [
    "ClassifierConfig", "PointSignature", "SizeReport", "catalog_lookup", "gluing_merges", "kx_size",
    "signature", "signature_partition", "HypergraphError", "build_example", "build_pi", "build_qi",
    "build_sn", "build_xn", "build_yn", "EdgePoint", "NormalizedGraph", "PointClass", "Shape",
    "TopoGraph", "Vertex", "normalize", "parse_graph", "point_class", "point_order",
    "cell_dimension_at", "complement_components", "decompose_at_point", "kod_core_number",
    "automorphisms", "brute_force_automorphisms", "homogeneity_degree", "point_orbits",
]
