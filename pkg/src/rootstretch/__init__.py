"""Stretching elastic vertices of Coxeter diagrams: roots, root posets,
stretching classes and stable shard counts."""

from .diagram import (
    CoxeterDiagram,
    DiagramError,
    ElasticData,
    cartan_type,
    load_diagram,
    star,
    stretch_diagram,
    validate,
)
from .roots import (
    NotARootError,
    depth,
    generate_positive_roots,
    is_root,
    reflect,
)
from .stretch import (
    classify_cover,
    depth_growth_rate,
    expand_expression,
    squish_root,
    stretch_root,
    type1_expression,
)
from .classes import build_class_graph, downset_polynomial, stable_downset
from .arrangements import RationalArrangement, char_poly_finite_field, char_poly_mobius, region_count
from .shards import fractures_from_expression, shard_count, stable_charpoly

__all__ = [
    "CoxeterDiagram", "DiagramError", "ElasticData", "cartan_type", "load_diagram", "star",
    "stretch_diagram", "validate",
    "NotARootError", "depth", "generate_positive_roots", "is_root", "reflect",
    "classify_cover", "depth_growth_rate", "expand_expression", "squish_root", "stretch_root",
    "type1_expression",
    "build_class_graph", "downset_polynomial", "stable_downset",
    "RationalArrangement", "char_poly_finite_field", "char_poly_mobius", "region_count",
    "fractures_from_expression", "shard_count", "stable_charpoly",
]

__version__ = "0.1.0"
