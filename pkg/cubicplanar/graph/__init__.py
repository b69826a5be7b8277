"""Cubic graphs, networks and planar maps: validation, decomposition and canonical keys."""

from cubicplanar.graph._canonical import (
    MAX_RADIUS,
    NeighborhoodKey,
    automorphism_count,
    ball,
    canonical_form,
    neighborhood_key,
)
from cubicplanar.graph._compose import insert_network, recompose
from cubicplanar.graph._decompose import (
    CoreRecord,
    DecompositionTree,
    classify_network,
    core_edge_order,
    decompose,
    three_connected_components,
)
from cubicplanar.graph._io import (
    dumps,
    format_graph,
    from_dict,
    loads,
    parse_graph,
    read_graph,
    to_dict,
    write_graph,
)
from cubicplanar.graph._maps import PlanarMap, dual_map, map_from_embedding, rooted_map_key
from cubicplanar.graph._types import (
    CLASS_TAGS,
    ClassTag,
    CubicGraph,
    Network,
    check_network,
    network_from_graph,
)
from cubicplanar.graph._validate import ValidationReport, validate

__all__ = [
    "CLASS_TAGS",
    "MAX_RADIUS",
    "ClassTag",
    "CoreRecord",
    "CubicGraph",
    "DecompositionTree",
    "NeighborhoodKey",
    "Network",
    "PlanarMap",
    "ValidationReport",
    "automorphism_count",
    "ball",
    "canonical_form",
    "check_network",
    "classify_network",
    "core_edge_order",
    "decompose",
    "dual_map",
    "dumps",
    "format_graph",
    "from_dict",
    "insert_network",
    "loads",
    "map_from_embedding",
    "network_from_graph",
    "parse_graph",
    "read_graph",
    "recompose",
    "rooted_map_key",
    "three_connected_components",
    "to_dict",
    "validate",
    "write_graph",
]
