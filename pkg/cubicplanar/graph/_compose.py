"""Rebuild networks from decomposition trees and substitute networks into edges."""

from __future__ import annotations

import logging
from collections import Counter
from typing import TYPE_CHECKING

import networkx as nx

from cubicplanar.exceptions import DecompositionError, InvalidGraphError, InvalidNetworkError
from cubicplanar.graph._types import CubicGraph, Edge, Network, _normalized

if TYPE_CHECKING:
    from collections.abc import Mapping

    from cubicplanar.graph._decompose import DecompositionTree

logger = logging.getLogger(__name__)


def _node_edges(node: DecompositionTree) -> list[Edge]:  # noqa: PLR0911
    """The edges a node adds on top of its children (never its own root edge)."""
    kind = node.kind
    poles = [child.poles for child in node.children]
    if kind == "edge":
        return []
    if kind == "loop":
        s, s2 = node.vertices
        (u, v), = poles
        return [(s, s2), (s2, u), (s2, v)]
    if kind == "isthmus":
        s, t = node.vertices
        (u1, v1), (u2, v2) = poles  # type: ignore[misc]
        return [(s, u1), (s, v1), (t, u2), (t, v2)]
    if kind == "series":
        (_, u), (v, _) = poles  # type: ignore[misc]
        return [(u, v)]
    if kind == "parallel-double":
        s, t = node.vertices
        (u, v), = poles
        return [(s, u), (t, v), (s, t)]
    if kind == "parallel-pair":
        s, t = node.vertices
        (s1, t1), (s2, t2) = poles  # type: ignore[misc]
        return [(s, s1), (t, t1), (s, s2), (t, t2)]
    if kind == "polyhedral":
        assert node.core is not None
        edges = []
        for (a, b), child in zip(node.core.edges, node.children):
            if child.is_empty:
                edges.append((a, b))
            else:
                x, y = child.poles  # type: ignore[misc]
                edges.extend([(a, x), (b, y)])
        return edges
    msg = f"Unknown node kind `{kind}`."
    raise DecompositionError(msg)


def recompose(tree: DecompositionTree) -> Network:
    """Inverse of `decompose`: the network with the same labels and the same root.

    Every node contributes the edges joining its atoms to the poles of its
    children; the root edge of each child is dropped and only the top-level
    root is added back.
    """
    if tree.is_empty or tree.poles is None:
        msg = "An empty slot does not describe a network."
        raise DecompositionError(msg)
    vertices: list[int] = []
    edges: list[Edge] = []
    for node in tree.walk():
        vertices.extend(node.vertices)
        edges.extend(_node_edges(node))
    edges.append(tree.poles)
    graph = CubicGraph.from_edges(edges, vertices=vertices)
    return Network(graph, tree.poles, tree.class_tag)


def insert_network(
    core: CubicGraph,
    assignments: Mapping[Edge, Network | None],
    *,
    check: bool = True,
) -> CubicGraph:
    """Substitute networks for edges of ``core``.

    For every oriented edge ``(u, v)`` assigned a network ``N``, one copy of
    ``u - v`` is removed, ``N`` minus its root edge is added, and ``u`` is
    joined to the south pole and ``v`` to the north pole. Networks whose
    labels clash with labels already in use are shifted to fresh labels.

    Raises
    ------
    InvalidGraphError
        If an assigned edge is missing from ``core`` (or is assigned more
        often than it occurs).
    InvalidNetworkError
        If ``check`` is true and a network is an isthmus network: its
        substitution would create a bridge.

    """
    remaining = Counter(core.edge_counts)
    vertices = list(core.vertices)
    used = set(vertices)
    next_label = max(used, default=-1) + 1
    added: list[Edge] = []
    inserted = 0
    for edge, network in assignments.items():
        if network is None:
            continue
        key = _normalized(edge)
        if remaining[key] == 0:
            msg = f"{edge} is not an (unused) edge of the core."
            raise InvalidGraphError(msg)
        if check and not nx.is_connected(network.rest.to_simple_networkx()):
            msg = "An isthmus network cannot be substituted for an edge."
            raise InvalidNetworkError(msg)
        if used.intersection(network.graph.vertices):
            mapping = {v: next_label + i for i, v in enumerate(network.graph.vertices)}
            network = network.relabel(mapping)
        next_label = max(next_label, max(network.graph.vertices) + 1)
        remaining[key] -= 1
        inserted += 1
        used.update(network.graph.vertices)
        vertices.extend(network.graph.vertices)
        u, v = edge
        added.extend(network.rest.edges)
        added.extend([(u, network.south), (v, network.north)])
    edges = list(remaining.elements()) + added
    logger.debug("Inserted %d networks into a core of size %d.", inserted, core.n)
    return CubicGraph.from_edges(edges, vertices=vertices)
