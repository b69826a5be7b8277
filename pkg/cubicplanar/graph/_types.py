"""Value types for cubic multigraphs and rooted networks."""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Literal

import networkx as nx

from cubicplanar.exceptions import InvalidGraphError, InvalidNetworkError

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping

ClassTag = Literal["L", "I", "S", "P", "H"]
CLASS_TAGS: tuple[ClassTag, ...] = ("L", "I", "S", "P", "H")

Edge = tuple[int, int]


def _normalized(edge: Edge) -> Edge:
    u, v = edge
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True, eq=False)
class CubicGraph:
    """An undirected multigraph on integer labels, meant to be 3-regular.

    Parameters
    ----------
    vertices
        The vertex labels.
    edges
        Unordered pairs; parallel edges are repeated and a loop at ``u`` is ``(u, u)``.
    embedding
        Optional rotation system: for each vertex its neighbours in cyclic
        order (a planarity witness as produced by `validate`).

    Notes
    -----
    Construction only checks that the edges use known labels; the
    remaining invariants are checked by `validate`.

    """

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    embedding: Mapping[int, tuple[int, ...]] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            msg = "Vertex labels must be distinct."
            raise InvalidGraphError(msg)
        for u, v in self.edges:
            if u not in known or v not in known:
                msg = f"Edge {(u, v)} uses a vertex that is not in the graph."
                raise InvalidGraphError(msg)

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], vertices: Iterable[int] | None = None) -> CubicGraph:
        """Build a graph from an edge list, taking the vertices from the edges if not given."""
        edge_tuple = tuple(_normalized((int(u), int(v))) for u, v in edges)
        if vertices is None:
            vertices = sorted({x for e in edge_tuple for x in e})
        return cls(tuple(int(v) for v in vertices), edge_tuple)

    @classmethod
    def from_networkx(cls, graph: nx.Graph | nx.MultiGraph) -> CubicGraph:
        """Convert a networkx (multi)graph with integer nodes."""
        return cls.from_edges(graph.edges(), vertices=sorted(graph.nodes))

    @property
    def n(self) -> int:
        """Number of vertices."""
        return len(self.vertices)

    @property
    def m(self) -> int:
        """Number of edges, counted with multiplicity."""
        return len(self.edges)

    @functools.cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        """Neighbour lists with multiplicity; a loop contributes its vertex twice."""
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(nbrs)) for v, nbrs in adj.items()}

    def degree(self, v: int) -> int:
        """Degree of ``v``; loops count twice."""
        return len(self.adjacency[v])

    @functools.cached_property
    def edge_counts(self) -> Counter[Edge]:
        """Multiplicity of every normalised edge."""
        return Counter(_normalized(e) for e in self.edges)

    @property
    def is_cubic(self) -> bool:
        """Whether every vertex has degree 3."""
        return all(len(nbrs) == 3 for nbrs in self.adjacency.values())  # noqa: PLR2004

    @property
    def is_simple(self) -> bool:
        """Whether the graph has no loops and no parallel edges."""
        return all(u != v and k == 1 for (u, v), k in self.edge_counts.items())

    def to_networkx(self) -> nx.MultiGraph:
        """The graph as a networkx MultiGraph."""
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    def to_simple_networkx(self) -> nx.Graph:
        """The underlying simple graph (loops dropped, parallel edges merged)."""
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from((u, v) for u, v in self.edges if u != v)
        return graph

    def relabel(self, mapping: Mapping[int, int]) -> CubicGraph:
        """Rename vertices through ``mapping`` (labels not in it stay)."""
        vertices = tuple(mapping.get(v, v) for v in self.vertices)
        edges = tuple(_normalized((mapping.get(u, u), mapping.get(v, v))) for u, v in self.edges)
        embedding = None
        if self.embedding is not None:
            embedding = {
                mapping.get(v, v): tuple(mapping.get(w, w) for w in rot)
                for v, rot in self.embedding.items()
            }
        return CubicGraph(vertices, edges, embedding)

    def with_embedding(self, embedding: Mapping[int, tuple[int, ...]]) -> CubicGraph:
        """Copy of the graph carrying ``embedding``."""
        return CubicGraph(self.vertices, self.edges, dict(embedding))

    def same_edges(self, other: CubicGraph) -> bool:
        """Label-preserving equality of vertex sets and edge multisets."""
        return set(self.vertices) == set(other.vertices) and self.edge_counts == other.edge_counts

    def __repr__(self) -> str:
        return f"CubicGraph(n={self.n}, m={self.m})"


@dataclass(frozen=True, eq=False)
class Network:
    """A cubic multigraph with an oriented root edge ``south -> north``.

    The root edge is one copy of the edge between the two poles (a loop when
    they coincide); removing it must leave a simple graph.

    Parameters
    ----------
    graph
        The multigraph, root edge included.
    poles
        ``(south, north)``.
    class_tag
        Optional class of the network, one of ``L, I, S, P, H``.

    """

    graph: CubicGraph
    poles: tuple[int, int]
    class_tag: ClassTag | None = None

    def __post_init__(self) -> None:
        if self.graph.edge_counts.get(_normalized(self.poles), 0) == 0:
            msg = f"The poles {self.poles} are not joined by an edge."
            raise InvalidNetworkError(msg)
        if self.class_tag is not None and self.class_tag not in CLASS_TAGS:
            msg = f"Unknown class tag `{self.class_tag}`, use one of {CLASS_TAGS}."
            raise InvalidNetworkError(msg)

    @property
    def south(self) -> int:
        """Tail of the root edge."""
        return self.poles[0]

    @property
    def north(self) -> int:
        """Head of the root edge."""
        return self.poles[1]

    @property
    def n(self) -> int:
        """Number of vertices."""
        return self.graph.n

    @functools.cached_property
    def rest(self) -> CubicGraph:
        """The graph with one copy of the root edge removed."""
        root = _normalized(self.poles)
        edges = list(self.graph.edges)
        for i, e in enumerate(edges):
            if _normalized(e) == root:
                del edges[i]
                break
        return CubicGraph(self.graph.vertices, tuple(edges))

    def associated_edges(self) -> list[tuple[int | None, int | None]]:
        """The ``3n/2 + 1`` edges this network accounts for once inserted into a host edge.

        These are the edges off the root in label order, then the links
        ``host tail -> south`` and ``north -> host head``; ``None`` stands
        for the endpoint of the host edge.
        """
        off_root: list[tuple[int | None, int | None]] = sorted(_normalized(e) for e in self.rest.edges)
        return [*off_root, (None, self.south), (self.north, None)]

    def with_tag(self, tag: ClassTag) -> Network:
        """Copy carrying ``tag``."""
        return Network(self.graph, self.poles, tag)

    def relabel(self, mapping: Mapping[int, int]) -> Network:
        """Rename vertices through ``mapping``."""
        poles = (mapping.get(self.south, self.south), mapping.get(self.north, self.north))
        return Network(self.graph.relabel(mapping), poles, self.class_tag)

    def __repr__(self) -> str:
        tag = f", class_tag={self.class_tag!r}" if self.class_tag else ""
        return f"Network(n={self.n}, poles={self.poles}{tag})"


def check_network(network: Network) -> None:
    """Raise `InvalidNetworkError` unless ``network`` satisfies the network invariants.

    The graph must be connected and cubic with an even number of at least
    four vertices, and it must become simple after removing the root edge.
    """
    graph = network.graph
    if graph.n < 4 or graph.n % 2:  # noqa: PLR2004
        msg = f"A network has an even number of at least 4 vertices, got {graph.n}."
        raise InvalidNetworkError(msg)
    if not graph.is_cubic:
        msg = "Every vertex of a network has degree 3."
        raise InvalidNetworkError(msg)
    if not network.rest.is_simple:
        msg = "Removing the root edge must leave a simple graph."
        raise InvalidNetworkError(msg)
    if not nx.is_connected(graph.to_simple_networkx()):
        msg = "A network is connected."
        raise InvalidNetworkError(msg)


def network_from_graph(graph: CubicGraph, root: Edge | None = None) -> Network:
    """Root a simple cubic graph at the oriented edge ``root``.

    By default the lexicographically smallest oriented edge is used; every
    oriented edge of a simple graph gives a simple network.
    """
    if not graph.is_simple:
        msg = "Only simple graphs can be rooted this way."
        raise InvalidGraphError(msg)
    if root is None:
        root = min(graph.edges)
    elif graph.edge_counts.get(_normalized(root), 0) == 0:
        msg = f"{root} is not an edge of the graph."
        raise InvalidGraphError(msg)
    return Network(graph, (int(root[0]), int(root[1])))
