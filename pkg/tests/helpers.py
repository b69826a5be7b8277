"""Small hand-built graphs and networks shared by the tests."""

from __future__ import annotations

from cubicplanar.graph import CubicGraph, Network

K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def k4(offset: int = 0) -> CubicGraph:
    return CubicGraph.from_edges([(u + offset, v + offset) for u, v in K4_EDGES])


def prism() -> CubicGraph:
    return CubicGraph.from_edges(
        [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)],
    )


def k33() -> CubicGraph:
    return CubicGraph.from_edges([(a, b) for a in range(3) for b in range(3, 6)])


def _k4_minus_edge(a: int, b: int, c: int, d: int) -> list[tuple[int, int]]:
    """K4 on ``a, b, c, d`` without the edge ``a - b``."""
    return [(a, c), (a, d), (b, c), (b, d), (c, d)]


def loop_network() -> Network:
    """6 vertices: loop at 0, 0 - 1, and 1 joined to the poles of a K4 network."""
    edges = [(0, 0), (0, 1), (1, 2), (1, 3), *_k4_minus_edge(2, 3, 4, 5)]
    return Network(CubicGraph.from_edges(edges), (0, 0))


def double_network() -> Network:
    """6 vertices: the root 0 -> 1 doubled, K4 network between 2 and 3."""
    edges = [(0, 1), (0, 1), (0, 2), (1, 3), *_k4_minus_edge(2, 3, 4, 5)]
    return Network(CubicGraph.from_edges(edges), (0, 1))


def series_network() -> Network:
    """8 vertices: two K4 networks 0 -> 2 and 5 -> 1 joined by the bridge 2 - 5."""
    edges = [(0, 1), (2, 5), *_k4_minus_edge(0, 2, 3, 4), *_k4_minus_edge(5, 1, 6, 7)]
    return Network(CubicGraph.from_edges(edges), (0, 1))


def pair_network() -> Network:
    """10 vertices: root 0 -> 1 with two K4 networks 2 -> 3 and 6 -> 7 in parallel."""
    edges = [
        (0, 1),
        (0, 2),
        (1, 3),
        (0, 6),
        (1, 7),
        *_k4_minus_edge(2, 3, 4, 5),
        *_k4_minus_edge(6, 7, 8, 9),
    ]
    return Network(CubicGraph.from_edges(edges), (0, 1))


def isthmus_network() -> Network:
    """10 vertices: the bridge 0 -> 1 with a K4 network hanging off each pole."""
    edges = [
        (0, 1),
        (0, 2),
        (0, 3),
        (1, 6),
        (1, 7),
        *_k4_minus_edge(2, 3, 4, 5),
        *_k4_minus_edge(6, 7, 8, 9),
    ]
    return Network(CubicGraph.from_edges(edges), (0, 1))


def nested_h_network() -> Network:
    """8 vertices: K4 on 0..3 with a K4 network 4 -> 5 substituted for 2 - 3, rooted 0 -> 1."""
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 5), *_k4_minus_edge(4, 5, 6, 7)]
    return Network(CubicGraph.from_edges(edges), (0, 1))


ALL_NETWORKS = {
    "L": loop_network,
    "P-double": double_network,
    "S": series_network,
    "P-pair": pair_network,
    "I": isthmus_network,
    "H": nested_h_network,
}
