"""Exhaustive enumeration of small cubic planar graphs and networks.

These are brute-force oracles for the grammar counts and the samplers:
labelled simple graphs with a prescribed degree sequence are generated by
letting the smallest vertex with free degree choose its partners among the
larger ones, which produces every labelled graph exactly once.
"""

from __future__ import annotations

import logging
import math
from itertools import combinations
from typing import TYPE_CHECKING

import networkx as nx

from cubicplanar.exceptions import EnumerationRangeError
from cubicplanar.graph import CLASS_TAGS, CubicGraph, Network, automorphism_count, canonical_form, classify_network

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

    from cubicplanar.graph import ClassTag

logger = logging.getLogger(__name__)

MAX_GRAPH_VERTICES = 10
MAX_NETWORK_VERTICES = 8

Edge = tuple[int, int]


def _check_range(n: int, largest: int, what: str) -> None:
    if n % 2 or not 4 <= n <= largest:  # noqa: PLR2004
        msg = f"Exhaustive enumeration of {what} supports n in 4, 6, ..., {largest}; got n={n}."
        raise EnumerationRangeError(msg)


def simple_graphs(degrees: Sequence[int]) -> Iterator[list[Edge]]:
    """All labelled simple graphs on ``0..len(degrees)-1`` with the given degrees.

    Every graph is yielded once, as a list of edges ``(u, v)`` with ``u < v``.
    """
    free = list(degrees)
    edges: list[Edge] = []

    def extend() -> Iterator[list[Edge]]:
        v = next((i for i, d in enumerate(free) if d > 0), None)
        if v is None:
            yield list(edges)
            return
        candidates = [u for u in range(v + 1, len(free)) if free[u] > 0]
        need = free[v]
        for partners in combinations(candidates, need):
            free[v] = 0
            for u in partners:
                free[u] -= 1
                edges.append((v, u))
            yield from extend()
            for u in partners:
                free[u] += 1
                edges.pop()
            free[v] = need

    return extend()


def _is_connected_planar(edges: list[Edge], n: int) -> bool:
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from((u, v) for u, v in edges if u != v)
    if not nx.is_connected(graph):
        return False
    planar, _ = nx.check_planarity(graph)
    return planar


def enumerate_cubic_planar(n: int) -> list[CubicGraph]:
    """All labelled connected simple cubic planar graphs on ``0..n-1``.

    Raises
    ------
    EnumerationRangeError
        Unless ``n`` is one of 4, 6, 8, 10. At ``n = 10`` all eleven million
        labelled cubic graphs are visited, which takes a long time; use
        `count_cubic_planar` for counts.

    """
    _check_range(n, MAX_GRAPH_VERTICES, "graphs")
    graphs = [
        CubicGraph.from_edges(edges, vertices=range(n))
        for edges in simple_graphs([3] * n)
        if _is_connected_planar(edges, n)
    ]
    logger.info("Enumerated %d labelled cubic planar graphs with %d vertices.", len(graphs), n)
    return graphs


def _bfs_graphs(n: int) -> Iterator[list[Edge]]:
    """Connected cubic graphs labelled in breadth-first order from vertex 0.

    The vertex being completed joins either larger vertices already reached
    or the next unreached labels, in order. Every connected cubic graph has
    such a labelling, so every isomorphism class appears (usually several
    times).
    """
    free = [3] * n
    edges: list[Edge] = []

    def extend(v: int, reached: int) -> Iterator[list[Edge]]:
        while v < n and free[v] == 0:
            v += 1
        if v == n:
            if reached == n:
                yield list(edges)
            return
        if v >= reached:
            return
        need = free[v]
        known = [u for u in range(v + 1, reached) if free[u] > 0]
        for fresh in range(min(need, n - reached) + 1):
            for partners in combinations(known, need - fresh):
                chosen = [*partners, *range(reached, reached + fresh)]
                free[v] = 0
                for u in chosen:
                    free[u] -= 1
                    edges.append((v, u))
                yield from extend(v + 1, reached + fresh)
                for u in chosen:
                    free[u] += 1
                    edges.pop()
                free[v] = need

    free[0] = 0
    edges.extend((0, u) for u in (1, 2, 3))
    for u in (1, 2, 3):
        free[u] -= 1
    return extend(1, 4)


def unlabelled_cubic_planar(n: int) -> list[tuple[CubicGraph, int]]:
    """One representative per isomorphism class with its automorphism count.

    Raises
    ------
    EnumerationRangeError
        Unless ``n`` is one of 4, 6, 8, 10.

    """
    _check_range(n, MAX_GRAPH_VERTICES, "graphs")
    classes: dict[bytes, CubicGraph] = {}
    for edges in _bfs_graphs(n):
        if not _is_connected_planar(edges, n):
            continue
        graph = CubicGraph.from_edges(edges, vertices=range(n))
        classes.setdefault(canonical_form(graph), graph)
    return [(graph, automorphism_count(graph)) for _, graph in sorted(classes.items())]


def count_cubic_planar(n: int) -> int:
    """Number of labelled connected simple cubic planar graphs with ``n`` vertices, ``sum n!/|Aut|``."""
    return sum(math.factorial(n) // aut for _, aut in unlabelled_cubic_planar(n))


def enumerate_networks(n: int) -> dict[ClassTag, list[Network]]:
    """All labelled networks on ``0..n-1`` rooted at ``0 -> 1`` or at a loop on ``0``, by class.

    Networks at any other root are relabellings of these, so the number of
    labelled networks of a class is ``n (n - 1)`` times the count at
    ``0 -> 1`` plus ``n`` times the count at the loop (see `count_networks`).

    Raises
    ------
    EnumerationRangeError
        Unless ``n`` is one of 4, 6, 8.

    """
    _check_range(n, MAX_NETWORK_VERTICES, "networks")
    out: dict[ClassTag, list[Network]] = {tag: [] for tag in CLASS_TAGS}
    for root, degrees in (((0, 1), [2, 2] + [3] * (n - 2)), ((0, 0), [1] + [3] * (n - 1))):
        for edges in simple_graphs(degrees):
            if not _is_connected_planar([*edges, root], n):
                continue
            network = Network(CubicGraph.from_edges([*edges, root], vertices=range(n)), root)
            out[classify_network(network)].append(network)
    logger.info(
        "Enumerated networks with %d vertices: %s",
        n,
        {tag: len(networks) for tag, networks in out.items()},
    )
    return out


def count_networks(n: int) -> dict[str, int]:
    """Number of labelled networks with ``n`` vertices per class, plus the total under ``"D"``."""
    counts: dict[str, int] = {}
    for tag, networks in enumerate_networks(n).items():
        loops = sum(1 for network in networks if network.south == network.north)
        counts[tag] = n * (n - 1) * (len(networks) - loops) + n * loops
    counts["D"] = sum(counts.values())
    return counts
