"""Rooted planar maps as half-edge permutations.

Half-edges are ``0..2E-1``. ``alpha`` pairs the two halves of an edge and
``sigma`` gives the next half-edge counter-clockwise around the same
vertex. Faces are the cycles of ``phi = sigma o alpha``, i.e.
``phi[h] = sigma[alpha[h]]``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from cubicplanar._jit import njit
from cubicplanar.exceptions import InvalidMapError
from cubicplanar.graph._types import CubicGraph


@njit()
def _orbit_labels(perm: np.ndarray) -> tuple[np.ndarray, int]:  # pragma: no cover
    size = perm.shape[0]
    labels = np.full(size, -1, dtype=np.int64)
    count = 0
    for h in range(size):
        if labels[h] < 0:
            x = h
            while labels[x] < 0:
                labels[x] = count
                x = perm[x]
            count += 1
    return labels, count


@dataclass(frozen=True, eq=False)
class PlanarMap:
    """A rooted map given by the edge involution ``alpha`` and the vertex rotation ``sigma``.

    Parameters
    ----------
    alpha
        Fixed-point-free involution on the half-edges.
    sigma
        Permutation whose cycles are the vertices.
    root
        The root half-edge; it leaves the root vertex.

    """

    alpha: np.ndarray = field(repr=False)
    sigma: np.ndarray = field(repr=False)
    root: int = 0

    def __post_init__(self) -> None:
        alpha = np.array(self.alpha, dtype=np.int64)
        sigma = np.array(self.sigma, dtype=np.int64)
        size = len(alpha)
        if size == 0 or size % 2 or len(sigma) != size:
            msg = "alpha and sigma must be permutations of the same even, non-zero size."
            raise InvalidMapError(msg)
        identity = np.arange(size)
        if not np.array_equal(np.sort(alpha), identity) or not np.array_equal(np.sort(sigma), identity):
            msg = "alpha and sigma must be permutations."
            raise InvalidMapError(msg)
        if np.any(alpha == identity) or not np.array_equal(alpha[alpha], identity):
            msg = "alpha must be a fixed-point-free involution."
            raise InvalidMapError(msg)
        if not 0 <= self.root < size:
            msg = f"Root half-edge {self.root} is out of range."
            raise InvalidMapError(msg)
        alpha.setflags(write=False)
        sigma.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "sigma", sigma)

    @property
    def num_half_edges(self) -> int:
        """Twice the number of edges."""
        return len(self.alpha)

    @property
    def num_edges(self) -> int:
        """Number of edges."""
        return len(self.alpha) // 2

    @functools.cached_property
    def phi(self) -> np.ndarray:
        """Face permutation ``sigma o alpha``."""
        return self.sigma[self.alpha]

    @functools.cached_property
    def vertex_of(self) -> np.ndarray:
        """Vertex index of every half-edge."""
        return _orbit_labels(self.sigma)[0]

    @functools.cached_property
    def face_of(self) -> np.ndarray:
        """Face index of every half-edge."""
        return _orbit_labels(self.phi)[0]

    @property
    def num_vertices(self) -> int:
        """Number of sigma cycles."""
        return int(self.vertex_of.max()) + 1

    @property
    def num_faces(self) -> int:
        """Number of phi cycles."""
        return int(self.face_of.max()) + 1

    def vertex_degrees(self) -> np.ndarray:
        """Degree of every vertex."""
        return np.bincount(self.vertex_of, minlength=self.num_vertices)

    def face_degrees(self) -> np.ndarray:
        """Degree of every face."""
        return np.bincount(self.face_of, minlength=self.num_faces)

    @property
    def is_connected(self) -> bool:
        """Whether the underlying graph is connected."""
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.num_vertices))
        tails = self.vertex_of
        heads = self.vertex_of[self.alpha]
        graph.add_edges_from(zip(tails.tolist(), heads.tolist()))
        return nx.is_connected(graph)

    @property
    def euler_characteristic(self) -> int:
        """``V - E + F``."""
        return self.num_vertices - self.num_edges + self.num_faces

    @property
    def is_simple(self) -> bool:
        """No loops and no parallel edges."""
        tails = self.vertex_of
        heads = self.vertex_of[self.alpha]
        if np.any(tails == heads):
            return False
        pairs = {(int(a), int(b)) for a, b in zip(tails, heads)}
        return len(pairs) == self.num_half_edges

    def check(self) -> None:
        """Raise `InvalidMapError` unless the map is connected and of genus 0."""
        if not self.is_connected:
            msg = "The map is not connected."
            raise InvalidMapError(msg)
        if self.euler_characteristic != 2:  # noqa: PLR2004
            msg = f"Euler's relation fails: V - E + F = {self.euler_characteristic}."
            raise InvalidMapError(msg)

    def mirror(self) -> PlanarMap:
        """The reflected map (every rotation reversed)."""
        inverse = np.empty_like(self.sigma)
        inverse[self.sigma] = np.arange(self.num_half_edges)
        return PlanarMap(self.alpha.copy(), inverse, self.root)

    def to_graph(self) -> tuple[CubicGraph, tuple[int, int]]:
        """The underlying graph with its rotation system, plus the oriented root edge."""
        vertex_of = self.vertex_of
        edges = [
            (int(vertex_of[h]), int(vertex_of[self.alpha[h]]))
            for h in range(self.num_half_edges)
            if h < self.alpha[h]
        ]
        rotation: dict[int, list[int]] = {}
        seen = np.zeros(self.num_half_edges, dtype=bool)
        for h in range(self.num_half_edges):
            if seen[h]:
                continue
            order = []
            x = h
            while not seen[x]:
                seen[x] = True
                order.append(int(vertex_of[self.alpha[x]]))
                x = self.sigma[x]
            rotation[int(vertex_of[h])] = order
        graph = CubicGraph.from_edges(edges, vertices=range(self.num_vertices))
        if self.is_simple:
            graph = graph.with_embedding({v: tuple(r) for v, r in rotation.items()})
        root = (int(vertex_of[self.root]), int(vertex_of[self.alpha[self.root]]))
        return graph, root


def dual_map(planar_map: PlanarMap) -> PlanarMap:
    """The dual map: faces become vertices and vice versa.

    With ``sigma* = sigma o alpha`` and ``alpha* = alpha`` the vertices of the
    dual are the faces of ``planar_map`` and its faces are the original
    vertices. The root half-edge is kept, so it crosses the original root.

    Raises
    ------
    InvalidMapError
        If ``planar_map`` is not a connected genus 0 map.

    """
    planar_map.check()
    return PlanarMap(planar_map.alpha.copy(), planar_map.phi.copy(), planar_map.root)


def rooted_map_key(planar_map: PlanarMap) -> bytes:
    """Canonical encoding of a rooted map: equal keys iff the rooted maps are isomorphic.

    Half-edges are renumbered in breadth-first order from the root,
    following ``alpha`` before ``sigma``.
    """
    alpha, sigma = planar_map.alpha, planar_map.sigma
    size = planar_map.num_half_edges
    new = np.full(size, -1, dtype=np.int64)
    new[planar_map.root] = 0
    queue = [planar_map.root]
    count = 1
    head = 0
    while head < len(queue):
        h = queue[head]
        head += 1
        for g in (alpha[h], sigma[h]):
            if new[g] < 0:
                new[g] = count
                count += 1
                queue.append(int(g))
    if count != size:
        msg = "Rooted map keys need a connected map."
        raise InvalidMapError(msg)
    order = np.empty(size, dtype=np.int64)
    order[new] = np.arange(size)
    encoded = np.concatenate([[size], new[alpha[order]], new[sigma[order]]]).astype(np.int32)
    return encoded.tobytes()


def map_from_embedding(graph: CubicGraph, root: tuple[int, int] | None = None) -> PlanarMap:
    """The planar map of a simple graph carrying a rotation system.

    Edge ``i`` of ``graph.edges = (u, v)`` becomes half-edges ``2i`` (leaving
    ``u``) and ``2i + 1`` (leaving ``v``); ``sigma`` follows the rotation of
    every vertex. The root half-edge is ``root`` (default: the first edge).

    Raises
    ------
    InvalidMapError
        If the graph has no embedding or is not simple.

    """
    if graph.embedding is None or not graph.is_simple:
        msg = "Need a simple graph with a rotation system."
        raise InvalidMapError(msg)
    half: dict[tuple[int, int], int] = {}
    alpha = np.empty(2 * graph.m, dtype=np.int64)
    for i, (u, v) in enumerate(graph.edges):
        half[(u, v)], half[(v, u)] = 2 * i, 2 * i + 1
        alpha[2 * i], alpha[2 * i + 1] = 2 * i + 1, 2 * i
    sigma = np.empty_like(alpha)
    for v, rotation in graph.embedding.items():
        for j, w in enumerate(rotation):
            sigma[half[(v, w)]] = half[(v, rotation[(j + 1) % len(rotation)])]
    start = half[root] if root is not None else 0
    return PlanarMap(alpha, sigma, start)
