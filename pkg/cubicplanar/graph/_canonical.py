"""Canonical forms of small (rooted) graphs by individualization and refinement.

`canonical_form` returns a byte string that is equal for two graphs exactly
when they are isomorphic (respecting the initial vertex colouring). The
search refines an ordered partition to an equitable one, individualizes
the vertices of the first smallest non-trivial cell in turn and keeps the
smallest leaf certificate. Leaves with equal certificates give
automorphisms, which prune equivalent branches.
"""

from __future__ import annotations

import functools
import hashlib
from collections import deque
from typing import TYPE_CHECKING

import numpy as np
from networkx.algorithms import isomorphism

from cubicplanar.exceptions import RadiusGuardError
from cubicplanar.graph._types import CubicGraph

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

MAX_RADIUS = 6
"""Neighbourhood keys are refused beyond this radius (balls get too large)."""

_Cells = list[list[int]]


def _refine(adjacency: Sequence[Sequence[int]], cells: _Cells) -> _Cells:
    """Coarsest equitable refinement of the ordered partition ``cells``."""
    cell_of = [0] * len(adjacency)
    while True:
        for i, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = i
        refined: _Cells = []
        for cell in cells:
            if len(cell) == 1:
                refined.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                signature = tuple(sorted(cell_of[w] for w in adjacency[v]))
                groups.setdefault(signature, []).append(v)
            refined.extend(groups[key] for key in sorted(groups))
        if len(refined) == len(cells):
            return refined
        cells = refined


def _certificate(adjacency: Sequence[Sequence[int]], order: Sequence[int]) -> tuple[int, ...]:
    position = [0] * len(order)
    for i, v in enumerate(order):
        position[v] = i
    pairs = sorted(
        (min(position[v], position[w]), max(position[v], position[w]))
        for v in range(len(adjacency))
        for w in adjacency[v]
        if v <= w
    )
    return tuple(x for pair in pairs for x in pair)


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        root = x
        while self.parent.get(root, root) != root:
            root = self.parent[root]
        while x != root:
            self.parent[x], x = root, self.parent.get(x, x)
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class _Search:
    """State of one canonical labelling search."""

    def __init__(self, adjacency: Sequence[Sequence[int]]) -> None:
        self.adjacency = adjacency
        self.first: tuple[tuple[int, ...], list[int]] | None = None
        self.best: tuple[tuple[int, ...], list[int]] | None = None
        self.automorphisms: list[dict[int, int]] = []

    def _leaf(self, cells: _Cells) -> None:
        order = [cell[0] for cell in cells]
        cert = _certificate(self.adjacency, order)
        if self.first is None:
            self.first = self.best = (cert, order)
            return
        assert self.best is not None
        for known_cert, known_order in (self.first, self.best):
            if cert == known_cert:
                self.automorphisms.append(dict(zip(order, known_order)))
                return
        if cert < self.best[0]:
            self.best = (cert, order)

    def _orbits(self, prefix: Sequence[int]) -> _UnionFind:
        orbits = _UnionFind()
        for gamma in self.automorphisms:
            if all(gamma[v] == v for v in prefix):
                for v, w in gamma.items():
                    orbits.union(v, w)
        return orbits

    def run(self, cells: _Cells) -> None:
        # depth-first over (cells, prefix, candidates, explored) frames
        stack: list[tuple[_Cells, list[int], deque[int], list[int]]] = []
        start = _refine(self.adjacency, cells)
        if all(len(c) == 1 for c in start):
            self._leaf(start)
            return
        stack.append(self._frame(start, []))
        while stack:
            cells, prefix, candidates, explored = stack[-1]
            if not candidates:
                stack.pop()
                continue
            v = candidates.popleft()
            if explored:
                orbits = self._orbits(prefix)
                if any(orbits.find(v) == orbits.find(w) for w in explored):
                    continue
            explored.append(v)
            target = next(i for i, c in enumerate(cells) if v in c)
            child = [*cells[:target], [v], [w for w in cells[target] if w != v], *cells[target + 1 :]]
            child = _refine(self.adjacency, child)
            if all(len(c) == 1 for c in child):
                self._leaf(child)
            else:
                stack.append(self._frame(child, [*prefix, v]))

    @staticmethod
    def _frame(cells: _Cells, prefix: list[int]) -> tuple[_Cells, list[int], deque[int], list[int]]:
        size = min(len(c) for c in cells if len(c) > 1)
        target = next(c for c in cells if len(c) == size)
        return cells, prefix, deque(sorted(target)), []


def _indexed(graph: CubicGraph) -> tuple[list[int], list[list[int]]]:
    labels = sorted(graph.vertices)
    index = {v: i for i, v in enumerate(labels)}
    return labels, [[index[w] for w in graph.adjacency[v]] for v in labels]


def canonical_form(graph: CubicGraph, colors: Mapping[int, int] | None = None) -> bytes:
    """Isomorphism-invariant encoding of ``graph``.

    Parameters
    ----------
    graph
        A (multi)graph; loops and parallel edges are encoded with their
        multiplicity.
    colors
        Optional vertex colouring that isomorphisms must preserve (for
        instance the distance to a root). Colour classes are ordered by
        colour value.

    Returns
    -------
        Two graphs get equal bytes iff they are isomorphic by a map
        preserving colours.

    """
    labels, adjacency = _indexed(graph)
    colors = colors or {}
    classes: dict[int, list[int]] = {}
    for i, v in enumerate(labels):
        classes.setdefault(colors.get(v, 0), []).append(i)
    cells = [classes[c] for c in sorted(classes)]
    search = _Search(adjacency)
    search.run(cells)
    assert search.best is not None
    header = [len(labels), len(cells), *(len(c) for c in cells), *sorted(classes)]
    return np.array(header + list(search.best[0]), dtype=np.int64).tobytes()


def automorphism_count(graph: CubicGraph) -> int:
    """Number of vertex permutations preserving all edge multiplicities."""
    nx_graph = graph.to_networkx()
    matcher = isomorphism.MultiGraphMatcher(nx_graph, nx_graph)
    return sum(1 for _ in matcher.isomorphisms_iter())


def ball(graph: CubicGraph, root: int, radius: int) -> tuple[CubicGraph, dict[int, int]]:
    """The subgraph induced by the vertices within ``radius`` of ``root``, and their distances."""
    distance = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        if distance[v] == radius:
            continue
        for w in graph.adjacency[v]:
            if w not in distance:
                distance[w] = distance[v] + 1
                queue.append(w)
    edges = [(u, v) for u, v in graph.edges if u in distance and v in distance]
    return CubicGraph.from_edges(edges, vertices=sorted(distance)), distance


@functools.total_ordering
class NeighborhoodKey:
    """Hashable, ordered key of a rooted ball, returned by `neighborhood_key`."""

    __slots__ = ("data", "radius")

    def __init__(self, data: bytes, radius: int) -> None:
        self.data = data
        self.radius = radius

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NeighborhoodKey):
            return NotImplemented
        return (self.radius, self.data) == (other.radius, other.data)

    def __lt__(self, other: NeighborhoodKey) -> bool:
        return (self.radius, len(self.data), self.data) < (other.radius, len(other.data), other.data)

    def __hash__(self) -> int:
        return hash((self.radius, self.data))

    @property
    def size(self) -> int:
        """Number of vertices of the ball."""
        return int(np.frombuffer(self.data[:8], dtype=np.int64)[0])

    def hex(self) -> str:
        """Short printable digest of the key."""
        return hashlib.sha256(self.data).hexdigest()[:16]

    def __repr__(self) -> str:
        return f"NeighborhoodKey(radius={self.radius}, size={self.size}, digest={self.hex()!r})"


def neighborhood_key(graph: CubicGraph, v: int, k: int) -> NeighborhoodKey:
    """Isomorphism type of the radius-``k`` ball around ``v``, rooted at ``v``.

    Raises
    ------
    RadiusGuardError
        If ``k`` is negative or larger than `MAX_RADIUS`.

    """
    if not 0 <= k <= MAX_RADIUS:
        msg = f"Radius {k} is outside [0, {MAX_RADIUS}]; balls of cubic graphs grow like 3 * 2**k."
        raise RadiusGuardError(msg)
    sub, distance = ball(graph, v, k)
    return NeighborhoodKey(canonical_form(sub, distance), k)
