"""Uniform rooted simple triangulations by closing blossoming trees.

A blossoming tree here is a plane tree with ``n`` nodes where every node
carries exactly two stems (dangling half-edges). Walking around the tree
gives a cyclic word in stems ``a`` and edge sides ``b``. Every stem followed
by two sides is closed into a triangle; the two stems pending at the end
are the only consecutive ``a a`` pairs ("double corners"). The remaining
stems are joined to two new vertices ``A`` and ``B``, split by the double
corners, and the edge ``A - B`` is added. The result is rerooted at a
uniform half-edge.

Half-edges follow `cubicplanar.graph.PlanarMap`: ``alpha`` pairs them and
``sigma`` rotates counter-clockwise around a vertex.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import numpy as np

from cubicplanar._jit import njit
from cubicplanar.exceptions import InvalidMapError
from cubicplanar.graph import PlanarMap, dual_map

if TYPE_CHECKING:
    from numpy.random import Generator

logger = logging.getLogger(__name__)


def _children_counts(n: int, rng: Generator) -> np.ndarray:
    """Children counts ``(c0, c1, c2)`` around the two stems of each node, in preorder.

    A uniform weak composition of ``n - 1`` into ``3n`` parts is rotated
    (node-wise) to its unique valid Lukasiewicz conjugate.
    """
    counts = np.zeros((n, 3), dtype=np.int64)
    if n > 1:
        balls = np.sort(rng.choice(4 * n - 2, size=n - 1, replace=False))
        boxes = balls - np.arange(n - 1)
        counts = np.bincount(boxes, minlength=3 * n).reshape(n, 3)
    steps = counts.sum(axis=1) - 1
    prefix = np.cumsum(steps)
    start = (int(np.argmin(prefix)) + 1) % n
    return np.roll(counts, -start, axis=0)


def _build_tree(counts: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Half-edge arrays of the blossoming tree described by ``counts``.

    Returns ``alpha`` (``-1`` for stems and for the slots reserved for the
    closure), ``sigma`` and the stem mask, all of size ``6n``.
    """
    n = len(counts)
    size = 6 * n
    alpha = np.full(size, -1, dtype=np.int64)
    sigma = np.full(size, -1, dtype=np.int64)
    is_stem = np.zeros(size, dtype=np.int64)
    next_id = 0
    # pending child slots: (rotation list of the parent, index in that list)
    pending: list[tuple[list[int], int]] = []
    rotations: list[list[int]] = []
    for node in range(n):
        rotation: list[int] = []
        if node > 0:
            parent_rotation, slot = pending.pop()
            down, up = next_id, next_id + 1
            next_id += 2
            alpha[down], alpha[up] = up, down
            parent_rotation[slot] = down
            rotation.append(up)
        slots = []
        for gap in range(3):
            for _ in range(counts[node, gap]):
                slots.append(len(rotation))
                rotation.append(-1)
            if gap < 2:  # noqa: PLR2004
                is_stem[next_id] = 1
                rotation.append(next_id)
                next_id += 1
        pending.extend((rotation, slot) for slot in reversed(slots))
        rotations.append(rotation)
    for rotation in rotations:
        for i, h in enumerate(rotation):
            sigma[h] = rotation[(i + 1) % len(rotation)]
    return alpha, sigma, is_stem


@njit()
def _close(  # pragma: no cover
    word: np.ndarray,
    kind: np.ndarray,
    alpha: np.ndarray,
    sigma: np.ndarray,
    next_id: int,
) -> tuple[np.ndarray, int]:
    """Close every stem followed by two sides; returns the remaining cyclic word."""
    length = word.shape[0]
    best = 0
    start = 0
    total = 0
    for i in range(length):
        total += 1 if kind[word[i]] == 1 else -1
        if total < best:
            best = total
            start = i + 1
    stack = np.empty(length, dtype=np.int64)
    top = 0
    for k in range(length):
        stack[top] = word[(start + k) % length]
        top += 1
        while top >= 3:  # noqa: PLR2004
            stem = stack[top - 3]
            if kind[stem] != 1 or kind[stack[top - 2]] != 0 or kind[stack[top - 1]] != 0:
                break
            back = alpha[stack[top - 1]]
            partner = next_id
            next_id += 1
            sigma[partner] = sigma[back]
            sigma[back] = partner
            alpha[stem] = partner
            alpha[partner] = stem
            kind[stem] = 0
            top -= 2
    return stack[:top].copy(), next_id


def _contour(alpha: np.ndarray, sigma: np.ndarray, start: int, length: int) -> np.ndarray:
    word = np.empty(length, dtype=np.int64)
    h = start
    for i in range(length):
        word[i] = h
        h = sigma[alpha[h]] if alpha[h] >= 0 else sigma[h]
    return word


def _attach(stems: list[int], edge_half: int, next_id: int, alpha: np.ndarray, sigma: np.ndarray) -> int:
    """Join ``stems`` (in contour order) to a new vertex that also holds ``edge_half``."""
    partners = list(range(next_id, next_id + len(stems)))
    for stem, partner in zip(stems, partners):
        alpha[stem], alpha[partner] = partner, stem
    # the new vertex sees the stems in reverse contour order
    for j in range(1, len(partners)):
        sigma[partners[j]] = partners[j - 1]
    sigma[partners[0]] = edge_half
    sigma[edge_half] = partners[-1]
    return next_id + len(stems)


def sample_triangulation(n: int, rng: Generator) -> PlanarMap:
    """Uniform rooted simple triangulation with ``n + 2`` vertices and ``2n`` faces.

    Parameters
    ----------
    n
        Size parameter, at least 2 (``n = 2`` is the tetrahedron).
    rng
        Random generator.

    Returns
    -------
        The map, rooted at a uniformly chosen half-edge.

    Raises
    ------
    InvalidMapError
        If ``n < 2``, or if the closure leaves a number of double corners
        other than two.

    """
    if n < 2:  # noqa: PLR2004
        msg = f"Simple triangulations need n >= 2 (at least 4 vertices), got n={n}."
        raise InvalidMapError(msg)
    alpha, sigma, is_stem = _build_tree(_children_counts(n, rng))
    tree_half_edges = 4 * n - 2
    word = _contour(alpha, sigma, 0, tree_half_edges)
    kind = is_stem.copy()
    rest, next_id = _close(word, kind, alpha, sigma, tree_half_edges)
    k = len(rest)
    corners = [i for i in range(k) if kind[rest[i]] == 1 and kind[rest[(i + 1) % k]] == 1]
    if len(corners) != 2:  # noqa: PLR2004
        msg = f"The closure left {len(corners)} double corners instead of 2."
        raise InvalidMapError(msg)
    first = int(rng.integers(2))
    c, other = corners[first], corners[1 - first]

    def arc(begin: int, end: int) -> list[int]:
        out = []
        i = (begin + 1) % k
        while True:
            if kind[rest[i]] == 1:
                out.append(int(rest[i]))
            if i == end:
                return out
            i = (i + 1) % k

    e_a, e_b = next_id, next_id + 1
    alpha[e_a], alpha[e_b] = e_b, e_a
    next_id = _attach(arc(c, other), e_a, next_id + 2, alpha, sigma)
    next_id = _attach(arc(other, c), e_b, next_id, alpha, sigma)
    assert next_id == len(alpha)
    # reroot uniformly: the closure fixes the unrooted map, any half-edge may be the root
    return PlanarMap(alpha, sigma, int(rng.integers(len(alpha))))


def sample_uniform_3connected(k: int, rng: Generator) -> PlanarMap:
    """Uniform rooted 3-connected cubic planar map with ``2k`` vertices.

    The dual of a uniform simple triangulation with ``k + 2`` vertices,
    reflected with probability 1/2 so both embeddings of the underlying
    graph are equally likely.
    """
    cubic = dual_map(sample_triangulation(k, rng))
    if rng.random() < 0.5:  # noqa: PLR2004
        cubic = cubic.mirror()
    return cubic
