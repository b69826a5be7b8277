from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from cubicplanar.exceptions import InvalidGraphError
from cubicplanar.graph._types import CubicGraph


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of `validate`.

    Attributes
    ----------
    cubic, simple, connected, planar
        The individual properties.
    euler
        Whether ``V - E + F = 2`` holds for the planarity witness (``False``
        when there is no witness).
    violations
        Human readable description of every failed property.
    embedding
        Rotation system (clockwise neighbour order) of the underlying simple
        graph when it is planar.

    """

    cubic: bool
    simple: bool
    connected: bool
    planar: bool
    euler: bool
    violations: tuple[str, ...] = ()
    embedding: dict[int, tuple[int, ...]] | None = field(default=None, repr=False)

    @property
    def valid(self) -> bool:
        """All properties hold."""
        return not self.violations

    def raise_if_invalid(self) -> None:
        """Raise `InvalidGraphError` listing the violations."""
        if self.violations:
            msg = "Invalid cubic planar graph: " + "; ".join(self.violations) + "."
            raise InvalidGraphError(msg)


def _count_faces(embedding: nx.PlanarEmbedding) -> int:
    seen: set[tuple[int, int]] = set()
    faces = 0
    for u, v in embedding.edges():
        if (u, v) not in seen:
            embedding.traverse_face(u, v, mark_half_edges=seen)
            faces += 1
    return faces


def validate(graph: CubicGraph) -> ValidationReport:
    """Check 3-regularity, simplicity, connectivity and planarity of ``graph``.

    Planarity uses the linear-time test of networkx on the underlying simple
    graph (loops and parallel edges never affect planarity); on success the
    rotation system is returned as witness and Euler's relation is checked
    on it.

    Examples
    --------
    >>> k4 = CubicGraph.from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    >>> validate(k4).valid
    True

    """
    violations = []
    degrees = {v: graph.degree(v) for v in graph.vertices}
    bad = sorted(v for v, d in degrees.items() if d != 3)  # noqa: PLR2004
    cubic = not bad
    if not cubic:
        violations.append(f"vertices {bad[:10]} do not have degree 3")
    simple = graph.is_simple
    if not simple:
        loops = sum(1 for u, v in graph.edges if u == v)
        multi = sum(k - 1 for (u, v), k in graph.edge_counts.items() if u != v and k > 1)
        violations.append(f"not simple ({loops} loops, {multi} parallel edges)")
    underlying = graph.to_simple_networkx()
    connected = graph.n > 0 and nx.is_connected(underlying)
    if not connected:
        violations.append("not connected")
    planar, certificate = nx.check_planarity(underlying)
    embedding = None
    euler = False
    if planar:
        embedding = {v: tuple(nbrs) for v, nbrs in certificate.get_data().items()}
        if connected:
            faces = _count_faces(certificate)
            euler = underlying.number_of_nodes() - underlying.number_of_edges() + faces == 2  # noqa: PLR2004
            if not euler:
                violations.append("the planarity witness violates Euler's relation")
    else:
        violations.append("not planar")
    return ValidationReport(
        cubic=cubic,
        simple=simple,
        connected=connected,
        planar=planar,
        euler=euler,
        violations=tuple(violations),
        embedding=embedding,
    )
