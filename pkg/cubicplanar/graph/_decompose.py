"""Recursive decomposition of networks into loop, isthmus, series, parallel and polyhedral parts.

Every network ``N`` with root ``s -> t`` falls into exactly one class,
tested in this order:

1. loop: the root edge is a loop;
2. isthmus: ``N - e`` is disconnected;
3. series: ``N - e`` has a bridge separating ``s`` and ``t``; the split
   uses the bridge closest to ``s``;
4. parallel: the root is part of a double edge, or ``{s, t}`` is a
   2-vertex cut;
5. polyhedral: a 3-connected core with ``(1 + D)``-components on its
   non-root edges.

Vertex labels are kept throughout, so `recompose` restores the input
exactly.
"""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Literal

import networkx as nx

from cubicplanar.exceptions import DecompositionError
from cubicplanar.graph._types import ClassTag, CubicGraph, Network, check_network, network_from_graph

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator, Mapping

    from cubicplanar.graph._types import Edge

NodeKind = Literal[
    "edge",
    "loop",
    "isthmus",
    "series",
    "parallel-double",
    "parallel-pair",
    "polyhedral",
]

KIND_TO_CLASS: dict[str, ClassTag] = {
    "loop": "L",
    "isthmus": "I",
    "series": "S",
    "parallel-double": "P",
    "parallel-pair": "P",
    "polyhedral": "H",
}


@dataclass(frozen=True)
class CoreRecord:
    """The 3-connected core of a polyhedral node.

    Attributes
    ----------
    vertices
        Core vertices, sorted.
    root
        The oriented root edge of the core (the poles of the node).
    edges
        The non-root core edges in canonical order (see `core_edge_order`),
        each oriented; the component of the ``i``-th edge is attached with
        its south pole towards ``edges[i][0]``.

    """

    vertices: tuple[int, ...]
    root: tuple[int, int]
    edges: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        """Number of core vertices."""
        return len(self.vertices)

    def graph(self) -> CubicGraph:
        """The core as a simple cubic graph, root edge included."""
        return CubicGraph.from_edges([self.root, *self.edges], vertices=self.vertices)


@dataclass(frozen=True, eq=False)
class DecompositionTree:
    """Derivation tree of a network (or of an empty ``(1 + D)``-slot, ``kind="edge"``).

    Parameters
    ----------
    kind
        The node type.
    poles
        ``(south, north)`` of the network described by this node; ``None``
        for ``"edge"``.
    vertices
        The atoms (vertices) introduced by this node itself: ``(s, s')``
        for loops, the two poles for isthmus and parallel nodes, the core
        vertices for polyhedral nodes and nothing for series nodes.
    children
        Loop: the inner network on the two neighbours of ``s'``. Isthmus:
        the inner networks hanging off ``s`` and off ``t``. Series: the
        networks with roots ``s -> u`` and ``v -> t``. Parallel: the inner
        network (double) or the two networks of the pair. Polyhedral: one
        child per entry of ``core.edges``.
    core
        Core of a polyhedral node.

    """

    kind: NodeKind
    poles: tuple[int, int] | None = None
    vertices: tuple[int, ...] = ()
    children: tuple[DecompositionTree, ...] = field(default=(), repr=False)
    core: CoreRecord | None = field(default=None, repr=False)

    @property
    def is_empty(self) -> bool:
        """Whether this is an empty slot."""
        return self.kind == "edge"

    @property
    def class_tag(self) -> ClassTag | None:
        """``L, I, S, P`` or ``H``; ``None`` for an empty slot."""
        return KIND_TO_CLASS.get(self.kind)

    def walk(self) -> Iterator[DecompositionTree]:
        """All nodes in pre-order, without recursion."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    @functools.cached_property
    def size(self) -> int:
        """Number of vertices of the described network."""
        return sum(len(node.vertices) for node in self.walk())

    def cores(self) -> list[CoreRecord]:
        """All 3-connected cores, in pre-order."""
        return [node.core for node in self.walk() if node.core is not None]

    def core_sizes(self) -> list[int]:
        """Vertex counts of all cores, largest first."""
        return sorted((core.size for core in self.cores()), reverse=True)

    def to_dict(self) -> dict[str, Any]:
        """Flat JSON-ready form: a list of nodes referring to children by index."""
        nodes: list[dict[str, Any]] = []
        index: dict[int, int] = {}
        for node in self.walk():
            index[id(node)] = len(nodes)
            nodes.append({"kind": node.kind})
        for node in self.walk():
            entry = nodes[index[id(node)]]
            if node.poles is not None:
                entry["poles"] = list(node.poles)
            if node.vertices:
                entry["vertices"] = list(node.vertices)
            if node.children:
                entry["children"] = [index[id(c)] for c in node.children]
            if node.core is not None:
                entry["core"] = {
                    "vertices": list(node.core.vertices),
                    "root": list(node.core.root),
                    "edges": [list(e) for e in node.core.edges],
                }
        return {"size": self.size, "class": self.class_tag, "nodes": nodes}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> DecompositionTree:
        """Inverse of `to_dict`."""
        entries = data["nodes"]
        built: list[DecompositionTree | None] = [None] * len(entries)
        # children always come after their parent in pre-order
        for i in range(len(entries) - 1, -1, -1):
            entry = entries[i]
            core = None
            if "core" in entry:
                raw = entry["core"]
                core = CoreRecord(
                    vertices=tuple(raw["vertices"]),
                    root=tuple(raw["root"]),  # type: ignore[arg-type]
                    edges=tuple(tuple(e) for e in raw["edges"]),  # type: ignore[misc]
                )
            built[i] = cls(
                kind=entry["kind"],
                poles=tuple(entry["poles"]) if "poles" in entry else None,  # type: ignore[arg-type]
                vertices=tuple(entry.get("vertices", ())),
                children=tuple(built[c] for c in entry.get("children", ())),  # type: ignore[misc]
                core=core,
            )
        assert built[0] is not None
        return built[0]


EMPTY_SLOT = DecompositionTree("edge")


def core_edge_order(adjacency: Mapping[int, Any], root: tuple[int, int]) -> list[tuple[int, int]]:
    """Canonical enumeration and orientation of the non-root edges of a core.

    Breadth-first search from the south pole visiting neighbours by label;
    edges are listed when their earlier-discovered endpoint is processed
    and oriented away from it.
    """
    s, t = root
    root_key = frozenset(root)
    discovered = {s: 0}
    queue = deque([s])
    listed: set[frozenset[int]] = {root_key}
    order = []
    while queue:
        x = queue.popleft()
        for y in sorted(adjacency[x]):
            key = frozenset((x, y))
            if y not in discovered:
                discovered[y] = len(discovered)
                queue.append(y)
            if key not in listed:
                listed.add(key)
                order.append((x, y))
    if t not in discovered:
        msg = "The core is not connected."
        raise DecompositionError(msg)
    return order


def _with_root(graph: nx.MultiGraph, nodes: Any, root: tuple[int, int]) -> nx.MultiGraph:
    sub = nx.MultiGraph(graph.subgraph(nodes))
    sub.add_edge(*root)
    return sub


def _rest(graph: nx.MultiGraph, s: int, t: int) -> nx.Graph:
    rest = nx.MultiGraph(graph)
    rest.remove_edge(s, t)
    return nx.Graph(rest)


def _others(rest: nx.Graph, v: int, exclude: int) -> list[int]:
    return sorted(w for w in rest[v] if w != exclude)


def _series_bridge(rest: nx.Graph, s: int, t: int) -> tuple[int, int] | None:
    """The bridge of ``rest`` separating ``s`` from ``t`` that is closest to ``s``."""
    bridges = {frozenset(e) for e in nx.bridges(rest)}
    if not bridges:
        return None
    path = nx.shortest_path(rest, s, t)
    for a, b in zip(path, path[1:]):
        if frozenset((a, b)) in bridges:
            return a, b
    return None


def _classify(graph: nx.MultiGraph, s: int, t: int) -> tuple[NodeKind, nx.Graph | None, Any]:
    if s == t:
        return "loop", None, None
    rest = _rest(graph, s, t)
    if not nx.has_path(rest, s, t):
        return "isthmus", rest, None
    bridge = _series_bridge(rest, s, t)
    if bridge is not None:
        return "series", rest, bridge
    if graph.number_of_edges(s, t) >= 2:  # noqa: PLR2004
        return "parallel-double", rest, None
    inner = rest.subgraph(set(rest) - {s, t})
    parts = list(nx.connected_components(inner))
    if len(parts) > 1:
        return "parallel-pair", rest, parts
    return "polyhedral", rest, None


def classify_network(network: Network, *, check: bool = True) -> ClassTag:
    """The class ``L, I, S, P`` or ``H`` of ``network``.

    Raises
    ------
    InvalidNetworkError
        If ``check`` is true and ``network`` is not a valid network.

    Examples
    --------
    >>> k4 = CubicGraph.from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    >>> classify_network(Network(k4, (0, 1)))
    'H'

    """
    if check:
        check_network(network)
    kind, _, _ = _classify(network.graph.to_networkx(), *network.poles)
    return KIND_TO_CLASS[kind]


_Child = tuple[nx.MultiGraph, tuple[int, int]] | None


def _split(  # noqa: PLR0911
    graph: nx.MultiGraph,
    s: int,
    t: int,
) -> tuple[NodeKind, tuple[int, ...], CoreRecord | None, list[_Child]]:
    """One decomposition step: node kind, own vertices, core and child networks."""
    kind, rest, extra = _classify(graph, s, t)
    if kind == "loop":
        s2 = next(w for w in graph[s] if w != s)
        u, v = sorted(w for w in graph[s2] if w != s)
        inner = set(graph) - {s, s2}
        return kind, (s, s2), None, [(_with_root(graph, inner, (u, v)), (u, v))]
    assert rest is not None
    if kind == "isthmus":
        children: list[_Child] = []
        for pole, other in ((s, t), (t, s)):
            u, v = _others(rest, pole, other)
            side = nx.node_connected_component(rest, pole) - {pole}
            children.append((_with_root(rest, side, (u, v)), (u, v)))
        return kind, (s, t), None, children
    if kind == "series":
        u, v = extra
        cut = nx.Graph(rest)
        cut.remove_edge(u, v)
        first = nx.node_connected_component(cut, s)
        second = nx.node_connected_component(cut, t)
        return (
            kind,
            (),
            None,
            [(_with_root(cut, first, (s, u)), (s, u)), (_with_root(cut, second, (v, t)), (v, t))],
        )
    if kind == "parallel-double":
        (u,) = _others(rest, s, t)
        (v,) = _others(rest, t, s)
        inner = set(rest) - {s, t}
        return kind, (s, t), None, [(_with_root(rest, inner, (u, v)), (u, v))]
    if kind == "parallel-pair":
        parts = sorted(extra, key=min)
        if len(parts) != 2:  # noqa: PLR2004
            msg = f"Removing the poles left {len(parts)} pieces instead of 2."
            raise DecompositionError(msg)
        children = []
        for part in parts:
            (a,) = [w for w in rest[s] if w in part]
            (b,) = [w for w in rest[t] if w in part]
            children.append((_with_root(rest, part, (a, b)), (a, b)))
        return kind, (s, t), None, children
    return _split_polyhedral(graph, s, t)


def _split_polyhedral(
    graph: nx.MultiGraph,
    s: int,
    t: int,
) -> tuple[NodeKind, tuple[int, ...], CoreRecord, list[_Child]]:
    simple = nx.Graph(graph)
    core_vertices = next(c for c in nx.k_edge_components(simple, k=3) if s in c)
    if t not in core_vertices or len(core_vertices) < 4:  # noqa: PLR2004
        msg = f"No 3-connected core found around the root {(s, t)}."
        raise DecompositionError(msg)
    adjacency: dict[int, list[int]] = {v: [] for v in core_vertices}
    direct: set[frozenset[int]] = set()
    for a, b in simple.edges(core_vertices):
        if a in core_vertices and b in core_vertices:
            adjacency[a].append(b)
            adjacency[b].append(a)
            direct.add(frozenset((a, b)))
    attached: dict[frozenset[int], tuple[set[int], dict[int, int]]] = {}
    outside = simple.subgraph(set(simple) - core_vertices)
    for part in nx.connected_components(outside):
        links = [(x, y) for x in part for y in simple[x] if y in core_vertices]
        ends = {y for _, y in links}
        if len(links) != 2 or len(ends) != 2:  # noqa: PLR2004
            msg = "A component outside the core is not attached by two edges to two core vertices."
            raise DecompositionError(msg)
        (x1, y1), (x2, y2) = links
        key = frozenset(ends)
        if key in direct or key in attached:
            msg = f"The core has a parallel edge between {sorted(key)}."
            raise DecompositionError(msg)
        attached[key] = (set(part), {y1: x1, y2: x2})
        adjacency[y1].append(y2)
        adjacency[y2].append(y1)
    if any(len(nbrs) != 3 for nbrs in adjacency.values()):  # noqa: PLR2004
        msg = "The core is not cubic."
        raise DecompositionError(msg)
    order = core_edge_order(adjacency, (s, t))
    children: list[_Child] = []
    for a, b in order:
        key = frozenset((a, b))
        if key in direct:
            children.append(None)
            continue
        part, pole_of = attached[key]
        poles = (pole_of[a], pole_of[b])
        children.append((_with_root(simple, part, poles), poles))
    core = CoreRecord(vertices=tuple(sorted(core_vertices)), root=(s, t), edges=tuple(order))
    return "polyhedral", core.vertices, core, children


def decompose(network: Network, *, check: bool = True) -> DecompositionTree:
    """Decompose ``network`` recursively down to atoms and empty slots.

    Works with an explicit stack, so deep series chains do not hit the
    recursion limit.

    Raises
    ------
    InvalidNetworkError
        If ``check`` is true and ``network`` is not a valid network.
    DecompositionError
        If a polyhedral node has no valid 3-connected core (a bug or an
        invalid network with ``check=False``).

    """
    if check:
        check_network(network)
    # pre-order list of pending nodes: (kind, poles, vertices, core, child slots)
    protos: list[tuple[NodeKind, tuple[int, int] | None, tuple[int, ...], CoreRecord | None, list[int]]] = []
    stack: list[tuple[_Child, int, int]] = [((network.graph.to_networkx(), network.poles), -1, 0)]
    while stack:
        item, parent, slot = stack.pop()
        index = len(protos)
        if item is None:
            protos.append(("edge", None, (), None, []))
        else:
            graph, (s, t) = item
            kind, vertices, core, children = _split(graph, s, t)
            protos.append((kind, (s, t), vertices, core, [-1] * len(children)))
            stack.extend((child, index, i) for i, child in reversed(list(enumerate(children))))
        if parent >= 0:
            protos[parent][4][slot] = index
    built: list[DecompositionTree | None] = [None] * len(protos)
    for i in range(len(protos) - 1, -1, -1):
        kind, poles, vertices, core, child_ids = protos[i]
        built[i] = DecompositionTree(
            kind=kind,
            poles=poles,
            vertices=vertices,
            children=tuple(built[c] for c in child_ids),  # type: ignore[misc]
            core=core,
        )
    assert built[0] is not None
    return built[0]


RootRule = Literal["smallest", "largest"]


def _choose_root(graph: CubicGraph, rule: RootRule | Callable[[CubicGraph], Edge]) -> Edge:
    if callable(rule):
        return rule(graph)
    oriented = [(u, v) for u, v in graph.edges] + [(v, u) for u, v in graph.edges]
    if rule == "smallest":
        return min(oriented)
    if rule == "largest":
        return max(oriented)
    msg = f"Unknown root rule `{rule}`, use 'smallest', 'largest' or a callable."
    raise ValueError(msg)


def three_connected_components(
    graph: CubicGraph,
    root_choice: RootRule | Callable[[CubicGraph], Edge] = "smallest",
) -> list[CubicGraph]:
    """The 3-connected components of a connected simple cubic planar graph.

    The graph is rooted by ``root_choice`` and fully decomposed; the cores
    met at the polyhedral nodes are the components. They do not depend on
    the root and their vertex sets are pairwise disjoint.

    Returns
    -------
        The components, largest first (ties broken by smallest label).

    """
    network = network_from_graph(graph, _choose_root(graph, root_choice))
    cores = decompose(network).cores()
    cores.sort(key=lambda c: (-c.size, c.vertices[0]))
    return [core.graph() for core in cores]
