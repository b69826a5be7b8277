"""Assemble sampled derivations into decomposition trees and networks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from cubicplanar.exceptions import SamplerBudgetError
from cubicplanar.graph import (
    CoreRecord,
    DecompositionTree,
    Network,
    core_edge_order,
    recompose,
)

if TYPE_CHECKING:
    from numpy.random import Generator

    from cubicplanar.graph import PlanarMap
    from cubicplanar.graph._decompose import NodeKind


@dataclass
class _Proto:
    kind: NodeKind
    atoms: int
    children: list[int] = field(default_factory=list)
    core_map: PlanarMap | None = None


class TreeBuilder:
    """Collects tree nodes as a sampler creates them, then labels and builds the tree.

    Nodes are registered with the slot of their parent they fill, so the
    order in which a sampler expands its pending slots does not matter.

    Parameters
    ----------
    max_size
        Vertex budget; `add` raises `SamplerBudgetError` beyond it.

    """

    def __init__(self, max_size: int) -> None:
        self.max_size = max_size
        self.size = 0
        self._protos: list[_Proto] = []

    def add(
        self,
        kind: NodeKind,
        atoms: int,
        num_children: int,
        parent: tuple[int, int] | None = None,
        core_map: PlanarMap | None = None,
    ) -> int:
        """Register a node with ``atoms`` own vertices and ``num_children`` empty slots.

        Parameters
        ----------
        parent
            ``(parent index, slot)`` filled by this node; ``None`` for the root.

        Returns
        -------
            The index of the new node.

        """
        self.reserve(atoms)
        index = len(self._protos)
        self._protos.append(_Proto(kind, atoms, [-1] * num_children, core_map))
        if parent is not None:
            parent_index, slot = parent
            self._protos[parent_index].children[slot] = index
        return index

    def reserve(self, atoms: int) -> None:
        """Count ``atoms`` more vertices against the budget."""
        self.size += atoms
        if self.size > self.max_size:
            msg = f"The sample exceeded the size budget of {self.max_size} vertices."
            raise SamplerBudgetError(msg)

    def set_core(self, index: int, core_map: PlanarMap) -> None:
        """Attach the sampled core map of a polyhedral node."""
        self._protos[index].core_map = core_map

    @property
    def is_empty(self) -> bool:
        """Whether the root is an empty slot (or nothing was added)."""
        return not self._protos or self._protos[0].kind == "edge"

    def _preorder(self) -> list[int]:
        order = []
        stack = [0]
        while stack:
            i = stack.pop()
            order.append(i)
            stack.extend(reversed(self._protos[i].children))
        return order

    def build(self, rng: Generator | None = None) -> DecompositionTree:
        """The decomposition tree with vertex labels ``0..size-1``.

        Labels are handed out in pre-order, through a uniform random
        permutation when ``rng`` is given.
        """
        if not self._protos:
            msg = "Nothing was sampled."
            raise ValueError(msg)
        order = self._preorder()
        labels = list(range(self.size))
        if rng is not None:
            labels = [int(x) for x in rng.permutation(self.size)]
        own: dict[int, list[int]] = {}
        cursor = 0
        for i in order:
            atoms = self._protos[i].atoms
            own[i] = labels[cursor : cursor + atoms]
            cursor += atoms
        assert cursor == self.size
        built: dict[int, DecompositionTree] = {}
        for i in reversed(order):
            proto = self._protos[i]
            children = tuple(built[c] for c in proto.children)
            built[i] = _node(proto, own[i], children)
        return built[0]

    def network(self, rng: Generator | None = None) -> tuple[Network | None, DecompositionTree]:
        """`build` followed by `recompose`; the network is ``None`` for an empty slot."""
        tree = self.build(rng)
        if tree.is_empty:
            return None, tree
        return recompose(tree), tree


def _node(proto: _Proto, labels: list[int], children: tuple[DecompositionTree, ...]) -> DecompositionTree:
    kind = proto.kind
    if kind == "edge":
        return DecompositionTree("edge")
    if kind == "series":
        first, second = children
        poles = (first.poles[0], second.poles[1])  # type: ignore[index]
        return DecompositionTree(kind, poles, (), children)
    if kind == "loop":
        s, s2 = labels
        return DecompositionTree(kind, (s, s), (s, s2), children)
    if kind in ("isthmus", "parallel-double", "parallel-pair"):
        s, t = labels
        return DecompositionTree(kind, (s, t), (s, t), children)
    assert kind == "polyhedral"
    assert proto.core_map is not None
    graph, (a, b) = proto.core_map.to_graph()
    mapping = dict(enumerate(labels))
    graph = graph.relabel(mapping)
    root = (mapping[a], mapping[b])
    edges = core_edge_order(graph.adjacency, root)
    if len(edges) != len(children):
        msg = f"A core with {len(edges)} non-root edges received {len(children)} components."
        raise ValueError(msg)
    core = CoreRecord(vertices=tuple(sorted(labels)), root=root, edges=tuple(edges))
    return DecompositionTree(kind, root, core.vertices, children, core)
