"""Free Boltzmann sampler for the network grammar at the singularity ``x = rho``."""

from __future__ import annotations

from typing import TYPE_CHECKING

from cubicplanar.sampling._context import BRANCHES, CONSTRUCTORS
from cubicplanar.sampling._triangulation import sample_uniform_3connected
from cubicplanar.sampling._tree import TreeBuilder

if TYPE_CHECKING:
    from numpy.random import Generator

    from cubicplanar.sampling._context import SamplerContext


class BoltzmannSampler:
    """Draws derivations of a grammar symbol with probability proportional to ``rho**n / n!``.

    Union symbols pick an option by its value at ``rho``; products expand
    every factor independently. A polyhedral node draws its core half-size
    ``j`` with ``P(j) ~ q_j tau**j``, a uniform 3-connected cubic map with
    ``2j`` vertices and an independent ``(1 + D)``-sample for each of its
    ``3j - 1`` non-root edges.

    The pending slots live on an explicit stack, so deep derivations do not
    hit the recursion limit.
    """

    def __init__(self, ctx: SamplerContext) -> None:
        self.ctx = ctx

    def expand(self, symbol: str, rng: Generator, builder: TreeBuilder | None = None) -> TreeBuilder:
        """Sample a derivation of ``symbol`` into ``builder`` (a fresh one by default).

        Raises
        ------
        SamplerBudgetError
            If the derivation exceeds ``ctx.config.max_size`` vertices.

        """
        if builder is None:
            builder = TreeBuilder(self.ctx.config.max_size)
        stack: list[tuple[str, tuple[int, int] | None]] = [(symbol, None)]
        while stack:
            symbol, parent = stack.pop()
            while symbol in BRANCHES:
                symbol = self.ctx.branch(symbol, rng)
            if symbol == "H":
                j = self.ctx.core_half_size(rng)
                # the budget is checked before the core map is drawn
                index = builder.add("polyhedral", 2 * j, 3 * j - 1, parent)
                builder.set_core(index, sample_uniform_3connected(j, rng))
                stack.extend(("1+D", (index, slot)) for slot in range(3 * j - 1))
                continue
            kind, atoms, children = CONSTRUCTORS[symbol]
            index = builder.add(kind, atoms, len(children), parent)
            stack.extend((child, (index, slot)) for slot, child in enumerate(children))
        return builder
