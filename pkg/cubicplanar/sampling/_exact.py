"""Exact-size uniform sampling by the recursive method.

Every choice is made with probability proportional to the number of
labelled structures it leads to, read off the Boltzmann-normalised
coefficient tables (``t``-coefficient ``m`` of a class times ``rho**(2m)``).
A polyhedral network with ``m`` vertex pairs and a core of ``j`` pairs has
weight ``q_j tau**j P(Y_1 + ... + Y_{3j-1} = 2(m - j))``, where the ``Y_i``
are independent Boltzmann network sizes.
"""

from __future__ import annotations

import functools
import logging
from typing import TYPE_CHECKING

import numpy as np
from scipy import signal

from cubicplanar._cache import LRUCache
from cubicplanar.sampling._context import BRANCHES, CONSTRUCTORS
from cubicplanar.sampling._triangulation import sample_uniform_3connected
from cubicplanar.sampling._tree import TreeBuilder
from cubicplanar.series import critical_core_weights, pmf_power

if TYPE_CHECKING:
    from numpy.random import Generator

    from cubicplanar.sampling._context import SamplerContext

logger = logging.getLogger(__name__)


def _choose(weights: np.ndarray, rng: Generator) -> int:
    total = float(np.sum(weights))
    if not total > 0:
        msg = "No structure has the requested size."
        raise ValueError(msg)
    cdf = np.cumsum(weights)
    return int(min(np.searchsorted(cdf, rng.random() * total, side="right"), len(weights) - 1))


def _product_weights(first: np.ndarray, second: np.ndarray, total: int) -> np.ndarray:
    """``first[a] * second[total - a]`` for ``a = 0..total``."""
    return first[: total + 1] * second[total::-1]


class ExactSampler:
    """Uniform labelled structures of every grammar class with a prescribed size.

    Parameters
    ----------
    ctx
        The sampler context; sizes up to ``ctx.table.order`` vertices are
        supported.
    cache_size
        Number of core-size laws and slot-size convolution powers kept in memory.

    """

    def __init__(self, ctx: SamplerContext, *, cache_size: int = 256) -> None:
        self.ctx = ctx
        names = ("D", "L", "I", "S", "P", "H", "Ns", "Cdot")
        c = {name: np.asarray(ctx.table.t_coeffs[name], dtype=float) for name in names}
        sigma = float(ctx.table.scale)
        d, loop, p, h = c["D"], c["L"], c["P"], c["H"]
        size = len(d)
        shifted_d = np.concatenate([[0.0], d[:-1]])
        pair = sigma / 2 * np.concatenate([[0.0], np.convolve(d, d)[: size - 1]])
        ph = p + h
        d_minus_l = c["S"] + ph
        self.coeffs: dict[str, np.ndarray] = {
            **c,
            "edge": np.eye(1, size).ravel(),
            "1+D": np.eye(1, size).ravel() + d,
            "N": d + c["I"],
            "N'": c["S"] + ph + c["I"],
            "D-S": loop + ph,
            "D-L": d_minus_l,
            "PH": ph,
            "P-double": sigma * shifted_d,
            "P-pair": pair,
            "S-PH": np.convolve(ph, d)[:size],
            "S-L": np.convolve(loop, d_minus_l)[:size],
        }
        for array in self.coeffs.values():
            array.setflags(write=False)
        self.y_pmf = np.asarray(ctx.y_law.t_pmf, dtype=float)
        self.core_weights = critical_core_weights(len(d) - 1)
        self._core_laws = LRUCache(max_size=cache_size)
        self._powers = LRUCache(max_size=cache_size)

    @functools.cached_property
    def disconnected(self) -> np.ndarray:
        """Boltzmann-normalised coefficients of ``exp(C)``, all cubic planar graphs by half-size."""
        cdot = self.coeffs["Cdot"]
        g = np.zeros(len(cdot))
        g[0] = 1.0
        for m in range(1, len(g)):
            g[m] = float(np.dot(cdot[1 : m + 1], g[m - 1 :: -1])) / (2 * m)
        g.setflags(write=False)
        return g

    def weight(self, symbol: str, m: int) -> float:
        """Boltzmann-normalised number of ``symbol``-structures with ``2m`` vertices."""
        return float(self.coeffs[symbol][m]) if 0 <= m < len(self.coeffs[symbol]) else 0.0

    def _power(self, k: int, length: int) -> np.ndarray:
        """Law of ``(Y_1 + ... + Y_k) / 2`` truncated to ``length`` entries."""

        def compute() -> np.ndarray:
            out = pmf_power(self.y_pmf[:length], k, length)
            # no network has two vertices
            if k and length > 1:
                out[1] = 0.0
            out.setflags(write=False)
            return out

        return self._powers.get_or_compute((k, length), compute)

    def core_law(self, m: int) -> np.ndarray:
        """Unnormalised weights of the core half-size ``j = 0..m`` of a polyhedral network of size ``2m``."""

        def compute() -> np.ndarray:
            weights = np.zeros(m + 1)
            if m < 2:  # noqa: PLR2004
                return weights
            step = self._power(3, m + 1)
            slots = self._power(5, m + 1)
            for j in range(2, m + 1):
                weights[j] = self.core_weights[j] * slots[m - j]
                if j == m:
                    break
                # the next core size only reads entries below m - j
                slots = signal.convolve(slots[: m - j], step[: m - j])[: m - j]
                np.clip(slots, 0.0, None, out=slots)
            if m > 2:  # noqa: PLR2004
                weights[m - 1] = 0.0
            logger.debug("Core-size law for %d vertices tabulated.", 2 * m)
            weights.setflags(write=False)
            return weights

        return self._core_laws.get_or_compute(m, compute)

    def slot_sizes(self, k: int, total: int, rng: Generator) -> list[int]:
        """Half-sizes of ``k`` independent Boltzmann networks conditioned on summing to ``total``.

        Splits the slots in halves and draws the size of the first half
        from the conditioned convolution law, down to single slots.
        """
        length = total + 1
        sizes = [0] * k
        stack = [(0, k, total)]
        while stack:
            start, count, rest = stack.pop()
            if count == 1:
                sizes[start] = rest
                continue
            if rest == 0:
                continue
            left = count // 2
            weights = self._power(left, length)[: rest + 1] * self._power(count - left, length)[rest::-1]
            a = _choose(weights, rng)
            stack.append((start, left, a))
            stack.append((start + left, count - left, rest - a))
        return sizes

    def expand(self, symbol: str, m: int, rng: Generator, builder: TreeBuilder | None = None) -> TreeBuilder:
        """Sample a uniform ``symbol``-structure with ``2m`` vertices into ``builder``.

        Raises
        ------
        SamplerBudgetError
            If ``2m`` exceeds the table.
        ValueError
            If no structure of that size exists.

        """
        self.ctx.check_half_size(m)
        if builder is None:
            builder = TreeBuilder(self.ctx.config.max_size)
        stack: list[tuple[str, int, tuple[int, int] | None]] = [(symbol, m, None)]
        while stack:
            symbol, m, parent = stack.pop()
            while symbol in BRANCHES:
                options = BRANCHES[symbol]
                weights = np.array([self.weight(o, m) for o in options])
                symbol = options[_choose(weights, rng)]
            if symbol == "H":
                j = _choose(self.core_law(m), rng)
                index = builder.add("polyhedral", 2 * j, 3 * j - 1, parent)
                builder.set_core(index, sample_uniform_3connected(j, rng))
                sizes = self.slot_sizes(3 * j - 1, m - j, rng)
                stack.extend(("1+D", size, (index, slot)) for slot, size in enumerate(sizes))
                continue
            kind, atoms, children = CONSTRUCTORS[symbol]
            if self.weight(symbol, m) <= 0:
                msg = f"No `{symbol}` structure has {2 * m} vertices."
                raise ValueError(msg)
            index = builder.add(kind, atoms, len(children), parent)
            rest = m - atoms // 2
            if len(children) == 1:
                stack.append((children[0], rest, (index, 0)))
            elif len(children) == 2:  # noqa: PLR2004
                first, second = (self.coeffs[c] for c in children)
                a = _choose(_product_weights(first, second, rest), rng)
                stack.append((children[1], rest - a, (index, 1)))
                stack.append((children[0], a, (index, 0)))
        return builder

