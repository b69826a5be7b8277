"""The size law of the Boltzmann network and the laws derived from it.

``P(Y = 0) = 1 / (1 + D(rho))`` and ``P(Y = n) = rho**n [x^n] D / (1 + D(rho))``.
``W`` is the number of edges one inserted component is associated with:
``W = 1`` for an empty component and ``3 Y / 2 + 1`` otherwise.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from scipy import signal

from cubicplanar.exceptions import SeriesError
from cubicplanar.series._constants import SingularData, solve_singular_constants
from cubicplanar.series._grammar import GrammarTable, solve_grammar

if TYPE_CHECKING:
    from collections.abc import Sequence


@dataclass(frozen=True, eq=False)
class YLaw:
    """Probability table of ``Y`` up to ``max_n`` vertices.

    Attributes
    ----------
    sizes
        Even vertex counts ``0, 2, ..., max_n``.
    probabilities
        ``P(Y = n)`` for each entry of ``sizes`` (zero for ``n = 2``).
    tail_mass
        ``P(Y > max_n)``, the mass not covered by the table.
    mean
        ``E[Y]`` from the singular constants.
    tail_constant
        ``c_D / (1 + D0)``: ``P(Y = n) ~ tail_constant * n**(-5/2)``.

    """

    sizes: np.ndarray = field(repr=False)
    probabilities: np.ndarray = field(repr=False)
    tail_mass: float
    mean: float
    tail_constant: float

    @property
    def max_n(self) -> int:
        """Largest tabulated size."""
        return int(self.sizes[-1])

    @property
    def t_pmf(self) -> np.ndarray:
        """Probabilities indexed by half the vertex count."""
        return self.probabilities

    def pmf(self, n: int) -> float:
        """``P(Y = n)`` for ``n <= max_n``."""
        if n < 0 or n % 2 or n > self.max_n:
            return 0.0
        return float(self.probabilities[n // 2])

    @property
    def table_mean(self) -> float:
        """Mean of the tabulated part only."""
        return float(np.dot(self.sizes, self.probabilities))

    def tail_ratio(self, n: int) -> float:
        """``P(Y = n) / (tail_constant * n**(-5/2))``, which tends to 1."""
        return self.pmf(n) * n**2.5 / self.tail_constant

    @property
    def w_values(self) -> np.ndarray:
        """Support of ``W`` matching `sizes`: 1 for ``Y = 0``, else ``3Y/2 + 1``."""
        w = 3 * self.sizes // 2 + 1
        w[0] = 1
        return w

    @property
    def w_mean(self) -> float:
        """``E[W] = 1 + (3/2) E[Y]``; the empty component has ``W = 1``."""
        return 1 + 1.5 * self.mean

    @property
    def size_biased_w(self) -> np.ndarray:
        """``P(W_hat = w) = w P(W = w) / E[W]`` on `w_values`."""
        return self.w_values * self.probabilities / self.w_mean

    @property
    def size_biased_tail_mass(self) -> float:
        """``P(W_hat > w_values[-1])``."""
        return max(0.0, 1.0 - float(np.sum(self.size_biased_w)))


def evaluate_Y_law(
    max_n: int,
    *,
    table: GrammarTable | None = None,
    constants: SingularData | None = None,
) -> YLaw:
    """Tabulate the law of ``Y`` up to ``max_n`` vertices.

    Parameters
    ----------
    max_n
        Largest size in the table.
    table
        Grammar table of order at least ``max_n``; a float table normalised
        with ``scale = rho**2`` is solved when omitted.
    constants
        Singular constants; solved with the default precision when omitted.

    Raises
    ------
    SeriesError
        If the table order is smaller than ``max_n``.

    """
    if constants is None:
        constants = solve_singular_constants()
    rho2 = float(constants.rho) ** 2
    if table is None:
        table = solve_grammar(max_n, "float", scale=rho2)
    if table.order < max_n:
        msg = f"The grammar table has order {table.order}, below the requested max_n={max_n}."
        raise SeriesError(msg)
    d0 = float(constants.D0)
    ratio = rho2 / float(table.scale)
    t_max = max_n // 2
    d = np.array([float(c) for c in table.t_coeffs["D"][: t_max + 1]])
    probabilities = d * ratio ** np.arange(t_max + 1) / (1 + d0)
    probabilities[0] = 1 / (1 + d0)
    probabilities.setflags(write=False)
    sizes = 2 * np.arange(t_max + 1)
    sizes.setflags(write=False)
    return YLaw(
        sizes=sizes,
        probabilities=probabilities,
        tail_mass=max(0.0, 1.0 - float(np.sum(probabilities))),
        mean=float(constants.meanY),
        tail_constant=float(constants.c_D) / (1 + d0),
    )


def pmf_power(pmf: Sequence[float] | np.ndarray, power: int, length: int) -> np.ndarray:
    """Law of the sum of ``power`` independent draws, truncated to ``length`` entries.

    Binary exponentiation with FFT convolutions for long inputs; tiny
    negative values from the FFT are clipped to zero.
    """
    base = np.asarray(pmf, dtype=float)[:length]
    result = np.zeros(length)
    result[0] = 1.0
    while power:
        if power & 1:
            result = _truncated_convolve(result, base, length)
        power >>= 1
        if power:
            base = _truncated_convolve(base, base, length)
    return result


def _truncated_convolve(a: np.ndarray, b: np.ndarray, length: int) -> np.ndarray:
    out = signal.convolve(a, b, method="auto")[:length]
    np.clip(out, 0.0, None, out=out)
    if len(out) < length:
        out = np.pad(out, (0, length - len(out)))
    return out


@functools.lru_cache(maxsize=64)
def _cached_power(power: int, pmf: tuple[float, ...]) -> np.ndarray:
    return pmf_power(np.array(pmf), power, len(pmf))


def conditioned_first_components(
    law: YLaw,
    count: int,
    total: int,
    first: int = 1,
) -> np.ndarray:
    """Law of the total size of the first components of a conditioned vector.

    Returns ``P(Y_1 + ... + Y_first = n | Y_1 + ... + Y_count = total)`` for
    even ``n = 0..total`` (index ``n // 2``). With ``first = 1`` this is the
    law of a single component of ``(Y_i)_{i <= count}`` conditioned on the
    sum, as it arises for the component sizes of a 3-connected core with
    ``count`` edges.
    """
    if total % 2 or total > law.max_n:
        msg = f"Total {total} must be even and at most the table size {law.max_n}."
        raise SeriesError(msg)
    if not 1 <= first <= count:
        msg = f"Need 1 <= first <= count, got first={first}, count={count}."
        raise SeriesError(msg)
    length = total // 2 + 1
    pmf = tuple(law.t_pmf[:length].tolist())
    head = _cached_power(first, pmf)
    rest = _cached_power(count - first, pmf)
    joint = head * rest[::-1]
    norm = float(np.sum(joint))
    if norm <= 0:
        msg = f"The conditioning event has zero probability for total={total}, count={count}."
        raise SeriesError(msg)
    return joint / norm


def product_first_joint(law: YLaw, first: int, alphabet: int) -> np.ndarray:
    """Joint law of ``first`` independent half sizes on ``{0..alphabet-1}**first``.

    Cells are flattened in C order; the last entry holds the mass of every
    tuple with a half size of ``alphabet`` or more.
    """
    head = np.zeros(alphabet)
    head[: min(alphabet, len(law.t_pmf))] = law.t_pmf[:alphabet]
    joint = functools.reduce(np.multiply.outer, [head] * first).ravel()
    return np.append(joint, max(0.0, 1.0 - float(joint.sum())))


def conditioned_first_joint(law: YLaw, count: int, total: int, first: int, alphabet: int) -> np.ndarray:
    """Joint law of the first ``first`` half sizes of ``(Y_i)_{i <= count}`` given the sum ``total``.

    Same cell layout as `product_first_joint`.
    """
    if total % 2 or total > law.max_n:
        msg = f"Total {total} must be even and at most the table size {law.max_n}."
        raise SeriesError(msg)
    if not 1 <= first <= count:
        msg = f"Need 1 <= first <= count, got first={first}, count={count}."
        raise SeriesError(msg)
    pmf = tuple(law.t_pmf.tolist())
    half = total // 2
    norm = float(_cached_power(count, pmf)[half])
    if norm <= 0:
        msg = f"The conditioning event has zero probability for total={total}, count={count}."
        raise SeriesError(msg)
    rest = _cached_power(count - first, pmf)
    product = product_first_joint(law, first, alphabet)[:-1]
    sums = np.indices((alphabet,) * first).sum(axis=0).ravel()
    inside = sums <= half
    joint = np.zeros_like(product)
    joint[inside] = product[inside] * rest[half - sums[inside]] / norm
    return np.append(joint, max(0.0, 1.0 - float(joint.sum())))
