"""Shared sampler state: grammar tables, branch probabilities and tail laws at ``x = rho``."""

from __future__ import annotations

import functools
import logging
import math
import time
import warnings
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from cubicplanar._utils import dump, load
from cubicplanar.exceptions import SamplerBudgetError
from cubicplanar.series import (
    class_values,
    critical_core_weights,
    evaluate_Y_law,
    solve_grammar,
    solve_singular_constants,
)
from cubicplanar.series._triangulations import Q_SUM_BEYOND_ONE

if TYPE_CHECKING:
    from pathlib import Path

    from numpy.random import Generator

    from cubicplanar.sampling._exact import ExactSampler
    from cubicplanar.series import ClassValues, GrammarTable, SingularData, YLaw

logger = logging.getLogger(__name__)

BRANCHES: dict[str, tuple[str, ...]] = {
    "1+D": ("edge", "D"),
    "D": ("L", "S", "P", "H"),
    "N": ("D", "I"),
    "N'": ("S", "P", "H", "I"),
    "D-S": ("L", "P", "H"),
    "D-L": ("S", "P", "H"),
    "PH": ("P", "H"),
    "P": ("P-double", "P-pair"),
    "Ns": ("H", "P-pair", "I", "S-PH", "S-L"),
}
"""Symbols that are unions of other symbols."""

CONSTRUCTORS: dict[str, tuple[str, int, tuple[str, ...]]] = {
    "edge": ("edge", 0, ()),
    "L": ("loop", 2, ("N'",)),
    "I": ("isthmus", 2, ("N'", "N'")),
    "S": ("series", 0, ("D-S", "D")),
    "S-PH": ("series", 0, ("PH", "D")),
    "S-L": ("series", 0, ("L", "D-L")),
    "P-double": ("parallel-double", 2, ("D",)),
    "P-pair": ("parallel-pair", 2, ("D", "D")),
}
"""Symbols that build one tree node: ``(node kind, atoms, child symbols)``.

``"H"`` is handled separately: its atoms and children depend on the core size.
"""

SAMPLEABLE_CLASSES = ("D", "L", "I", "S", "P", "H", "N", "Ns")

_NO_LIMIT = 2**62


def make_rng(seed: int | None, task_index: int = 0) -> Generator:
    """Counter-based random stream keyed by ``(seed, task_index)``.

    Streams of different task indices are independent, so results do not
    depend on how tasks are spread over workers.
    """
    sequence = np.random.SeedSequence(seed, spawn_key=(task_index,))
    return np.random.Generator(np.random.Philox(sequence))


@dataclass(frozen=True)
class PowerTail:
    """Integer law ``P(J = j) ~ j**(-exponent)`` on ``j >= start``.

    Sampled by rejection from a discretised Pareto proposal; the acceptance
    rate is at least ``(1 + 1/start)**(-exponent)``.
    """

    exponent: float
    start: int

    def __post_init__(self) -> None:
        if self.exponent <= 1 or self.start < 1:
            msg = f"Need exponent > 1 and start >= 1, got {self.exponent} and {self.start}."
            raise ValueError(msg)

    def _ratio(self, j: int) -> float:
        # j**(-a) divided by the integral of x**(-a) over [j, j + 1]
        a = self.exponent
        return (a - 1) / (j * -math.expm1((1 - a) * math.log1p(1 / j)))

    def sample(self, rng: Generator, limit: int = _NO_LIMIT) -> int:
        """One draw; values beyond ``limit`` are returned as ``limit``.

        Without an explicit ``limit`` a capped draw also emits a warning.
        """
        bound = (1 + 1 / self.start) ** self.exponent
        while True:
            u = 1.0 - rng.random()
            x = self.start * u ** (-1 / (self.exponent - 1))
            if not math.isfinite(x) or x >= limit:
                if limit == _NO_LIMIT:
                    warnings.warn(f"A tail draw overflowed and was capped at {limit}.", stacklevel=2)
                return limit
            j = int(x)
            if rng.random() * bound <= self._ratio(j):
                return j


@dataclass(frozen=True)
class SamplerConfig:
    """Sizes and budgets of a `SamplerContext`.

    Parameters
    ----------
    table_order
        ``x``-order of the float grammar table; exact-size sampling works up
        to this many vertices.
    precision
        Decimal digits of the singular constants.
    max_size
        Vertex budget of one Boltzmann draw; bigger draws are restarted.
    max_trials
        Rejection budget of the samplers that reject.
    core_table_size
        Core half-sizes tabulated for the Boltzmann core draw; larger cores
        come from the ``j**(-5/2)`` tail.

    """

    table_order: int = 2000
    precision: int = 30
    max_size: int = 1_000_000
    max_trials: int = 100_000
    core_table_size: int = 10_000

    def __post_init__(self) -> None:
        if self.table_order < 8 or self.table_order % 2:  # noqa: PLR2004
            msg = f"table_order must be even and at least 8, got {self.table_order}."
            raise ValueError(msg)
        if self.max_size < 4 or self.max_trials < 1:  # noqa: PLR2004
            msg = "max_size must be at least 4 and max_trials at least 1."
            raise ValueError(msg)
        if self.core_table_size < 2:  # noqa: PLR2004
            msg = f"core_table_size must be at least 2, got {self.core_table_size}."
            raise ValueError(msg)


def _symbol_values(values: ClassValues) -> dict[str, float]:
    rho2 = values.rho**2
    d = values.D
    return {
        "edge": 1.0,
        "1+D": 1.0 + d,
        "D": d,
        "L": values.L,
        "I": values.I,
        "S": values.S,
        "P": values.P,
        "H": values.H,
        "N": d + values.I,
        "N'": values.S + values.P + values.H + values.I,
        "D-S": values.L + values.P + values.H,
        "D-L": values.S + values.P + values.H,
        "PH": values.P + values.H,
        "P-double": rho2 * d,
        "P-pair": rho2 * d**2 / 2,
        "S-PH": (values.P + values.H) * d,
        "S-L": values.L * (d - values.L),
        "Ns": values.Ns,
    }


def _branch_cdfs(symbol_values: dict[str, float]) -> dict[str, np.ndarray]:
    cdfs = {}
    for symbol, options in BRANCHES.items():
        weights = np.array([symbol_values[o] for o in options])
        cdf = np.cumsum(weights / weights.sum())
        cdf[-1] = 1.0
        cdf.setflags(write=False)
        cdfs[symbol] = cdf
    return cdfs


@dataclass(frozen=True, eq=False)
class SamplerContext:
    """Everything the samplers need, computed once and shared read-only.

    Create it with `SamplerContext.create`; it can be written to and read
    from a cloudpickle file so worker processes do not recompute it.

    Attributes
    ----------
    config
        Sizes and budgets.
    constants
        The singular constants.
    table
        Float grammar table normalised with ``scale = rho**2``.
    y_law
        Law of the Boltzmann network size up to ``table.order``.
    values
        Class values at ``rho``.
    symbol_values
        Value at ``rho`` of every grammar symbol.
    branch_cdfs
        For every union symbol, the cumulative probabilities of its options.
    core_cdf
        Cumulative law of the core half-size ``j = 2..core_table_size``
        (index ``j - 2``), restricted to the table.
    core_tail_mass
        Probability that the core half-size exceeds the table.
    seed
        Default seed of `rng`.

    """

    config: SamplerConfig
    constants: SingularData
    table: GrammarTable = field(repr=False)
    y_law: YLaw = field(repr=False)
    values: ClassValues
    symbol_values: dict[str, float] = field(repr=False)
    branch_cdfs: dict[str, np.ndarray] = field(repr=False)
    core_cdf: np.ndarray = field(repr=False)
    core_tail_mass: float
    seed: int | None = None

    @classmethod
    def create(
        cls,
        config: SamplerConfig | None = None,
        *,
        seed: int | None = None,
        constants: SingularData | None = None,
    ) -> SamplerContext:
        """Solve the constants and the grammar table and derive all sampler tables."""
        config = config or SamplerConfig()
        start = time.perf_counter()
        if constants is None:
            constants = solve_singular_constants(config.precision)
        rho2 = float(constants.rho) ** 2
        table = solve_grammar(config.table_order, "float", scale=rho2)
        y_law = evaluate_Y_law(config.table_order, table=table, constants=constants)
        values = class_values(constants)
        symbol_values = _symbol_values(values)
        weights = critical_core_weights(config.core_table_size)[2:]
        total = float(Q_SUM_BEYOND_ONE)
        core_cdf = np.cumsum(weights) / total
        core_cdf.setflags(write=False)
        ctx = cls(
            config=config,
            constants=constants,
            table=table,
            y_law=y_law,
            values=values,
            symbol_values=symbol_values,
            branch_cdfs=_branch_cdfs(symbol_values),
            core_cdf=core_cdf,
            core_tail_mass=max(0.0, 1.0 - float(core_cdf[-1])),
            seed=seed,
        )
        logger.info(
            "Sampler context ready in %.2f s (table order %d, P(Y=0)=%.6f, E[Y]=%.6f)",
            time.perf_counter() - start,
            config.table_order,
            y_law.pmf(0),
            y_law.mean,
        )
        return ctx

    @property
    def t_order(self) -> int:
        """Largest half-size covered by the table."""
        return self.table.t_order

    @functools.cached_property
    def y_cdf(self) -> np.ndarray:
        """Cumulative law of ``Y / 2`` over the table (without the tail)."""
        cdf = np.cumsum(self.y_law.t_pmf)
        cdf.setflags(write=False)
        return cdf

    @functools.cached_property
    def y_tail(self) -> PowerTail:
        """Law of ``Y / 2`` beyond the table: ``m**(-5/2)``."""
        return PowerTail(2.5, self.t_order + 1)

    @functools.cached_property
    def w_cdf(self) -> np.ndarray:
        """Cumulative size-biased law of ``W`` over the table."""
        cdf = np.cumsum(self.y_law.size_biased_w)
        cdf.setflags(write=False)
        return cdf

    @functools.cached_property
    def w_tail(self) -> PowerTail:
        """Law of ``Y / 2`` for size-biased draws beyond the table: ``m**(-3/2)``."""
        return PowerTail(1.5, self.t_order + 1)

    @functools.cached_property
    def core_tail(self) -> PowerTail:
        """Core half-sizes beyond the table: ``q_j tau**j ~ j**(-5/2)``."""
        return PowerTail(2.5, self.config.core_table_size + 1)

    @functools.cached_property
    def exact(self) -> ExactSampler:
        """The exact-size sampler sharing this context's tables."""
        from cubicplanar.sampling._exact import ExactSampler

        return ExactSampler(self)

    def rng(self, task_index: int = 0) -> Generator:
        """The random stream of ``task_index`` under the context's seed."""
        return make_rng(self.seed, task_index)

    def branch(self, symbol: str, rng: Generator) -> str:
        """Pick one option of the union symbol ``symbol`` with its Boltzmann probability."""
        cdf = self.branch_cdfs[symbol]
        return BRANCHES[symbol][int(np.searchsorted(cdf, rng.random(), side="right"))]

    def core_half_size(self, rng: Generator) -> int:
        """Half the vertex count of a Boltzmann core, ``P(j) ~ q_j tau**j``."""
        u = rng.random()
        if u < self.core_cdf[-1]:
            return int(np.searchsorted(self.core_cdf, u, side="right")) + 2
        return self.core_tail.sample(rng, limit=self.config.max_size)

    def check_half_size(self, m: int) -> None:
        """Raise `SamplerBudgetError` unless the table covers half-size ``m``."""
        if m > self.t_order:
            msg = (
                f"Size {2 * m} exceeds the grammar table (order {self.table.order});"
                " create the context with a larger `table_order`."
            )
            raise SamplerBudgetError(msg)

    def dump(self, path: Path) -> None:
        """Write the context to a cloudpickle file."""
        dump(self, path)

    @classmethod
    def load(cls, path: Path, *, cache: bool = True) -> SamplerContext:
        """Read a context written by `dump`, reusing an in-memory copy when ``cache``."""
        ctx = load(path, cache=cache)
        if not isinstance(ctx, cls):
            msg = f"{path} does not hold a SamplerContext."
            raise TypeError(msg)
        return ctx
