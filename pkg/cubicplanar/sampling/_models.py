"""The random models: Boltzmann and size-biased networks, uniform connected and disconnected graphs.

All samplers take an explicit `numpy.random.Generator` and return a
`SampleRecord`; vertex labels of every result are a uniform random
permutation of ``0..n-1``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Literal

import numpy as np

from cubicplanar.exceptions import SamplerBudgetError
from cubicplanar.graph import CubicGraph, core_edge_order, insert_network
from cubicplanar.sampling._boltzmann import BoltzmannSampler
from cubicplanar.sampling._context import SAMPLEABLE_CLASSES
from cubicplanar.sampling._exact import _choose
from cubicplanar.sampling._triangulation import sample_uniform_3connected
from cubicplanar.sampling._tree import TreeBuilder

if TYPE_CHECKING:
    from numpy.random import Generator

    from cubicplanar.graph import DecompositionTree, Network
    from cubicplanar.sampling._context import SamplerContext

logger = logging.getLogger(__name__)


def stream_id(rng: Generator) -> tuple[int | None, tuple[int, ...]]:
    """``(entropy, spawn key)`` of the seed sequence behind ``rng``, if it has one."""
    seq = getattr(rng.bit_generator, "seed_seq", None)
    if isinstance(seq, np.random.SeedSequence):
        return int(seq.entropy), tuple(int(k) for k in seq.spawn_key)  # type: ignore[arg-type]
    return None, ()


@dataclass(frozen=True)
class SampleRecord:
    """One sample and how it was obtained.

    Attributes
    ----------
    value
        The network, graph or ``None`` for an empty network.
    size
        Number of vertices (0 for an empty network).
    trials
        Number of attempts, rejected ones included.
    stream
        Identifier of the random stream, see `stream_id`.
    tree
        The decomposition tree the sample was built from, when there is one.
    extra
        Model-specific annotations (core sizes, marked edge, components).

    """

    value: Any
    size: int
    trials: int = 1
    stream: tuple[int | None, tuple[int, ...]] = (None, ())
    tree: DecompositionTree | None = field(default=None, repr=False)
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.size < 0 or self.size % 2:
            msg = f"A sample has an even, non-negative number of vertices, got {self.size}."
            raise ValueError(msg)
        if self.trials < 1:
            msg = f"trials must be at least 1, got {self.trials}."
            raise ValueError(msg)


def sample_Y(ctx: SamplerContext, rng: Generator, size: int | None = None) -> int | np.ndarray:
    """Draw the vertex count of a Boltzmann network (``size`` draws as an array if given).

    Sizes up to the table order come from the tabulated law, larger ones
    from the ``n**(-5/2)`` tail.
    """
    cdf = ctx.y_cdf
    u = rng.random(size)
    half = np.searchsorted(cdf, u, side="right")
    tail = u >= cdf[-1]
    if size is None:
        m = ctx.y_tail.sample(rng) if tail else int(half)
        return 2 * m
    for i in np.flatnonzero(tail):
        half[i] = ctx.y_tail.sample(rng)
    return 2 * half.astype(np.int64)


def _budget_retry(ctx: SamplerContext, draw: Any, what: str) -> tuple[Any, int]:
    for trials in range(1, ctx.config.max_trials + 1):
        try:
            result = draw()
        except SamplerBudgetError:
            logger.debug("%s exceeded the size budget, resampling (trial %d).", what, trials)
            continue
        if trials > 1:
            warnings.warn(
                f"{what} was resampled {trials - 1} time(s) to stay below max_size={ctx.config.max_size}; "
                "the result is conditioned on that budget.",
                stacklevel=3,
            )
        return result, trials
    msg = f"{what} exceeded the size budget {ctx.config.max_trials} times."
    raise SamplerBudgetError(msg)


def _record(builder: TreeBuilder, rng: Generator, trials: int, **extra: Any) -> SampleRecord:
    network, tree = builder.network(rng)
    return SampleRecord(
        value=network,
        size=builder.size,
        trials=trials,
        stream=stream_id(rng),
        tree=tree,
        extra=extra,
    )


def sample_boltzmann_network(ctx: SamplerContext, rng: Generator, symbol: str = "1+D") -> SampleRecord:
    """Free Boltzmann sample of ``symbol`` at ``x = rho`` (by default the network ``D``, possibly empty).

    Draws over ``ctx.config.max_size`` vertices are restarted.
    """
    sampler = BoltzmannSampler(ctx)
    builder, trials = _budget_retry(ctx, lambda: sampler.expand(symbol, rng), "A Boltzmann draw")
    return _record(builder, rng, trials)


def draw_size_biased_w(ctx: SamplerContext, rng: Generator) -> int:
    """``W_hat`` with ``P(W_hat = w) = w P(W = w) / E[W]``."""
    cdf = ctx.w_cdf
    u = rng.random()
    if u < cdf[-1]:
        return int(ctx.y_law.w_values[int(np.searchsorted(cdf, u, side="right"))])
    return 3 * ctx.w_tail.sample(rng) + 1


def sample_size_biased(ctx: SamplerContext, rng: Generator) -> SampleRecord:
    """The size-biased network ``D_hat`` with one marked associated edge.

    A network with ``n`` vertices is associated with ``W = 3n/2 + 1``
    edges: the ``3n/2 - 1`` edges off its root and the two links to the
    edge it is inserted into, see `Network.associated_edges`.
    ``extra["marked_edge"]`` indexes that list and ``extra["marked"]`` is
    the edge itself. The empty network is associated with the host edge,
    marked as ``(None, None)``.

    Raises
    ------
    SamplerBudgetError
        If the drawn ``W_hat`` needs a network larger than the table.

    """
    w_hat = draw_size_biased_w(ctx, rng)
    marked = int(rng.integers(w_hat))
    if w_hat == 1:
        extra = {"w_hat": 1, "marked_edge": marked, "marked": (None, None)}
        return SampleRecord(None, 0, stream=stream_id(rng), extra=extra)
    m = (w_hat - 1) // 3
    record = _record(ctx.exact.expand("D", m, rng), rng, 1, w_hat=w_hat, marked_edge=marked)
    record.extra["marked"] = record.value.associated_edges()[marked]
    return record


def sample_network(ctx: SamplerContext, cls: str, n: int, rng: Generator, *, window: float = 0.0) -> SampleRecord:
    """Uniform labelled network of class ``cls`` (one of ``D, L, I, S, P, H, N, Ns``) with ``n`` vertices.

    With ``window > 0`` the size lies in ``[n (1 - window), n (1 + window)]``,
    drawn from the Boltzmann law at ``rho`` restricted to that range.

    Raises
    ------
    ValueError
        For an unknown class, odd ``n`` or a size with no such network.
    SamplerBudgetError
        If ``n`` exceeds the table.

    """
    if cls not in SAMPLEABLE_CLASSES:
        msg = f"Unknown class `{cls}`, use one of {SAMPLEABLE_CLASSES}."
        raise ValueError(msg)
    if n < 0 or n % 2:
        msg = f"Networks have an even number of vertices, got {n}."
        raise ValueError(msg)
    if window == 0:
        return _record(ctx.exact.expand(cls, n // 2, rng), rng, 1)
    lo, hi = _window(n, window)
    ctx.check_half_size(hi)
    m = lo + _choose(ctx.exact.coeffs[cls][lo : hi + 1], rng)
    return _record(ctx.exact.expand(cls, m, rng), rng, 1)


def _window(n: int, window: float, smallest: int = 2) -> tuple[int, int]:
    """Half-size range ``[lo, hi]`` of ``n (1 -+ window)``."""
    if n % 2 or n < 2 * smallest:
        msg = f"n must be even and at least {2 * smallest}, got {n}."
        raise ValueError(msg)
    if not 0 <= window < 1:
        msg = f"window must lie in [0, 1), got {window}."
        raise ValueError(msg)
    lo = max(smallest, math.ceil(n * (1 - window) / 2 - 1e-9))
    hi = max(lo, math.floor(n * (1 + window) / 2 + 1e-9))
    return lo, hi


def _graph_record(
    network: Network,
    tree: DecompositionTree,
    rng: Generator,
    trials: int,
    **extra: Any,
) -> SampleRecord:
    graph = CubicGraph(network.graph.vertices, network.graph.edges)
    return SampleRecord(
        value=graph,
        size=graph.n,
        trials=trials,
        stream=stream_id(rng),
        tree=tree,
        extra={"core_sizes": tree.core_sizes(), "root": network.poles, **extra},
    )


def sample_connected_cubic(
    ctx: SamplerContext,
    n: int,
    rng: Generator,
    *,
    window: float = 0.0,
    method: Literal["recursive", "rejection"] = "recursive",
) -> SampleRecord:
    """Uniform connected simple cubic planar graph with ``n`` vertices, or with a size in a window.

    A simple network is a connected cubic planar graph with an oriented
    root edge and every graph has exactly ``3n`` of them, so a uniform
    simple network with its root forgotten is a uniform graph.

    Parameters
    ----------
    n
        Target number of vertices (even, at least 4).
    window
        Relative tolerance: the size lies in ``[n (1 - window), n (1 + window)]``
        with the Boltzmann law at ``rho`` restricted to that range.
    method
        ``"recursive"`` samples the size and then an exact-size structure.
        ``"rejection"`` repeats free Boltzmann draws until the size fits.

    Returns
    -------
        A record whose ``extra["core_sizes"]`` lists the vertex counts of
        the 3-connected components, largest first.

    Raises
    ------
    SamplerBudgetError
        If the window exceeds the table (recursive) or the rejection budget
        is used up.

    """
    lo, hi = _window(n, window)
    if method == "recursive":
        ctx.check_half_size(hi)
        m = lo + _choose(ctx.exact.coeffs["Ns"][lo : hi + 1], rng)
        network, tree = ctx.exact.expand("Ns", m, rng).network(rng)
        assert network is not None
        return _graph_record(network, tree, rng, 1)
    if method != "rejection":
        msg = f"Unknown method `{method}`, use 'recursive' or 'rejection'."
        raise ValueError(msg)
    sampler = BoltzmannSampler(ctx)
    max_size = min(ctx.config.max_size, 2 * hi)
    for trials in range(1, ctx.config.max_trials + 1):
        builder = TreeBuilder(max_size)
        try:
            sampler.expand("Ns", rng, builder)
        except SamplerBudgetError:
            continue
        if builder.size >= 2 * lo:
            network, tree = builder.network(rng)
            assert network is not None
            return _graph_record(network, tree, rng, trials)
    msg = (
        f"No graph with {2 * lo}..{2 * hi} vertices after {ctx.config.max_trials} Boltzmann draws;"
        f" expect about n**2.5 draws for a window of 0 (n={n})."
    )
    raise SamplerBudgetError(msg)


def sample_disconnected(ctx: SamplerContext, n: int, rng: Generator, *, window: float = 0.0) -> SampleRecord:
    """Uniform simple cubic planar graph (not necessarily connected) with ``n`` vertices.

    Uses ``2m g_m = sum_j Cdot_j g_{m-j}`` for the series ``g = exp(C)``:
    the component holding a marked vertex has ``2j`` vertices with weight
    ``Cdot_j g_{m-j}``, is drawn uniformly and the rest is drawn likewise.

    Returns
    -------
        A record whose ``extra["components"]`` lists the component sizes,
        largest first.

    """
    lo, hi = _window(n, window)
    ctx.check_half_size(hi)
    g = ctx.exact.disconnected
    cdot = ctx.exact.coeffs["Cdot"]
    m = lo + _choose(g[lo : hi + 1], rng)
    edges: list[tuple[int, int]] = []
    components: list[int] = []
    offset = 0
    rest = m
    while rest > 0:
        j = 1 + _choose(cdot[1 : rest + 1] * g[rest - 1 :: -1], rng)
        network, _ = ctx.exact.expand("Ns", j, rng).network()
        assert network is not None
        edges.extend((u + offset, v + offset) for u, v in network.graph.edges)
        offset += network.n
        components.append(network.n)
        rest -= j
    perm = rng.permutation(offset)
    graph = CubicGraph.from_edges([(int(perm[u]), int(perm[v])) for u, v in edges], vertices=range(offset))
    return SampleRecord(
        value=graph,
        size=offset,
        stream=stream_id(rng),
        extra={"components": sorted(components, reverse=True)},
    )


def sample_O_model(ctx: SamplerContext, n: int, rng: Generator) -> SampleRecord:
    """A resampled graph: a fresh uniform core with an independent Boltzmann network on every edge.

    The core size ``V`` is the largest 3-connected component of a uniform
    connected cubic planar graph with ``n`` vertices. A uniform 3-connected
    cubic graph with ``V`` vertices then gets an independent sample of
    ``1 + D`` inserted at each of its ``3V/2`` edges, so the result has
    ``V + Y_1 + ... + Y_{3V/2}`` vertices.
    """
    source = sample_connected_cubic(ctx, n, rng)
    core_size = source.extra["core_sizes"][0]
    graph, root = sample_uniform_3connected(core_size // 2, rng).to_graph()
    order = [root, *core_edge_order(graph.adjacency, root)]
    sampler = BoltzmannSampler(ctx)
    assignments = {}
    for edge in order:
        builder, _ = _budget_retry(ctx, lambda: sampler.expand("1+D", rng), "A Boltzmann draw")
        assignments[edge] = builder.network()[0]
    result = insert_network(graph, assignments, check=False)
    perm = rng.permutation(result.n)
    mapping = {v: int(perm[i]) for i, v in enumerate(result.vertices)}
    result = CubicGraph(result.vertices, result.edges).relabel(mapping)
    return SampleRecord(
        value=result,
        size=result.n,
        stream=stream_id(rng),
        extra={
            "core_size": core_size,
            "inserted": sum(network is not None for network in assignments.values()),
            "source_size": source.size,
        },
    )
