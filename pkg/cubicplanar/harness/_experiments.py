"""Desk-scale experiments on random cubic planar graphs.

Every experiment fans its samples out with `run_tasks` and returns an
`ExperimentReport` whose summary rows are recomputable from its raw tables.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from typing import TYPE_CHECKING, Any

import networkx as nx
import numpy as np
from scipy import stats

from cubicplanar._profile import ProfilingStats
from cubicplanar.airy import default_evaluator
from cubicplanar.exceptions import RadiusGuardError
from cubicplanar.graph import CubicGraph, automorphism_count, canonical_form
from cubicplanar.harness._report import (
    CensusTable,
    ExperimentReport,
    census_spread,
    histogram,
    mean_census,
    total_variation,
)
from cubicplanar.harness._run import run_tasks
from cubicplanar.sampling import sample_connected_cubic, sample_disconnected, sample_network, sample_O_model
from cubicplanar.series import conditioned_first_joint, connected_value, product_first_joint
from cubicplanar.sweep import Sweep

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from numpy.random import Generator

    from cubicplanar.airy import AiryEval
    from cubicplanar.sampling import SamplerContext

logger = logging.getLogger(__name__)

CENSUS_MAX_RADIUS = 4
"""Largest neighbourhood radius of a census."""

_SMALLEST_H_COMPONENTS = 5  # off-root edges of K4
_LISTED_MASS = 1e-4


def _report(
    name: str,
    ctx: SamplerContext,
    parameters: dict[str, Any],
    summary: list[dict[str, Any]],
    profiling: ProfilingStats,
    **extra: Any,
) -> ExperimentReport:
    return ExperimentReport(
        experiment=name,
        parameters={**parameters, "table_order": ctx.config.table_order},
        summary=summary,
        constants=ctx.constants.to_dict(),
        runtime=profiling.as_dict(),
        profiling=profiling,
        **extra,
    )


def _core_sample(ctx: SamplerContext, rng: Generator, *, n: int, window: float, sample: int) -> dict[str, Any]:
    record = sample_connected_cubic(ctx, n, rng, window=window)
    sizes = record.extra["core_sizes"]
    second = sizes[1] if len(sizes) > 1 else 0
    return {
        "n": n,
        "sample": sample,
        "size": record.size,
        "largest": sizes[0],
        "second": second,
        "cores": len(sizes),
        "unique": second < sizes[0],
    }


def _core_rows(
    ctx: SamplerContext,
    ns: Sequence[int],
    samples: int,
    window: float,
    seed: int | None,
    threads: int,
    context_path: Path | None,
    profiling: ProfilingStats,
) -> list[dict[str, Any]]:
    tasks = Sweep({"n": list(ns), "sample": range(samples)}, constants={"window": window}).list()
    return run_tasks(
        _core_sample,
        tasks,
        ctx,
        seed=seed,
        threads=threads,
        context_path=context_path,
        stats=profiling,
    )


def run_core_experiment(
    ctx: SamplerContext,
    ns: Sequence[int],
    samples: int,
    *,
    window: float = 0.01,
    seed: int | None = 0,
    threads: int = 1,
    context_path: Path | None = None,
    evaluator: AiryEval | None = None,
) -> ExperimentReport:
    """Size ``V`` of the largest 3-connected component against ``kappa n`` and the map-Airy law.

    For every ``n`` the summary has the mean and median of ``V / n``, the
    Kolmogorov-Smirnov statistic and p-value of ``(V - kappa n) / n**(2/3)``
    against the CDF of ``c_v h(c_v t)``, and the frequency with which the
    largest component is unique. ``n`` is the actual size of each sample
    (window sampling).
    """
    evaluator = evaluator or default_evaluator()
    kappa = float(ctx.constants.kappa)
    c_v = float(ctx.constants.c_v)
    profiling = ProfilingStats()
    rows = _core_rows(ctx, ns, samples, window, seed, threads, context_path, profiling)
    summary = []
    histograms = {}
    for n in ns:
        group = [r for r in rows if r["n"] == n]
        size = np.array([r["size"] for r in group], dtype=float)
        largest = np.array([r["largest"] for r in group], dtype=float)
        rescaled = (largest - kappa * size) / size ** (2 / 3)
        ks = stats.kstest(rescaled, lambda t: evaluator.cdf_array(t, scale=c_v))
        summary.append(
            {
                "n": n,
                "samples": len(group),
                "mean_size": float(size.mean()),
                "mean_fraction": float(np.mean(largest / size)),
                "median_fraction": float(np.median(largest / size)),
                "kappa": kappa,
                "ks_statistic": float(ks.statistic),
                "ks_pvalue": float(ks.pvalue),
                "unique_frequency": float(np.mean([r["unique"] for r in group])),
            },
        )
        histograms[f"rescaled_n{n}"] = histogram(rescaled, bins=np.linspace(-4, 3, 29))
        logger.info("Core experiment at n=%d: median V/n=%.4f, KS p=%.3g", n, summary[-1]["median_fraction"], ks.pvalue)
    parameters = {"ns": list(ns), "samples": samples, "window": window, "seed": seed, "threads": threads}
    return _report("core", ctx, parameters, summary, profiling, tables={"samples": rows}, histograms=histograms)


def run_second_largest(
    ctx: SamplerContext,
    ns: Sequence[int],
    samples: int,
    *,
    window: float = 0.01,
    seed: int | None = 0,
    threads: int = 1,
    context_path: Path | None = None,
) -> ExperimentReport:
    """Median size of the second-largest 3-connected component and its log-log slope in ``n``."""
    profiling = ProfilingStats()
    rows = _core_rows(ctx, ns, samples, window, seed, threads, context_path, profiling)
    summary = []
    for n in ns:
        group = [r for r in rows if r["n"] == n]
        second = np.array([r["second"] for r in group], dtype=float)
        median = float(np.median(second))
        summary.append(
            {
                "n": n,
                "samples": len(group),
                "median_second": median,
                "median_scaled": median / n ** (2 / 3),
                "median_fraction": median / n,
                "second_below_largest": all(r["second"] < r["largest"] for r in group),
            },
        )
    medians = np.array([row["median_second"] for row in summary])
    fit = []
    if len(ns) > 1 and np.all(medians > 0):
        slope, intercept = np.polyfit(np.log(np.asarray(ns, dtype=float)), np.log(medians), 1)
        fit.append({"slope": float(slope), "intercept": float(intercept)})
        logger.info("Second-largest component: log-log slope %.3f", slope)
    parameters = {"ns": list(ns), "samples": samples, "window": window, "seed": seed, "threads": threads}
    return _report("second", ctx, parameters, summary, profiling, tables={"samples": rows, "fit": fit})


def _census_sample(
    ctx: SamplerContext,
    rng: Generator,
    *,
    n: int,
    k: int,
    model: str,
    sample: int,
) -> CensusTable:
    draw = sample_O_model if model == "O" else sample_connected_cubic
    return CensusTable.from_graph(draw(ctx, n, rng).value, k, sample=sample)


def run_census(
    ctx: SamplerContext,
    ns: Sequence[int],
    k: int,
    samples: int,
    *,
    seed: int | None = 0,
    threads: int = 1,
    context_path: Path | None = None,
    compare_models: bool = True,
) -> ExperimentReport:
    """Census of ``k``-neighbourhoods over all vertices of sampled graphs.

    Reports, per ``n``, the total-variation distance between the mean census
    at ``n`` and at the next size of the grid, the largest per-key standard
    deviation across samples, and at the largest ``n`` the distance between
    the censuses of connected graphs and of the resampled (O-model) graphs.

    Raises
    ------
    RadiusGuardError
        If ``k`` is outside ``[0, 4]``.

    """
    if not 0 <= k <= CENSUS_MAX_RADIUS:
        msg = f"Census radius {k} is outside [0, {CENSUS_MAX_RADIUS}]."
        raise RadiusGuardError(msg)
    ns = sorted(ns)
    largest = ns[-1]
    models = ["C", "O"] if compare_models else ["C"]
    tasks = Sweep(
        {"model": models, "n": ns, "sample": range(samples)},
        constants={"k": k},
        exclude=lambda c: c["model"] == "O" and c["n"] != largest,
    ).list()
    profiling = ProfilingStats()
    censuses = run_tasks(
        _census_sample,
        tasks,
        ctx,
        seed=seed,
        threads=threads,
        context_path=context_path,
        stats=profiling,
    )
    by_model: dict[tuple[str, int], list[CensusTable]] = {}
    for task, census in zip(tasks, censuses):
        by_model.setdefault((task["model"], task["n"]), []).append(census)
    means = {n: mean_census(by_model[("C", n)]) for n in ns}
    summary = []
    for i, n in enumerate(ns):
        spread = census_spread(by_model[("C", n)])
        row: dict[str, Any] = {
            "n": n,
            "keys": len(means[n]),
            "tv_to_next": total_variation(means[n], means[ns[i + 1]]) if i + 1 < len(ns) else None,
            "max_spread": max(spread.values(), default=0.0),
        }
        if n == largest and compare_models:
            row["tv_c_vs_o"] = total_variation(means[n], mean_census(by_model[("O", n)]))
        summary.append(row)
    rows = [
        {"model": task["model"], **entry}
        for task, census in zip(tasks, censuses)
        for entry in census.to_rows()
    ]
    parameters = {"ns": ns, "k": k, "samples": samples, "seed": seed, "threads": threads, "models": models}
    return _report("census", ctx, parameters, summary, profiling, tables={"census": rows})


def _fragment(graph: CubicGraph) -> tuple[int, CubicGraph | None]:
    """Size of the largest component and the graph formed by all other components."""
    components = sorted(nx.connected_components(graph.to_simple_networkx()), key=len, reverse=True)
    rest = set().union(*components[1:])
    if not rest:
        return len(components[0]), None
    edges = [(u, v) for u, v in graph.edges if u in rest]
    return len(components[0]), CubicGraph.from_edges(edges, vertices=sorted(rest))


def _fragment_sample(ctx: SamplerContext, rng: Generator, *, n: int, window: float, sample: int) -> dict[str, Any]:
    record = sample_disconnected(ctx, n, rng, window=window)
    largest, fragment = _fragment(record.value)
    return {
        "sample": sample,
        "size": record.size,
        "largest": largest,
        "fragment_size": 0 if fragment is None else fragment.n,
        "fragment_key": "" if fragment is None else canonical_form(fragment).hex(),
        "fragment_aut": 1 if fragment is None else automorphism_count(fragment),
        "components": len(record.extra["components"]),
    }


def run_fragments(
    ctx: SamplerContext,
    n: int,
    samples: int,
    *,
    window: float = 0.0,
    seed: int | None = 0,
    threads: int = 1,
    context_path: Path | None = None,
) -> ExperimentReport:
    """The graph left after removing the largest component, against the Boltzmann-Poisson law.

    An unlabelled fragment ``G`` should appear with probability
    ``rho**|G| / (|Aut G| exp(C(rho)))``; in particular the fragment is
    empty with probability ``exp(-C(rho))``.
    """
    profiling = ProfilingStats()
    tasks = Sweep({"sample": range(samples)}, constants={"n": n, "window": window}).list()
    rows = run_tasks(
        _fragment_sample,
        tasks,
        ctx,
        seed=seed,
        threads=threads,
        context_path=context_path,
        stats=profiling,
    )
    rho = float(ctx.constants.rho)
    c_rho = connected_value(ctx.constants, ctx.table)
    counts = Counter((r["fragment_key"], r["fragment_size"], r["fragment_aut"]) for r in rows)
    fragments = [
        {
            "key": key,
            "size": size,
            "aut": aut,
            "count": count,
            "frequency": count / len(rows),
            "expected": rho**size / (aut * math.exp(c_rho)),
        }
        for (key, size, aut), count in counts.most_common()
    ]
    k4_key = canonical_form(CubicGraph.from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])).hex()
    deficits = [r["size"] - r["largest"] for r in rows]
    summary = [
        {
            "n": n,
            "samples": len(rows),
            "C_rho": c_rho,
            "empty_frequency": _frequency(rows, ""),
            "expected_empty": math.exp(-c_rho),
            "k4_frequency": _frequency(rows, k4_key),
            "expected_k4": rho**4 / (24 * math.exp(c_rho)),
            "median_deficit": float(np.median(deficits)),
        },
    ]
    logger.info("Fragments at n=%d: empty frequency %.5f", n, summary[0]["empty_frequency"])
    parameters = {"n": n, "samples": samples, "window": window, "seed": seed, "threads": threads}
    return _report(
        "fragments",
        ctx,
        parameters,
        summary,
        profiling,
        tables={"samples": rows, "fragments": fragments},
        histograms={"deficit": histogram(deficits, bins=np.arange(0, max(deficits, default=0) + 6, 2) - 0.5)},
    )


def _frequency(rows: Sequence[dict[str, Any]], key: str) -> float:
    return sum(r["fragment_key"] == key for r in rows) / len(rows) if rows else 0.0


def _components_sample(
    ctx: SamplerContext,
    rng: Generator,
    *,
    n: int,
    window: float,
    first: int,
    sample: int,
) -> dict[str, Any]:
    record = sample_network(ctx, "H", n, rng, window=window)
    root = record.tree
    assert root is not None
    assert root.core is not None
    sizes = [child.size for child in root.children]
    return {
        "sample": sample,
        "size": record.size,
        "core": root.core.size,
        "count": len(sizes),
        "total": sum(sizes),
        "first": sizes[:first],
    }


def _tv(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(p - q).sum())


def joint_histogram(tuples: Sequence[Sequence[int]], first: int, alphabet: int) -> np.ndarray:
    """Empirical joint law of half-size tuples in the cell layout of `product_first_joint`."""
    counts = np.zeros(alphabet**first + 1)
    for halves in tuples:
        if len(halves) != first:
            msg = f"Expected {first} sizes, got {len(halves)}."
            raise ValueError(msg)
        if max(halves) >= alphabet:
            counts[-1] += 1
        else:
            counts[np.ravel_multi_index(tuple(halves), (alphabet,) * first)] += 1
    return counts / max(1, len(tuples))


def run_components_experiment(
    ctx: SamplerContext,
    n: int,
    samples: int,
    *,
    window: float = 0.05,
    first: int = 5,
    alphabet: int = 6,
    seed: int | None = 0,
    threads: int = 1,
    context_path: Path | None = None,
) -> ExperimentReport:
    """Joint law of the first component sizes of H-networks against independent draws of ``Y``.

    Each sample is an ``H``-network with a size in the window around
    ``n``. The half sizes of the networks on the first ``first`` edges of
    its core form one tuple; the empirical joint law of these tuples on
    ``{0..alphabet-1}**first`` (plus one cell for the rest) is compared in
    total variation with ``first`` independent copies of ``Y`` and with the
    mixture over samples of the copies conditioned on the sum of all
    ``3V/2 - 1`` components of the core.
    """
    if not 1 <= first <= _SMALLEST_H_COMPONENTS:
        msg = f"first must lie in 1..{_SMALLEST_H_COMPONENTS}, the components of the smallest core, got {first}."
        raise ValueError(msg)
    profiling = ProfilingStats()
    tasks = Sweep({"sample": range(samples)}, constants={"n": n, "window": window, "first": first}).list()
    rows = run_tasks(
        _components_sample,
        tasks,
        ctx,
        seed=seed,
        threads=threads,
        context_path=context_path,
        stats=profiling,
    )
    empirical = joint_histogram([[size // 2 for size in row["first"]] for row in rows], first, alphabet)
    independent = product_first_joint(ctx.y_law, first, alphabet)
    conditioned = np.zeros_like(independent)
    for row in rows:
        conditioned += conditioned_first_joint(ctx.y_law, row["count"], row["total"], first, alphabet)
    conditioned /= max(1, len(rows))
    summary = [
        {
            "n": n,
            "window": window,
            "samples": len(rows),
            "cells": len(empirical),
            "tv_independent": _tv(empirical, independent),
            "tv_conditioned": _tv(empirical, conditioned),
            "tv_conditioned_independent": _tv(conditioned, independent),
            "mean_core": float(np.mean([r["core"] for r in rows])),
        },
    ]
    shape = (alphabet,) * first
    listed = (empirical > 0) | (independent >= _LISTED_MASS) | (conditioned >= _LISTED_MASS)
    listed[-1] = True
    laws = [
        {
            "half_sizes": "other" if cell == len(empirical) - 1 else [int(i) for i in np.unravel_index(cell, shape)],
            "empirical": float(empirical[cell]),
            "independent": float(independent[cell]),
            "conditioned": float(conditioned[cell]),
        }
        for cell in np.flatnonzero(listed)
    ]
    parameters = {
        "n": n,
        "window": window,
        "samples": samples,
        "first": first,
        "alphabet": alphabet,
        "seed": seed,
        "threads": threads,
    }
    return _report("components", ctx, parameters, summary, profiling, tables={"samples": rows, "laws": laws})
