"""Experiments, brute-force oracles and report files."""

from cubicplanar.harness._enumerate import (
    count_cubic_planar,
    count_networks,
    enumerate_cubic_planar,
    enumerate_networks,
    simple_graphs,
    unlabelled_cubic_planar,
)
from cubicplanar.harness._experiments import (
    CENSUS_MAX_RADIUS,
    run_census,
    run_components_experiment,
    run_core_experiment,
    run_fragments,
    run_second_largest,
)
from cubicplanar.harness._report import (
    CensusTable,
    ExperimentReport,
    census_spread,
    histogram,
    mean_census,
    total_variation,
)
from cubicplanar.harness._run import cached_context, run_tasks

__all__ = [
    "CENSUS_MAX_RADIUS",
    "CensusTable",
    "ExperimentReport",
    "cached_context",
    "census_spread",
    "count_cubic_planar",
    "count_networks",
    "enumerate_cubic_planar",
    "enumerate_networks",
    "histogram",
    "mean_census",
    "run_census",
    "run_components_experiment",
    "run_core_experiment",
    "run_fragments",
    "run_second_largest",
    "run_tasks",
    "simple_graphs",
    "total_variation",
    "unlabelled_cubic_planar",
]
