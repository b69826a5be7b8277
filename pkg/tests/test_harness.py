from __future__ import annotations

import json
import math

import numpy as np
import pytest

from cubicplanar.exceptions import EnumerationRangeError, RadiusGuardError
from cubicplanar.graph import CLASS_TAGS, classify_network, validate
from cubicplanar.harness import (
    CensusTable,
    ExperimentReport,
    cached_context,
    census_spread,
    count_cubic_planar,
    count_networks,
    enumerate_cubic_planar,
    enumerate_networks,
    histogram,
    mean_census,
    run_census,
    run_components_experiment,
    run_core_experiment,
    run_fragments,
    run_second_largest,
    run_tasks,
    simple_graphs,
    total_variation,
    unlabelled_cubic_planar,
)
from cubicplanar.harness._experiments import _core_sample, joint_histogram
from cubicplanar.sampling import SamplerConfig
from cubicplanar.series import solve_grammar
from tests.helpers import k4, prism


@pytest.fixture(scope="module")
def exact_table():
    return solve_grammar(12)


def test_simple_graphs_counts():
    # labelled simple cubic graphs: K4, then 60 prisms and 10 copies of K33
    assert sum(1 for _ in simple_graphs([3] * 4)) == 1
    assert sum(1 for _ in simple_graphs([3] * 6)) == 70
    assert list(simple_graphs([1, 1])) == [[(0, 1)]]
    assert list(simple_graphs([2, 1])) == []


def test_enumerate_small_graphs():
    assert len(enumerate_cubic_planar(4)) == 1
    graphs = enumerate_cubic_planar(6)
    assert len(graphs) == 60
    assert all(validate(graph).valid for graph in graphs)
    assert len({tuple(sorted(graph.edges)) for graph in graphs}) == 60


@pytest.mark.parametrize("n", [4, 6, 8])
def test_counts_match_grammar(exact_table, n):
    assert count_cubic_planar(n) == exact_table.labelled_count("Cdot", n) // n


def test_unlabelled_classes():
    ((graph, aut),) = unlabelled_cubic_planar(4)
    assert graph.same_edges(k4())
    assert aut == 24
    ((graph, aut),) = unlabelled_cubic_planar(6)
    assert aut == 12
    assert sum(math.factorial(6) // a for _, a in unlabelled_cubic_planar(6)) == 60


@pytest.mark.parametrize("n", [4, 6])
def test_network_counts_match_grammar(exact_table, n):
    counts = count_networks(n)
    for tag in CLASS_TAGS:
        assert counts[tag] == exact_table.labelled_count(tag, n), tag
    assert counts["D"] == exact_table.labelled_count("D", n)


def test_network_enumeration_classes():
    networks = enumerate_networks(6)
    assert count_networks(6)["L"] == 180
    for tag, group in networks.items():
        assert all(classify_network(network) == tag for network in group)
    assert all(network.south == network.north for network in networks["L"])
    assert networks["H"]


@pytest.mark.parametrize(("func", "n"), [(enumerate_cubic_planar, 12), (count_cubic_planar, 7), (enumerate_networks, 10)])
def test_enumeration_range(func, n):
    with pytest.raises(EnumerationRangeError, match="supports n in 4, 6"):
        func(n)


def test_histogram_rows():
    rows = histogram([0, 1, 2, 3], bins=2)
    assert rows == [
        {"bin_lo": 0.0, "bin_hi": 1.5, "count": 2},
        {"bin_lo": 1.5, "bin_hi": 3.0, "count": 2},
    ]


def test_total_variation():
    assert total_variation({"a": 1.0}, {"b": 1.0}) == 1.0
    assert total_variation({"a": 0.5, "b": 0.5}, {"a": 0.5, "b": 0.5}) == 0.0
    assert total_variation({"a": 0.75, "b": 0.25}, {"a": 0.25, "b": 0.75}) == pytest.approx(0.5)


def test_census_table():
    census = CensusTable.from_graph(k4(), 0, sample=3)
    assert len(census.frequencies) == 1
    assert next(iter(census.frequencies.values())) == 1.0
    rows = census.to_rows()
    assert rows[0]["sample"] == 3
    assert rows[0]["n"] == 4
    # the prism is vertex-transitive
    assert len(CensusTable.from_graph(prism(), 2).frequencies) == 1
    with pytest.raises(ValueError, match="must sum to 1"):
        CensusTable(4, 1, 0, {"a": 0.5})


def test_mean_census_and_spread():
    a = CensusTable(4, 1, 0, {"x": 1.0})
    b = CensusTable(4, 1, 1, {"x": 0.5, "y": 0.5})
    assert mean_census([a, b]) == {"x": 0.75, "y": 0.25}
    spread = census_spread([a, b])
    assert spread["x"] == pytest.approx(np.std([1.0, 0.5], ddof=1))
    assert census_spread([a]) == {"x": 0.0}
    assert mean_census([]) == {}


def _report() -> ExperimentReport:
    return ExperimentReport(
        experiment="core",
        parameters={"ns": [1000], "samples": 2, "seed": 5},
        summary=[{"n": 1000, "median_fraction": 0.85}],
        tables={"samples": [{"n": 1000, "largest": 850}, {"n": 1000, "largest": 848}]},
        histograms={"rescaled": histogram([0.1, -0.2], bins=2)},
        constants={"rho": "0.3192246"},
    )


def test_report_json(tmp_path):
    report = _report()
    paths = report.write(tmp_path / "out")
    assert sorted(p.name for p in paths) == ["core.json", "manifest.json"]
    data = json.loads((tmp_path / "out" / "core.json").read_text())
    assert ExperimentReport.from_dict(data).summary == report.summary
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["seed"] == 5
    assert manifest["content_hash"] == report.input_hash()
    assert manifest["files"] == ["core.json"]
    assert report.seed == 5
    assert report.runtime_table() == "No profiling information."


def test_report_csv(tmp_path):
    paths = _report().write(tmp_path, "csv")
    names = {p.name for p in paths}
    assert names == {"core_summary.csv", "core_samples.csv", "core_hist_rescaled.csv", "manifest.json"}
    lines = (tmp_path / "core_hist_rescaled.csv").read_text().splitlines()
    assert lines[0] == "bin_lo,bin_hi,count"
    assert len(lines) == 3
    assert (tmp_path / "core_samples.csv").read_text().splitlines()[0] == "n,largest"


def test_report_hash_depends_on_inputs(tmp_path):
    report = _report()
    other = _report()
    other.parameters["seed"] = 6
    assert report.input_hash() != other.input_hash()
    with pytest.raises(ValueError, match="Unknown output format"):
        report.write(tmp_path, "xml")  # type: ignore[arg-type]


def test_run_tasks_is_independent_of_workers(ctx):
    tasks = [{"n": 20, "window": 0.0, "sample": i} for i in range(4)]
    serial = run_tasks(_core_sample, tasks, ctx, seed=11)
    parallel = run_tasks(_core_sample, tasks, ctx, seed=11, threads=2)
    assert serial == parallel
    assert [row["sample"] for row in serial] == [0, 1, 2, 3]
    with pytest.raises(ValueError, match="at least 1"):
        run_tasks(_core_sample, tasks, ctx, seed=11, threads=0)


def test_run_tasks_names_failing_task(ctx):
    with pytest.raises(ValueError, match="even") as excinfo:
        run_tasks(_core_sample, [{"n": 21, "window": 0.0, "sample": 0}], ctx, seed=1)
    assert "_core_sample" in str(excinfo.value) + "".join(getattr(excinfo.value, "__notes__", []))


def test_cached_context(tmp_path):
    config = SamplerConfig(table_order=40, precision=15, max_size=5_000, core_table_size=100)
    ctx, path = cached_context(config, cache_dir=tmp_path)
    assert path is not None
    assert path.exists()
    again, same_path = cached_context(config, cache_dir=tmp_path)
    assert same_path == path
    assert again.config == config
    plain, none = cached_context(config)
    assert none is None
    assert plain.config == config


def test_core_experiment(ctx):
    report = run_core_experiment(ctx, [30, 40], 8, window=0.0, seed=1)
    assert report.experiment == "core"
    assert [row["n"] for row in report.summary] == [30, 40]
    for row in report.summary:
        assert row["samples"] == 8
        assert row["mean_size"] == row["n"]
        assert 0 < row["mean_fraction"] <= 1
        assert 0 <= row["ks_pvalue"] <= 1
        assert 0 <= row["unique_frequency"] <= 1
    assert len(report.tables["samples"]) == 16
    assert set(report.histograms) == {"rescaled_n30", "rescaled_n40"}
    assert report.constants["rho"].startswith("0.3192246")
    assert report.parameters["table_order"] == 120
    assert set(report.runtime) == {"wall_time_s", "avg_cpu_percent", "max_memory_mb", "tasks", "tasks_per_s"}
    assert report.runtime["tasks"] == 16
    again = run_core_experiment(ctx, [30, 40], 8, window=0.0, seed=1)
    assert again.tables == report.tables


def test_second_largest(ctx):
    report = run_second_largest(ctx, [30, 40], 6, window=0.0, seed=2)
    assert len(report.summary) == 2
    for row in report.summary:
        assert row["median_second"] >= 0
    assert len(report.tables["fit"]) <= 1


def test_census(ctx):
    report = run_census(ctx, [20, 16], 1, 3, seed=3)
    assert report.parameters["ns"] == [16, 20]
    first, last = report.summary
    assert first["tv_to_next"] is not None
    assert 0 <= first["tv_to_next"] <= 1
    assert last["tv_to_next"] is None
    assert 0 <= last["tv_c_vs_o"] <= 1
    assert "tv_c_vs_o" not in first
    models = {row["model"] for row in report.tables["census"]}
    assert models == {"C", "O"}
    assert all(row["k"] == 1 for row in report.tables["census"])


@pytest.mark.parametrize("k", [-1, 5])
def test_census_radius_guard(ctx, k):
    with pytest.raises(RadiusGuardError, match="outside"):
        run_census(ctx, [16], k, 1)


def test_fragments(ctx):
    report = run_fragments(ctx, 30, 30, seed=4)
    (row,) = report.summary
    assert row["samples"] == 30
    assert row["C_rho"] == pytest.approx(0.0006, abs=1e-4)
    assert row["expected_empty"] == pytest.approx(math.exp(-row["C_rho"]))
    assert 0 <= row["empty_frequency"] <= 1
    fragments = report.tables["fragments"]
    assert sum(f["frequency"] for f in fragments) == pytest.approx(1.0)
    assert all(f["size"] % 2 == 0 for f in fragments)
    for sample in report.tables["samples"]:
        assert sample["largest"] + sample["fragment_size"] == sample["size"]


def test_components_experiment(ctx):
    report = run_components_experiment(ctx, 40, 10, window=0.1, first=3, alphabet=4, seed=5)
    laws = report.tables["laws"]
    assert laws[-1]["half_sizes"] == "other"
    assert all(len(row["half_sizes"]) == 3 for row in laws[:-1])
    (row,) = report.summary
    assert row["cells"] == 4**3 + 1
    assert 0 <= row["tv_independent"] <= 1
    assert 0 <= row["tv_conditioned"] <= 1
    for sample in report.tables["samples"]:
        assert 36 <= sample["size"] <= 44
        assert sample["size"] == sample["core"] + sample["total"]
        assert sample["count"] == 3 * sample["core"] // 2 - 1
        assert len(sample["first"]) == 3
    with pytest.raises(ValueError, match="first must lie in"):
        run_components_experiment(ctx, 40, 1, first=6)


def test_components_coherent_at_moderate_n(ctx):
    report = run_components_experiment(ctx, 60, 300, window=0.1, first=5, alphabet=3, seed=6)
    (row,) = report.summary
    assert row["samples"] == 300
    assert row["tv_conditioned"] < 0.08
    assert row["tv_independent"] < 0.1


def test_joint_histogram_sees_dependence():
    # two fair coins that always agree: the marginals are those of independent coins
    tuples = [[0, 0, 0], [1, 1, 1]] * 50
    empirical = joint_histogram(tuples, 3, 2)
    independent = np.append(np.full(8, 1 / 8), 0.0)
    assert empirical[0] == empirical[7] == 0.5
    assert 0.5 * np.abs(empirical - independent).sum() == pytest.approx(0.75)
    assert joint_histogram([[0, 5, 0]], 3, 2)[-1] == 1.0
    with pytest.raises(ValueError, match="Expected 3 sizes"):
        joint_histogram([[0, 0]], 3, 2)
