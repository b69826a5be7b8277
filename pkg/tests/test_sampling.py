from __future__ import annotations

import contextlib
from collections import Counter

import networkx as nx
import numpy as np
import pytest
from scipy import special, stats

from cubicplanar.exceptions import InvalidMapError, SamplerBudgetError
from cubicplanar.graph import (
    automorphism_count,
    canonical_form,
    check_network,
    classify_network,
    decompose,
    dual_map,
    network_from_graph,
    recompose,
    rooted_map_key,
    validate,
)
from cubicplanar.sampling import (
    BRANCHES,
    PowerTail,
    SampleRecord,
    SamplerConfig,
    SamplerContext,
    draw_size_biased_w,
    make_rng,
    sample_boltzmann_network,
    sample_connected_cubic,
    sample_disconnected,
    sample_network,
    sample_O_model,
    sample_size_biased,
    sample_triangulation,
    sample_uniform_3connected,
    sample_Y,
    stream_id,
)
from cubicplanar.sampling._models import _budget_retry
from tests.helpers import k4, prism


def test_make_rng_streams():
    assert make_rng(1, 0).random() == make_rng(1, 0).random()
    assert make_rng(1, 0).random() != make_rng(1, 1).random()
    assert stream_id(make_rng(7, 3)) == (7, (3,))


def test_power_tail_first_mass():
    tail = PowerTail(2.5, 10)
    rng = make_rng(0)
    draws = np.array([tail.sample(rng) for _ in range(20_000)])
    assert draws.min() == 10
    expected = 10**-2.5 / special.zeta(2.5, 10)
    assert abs(np.mean(draws == 10) - expected) < 0.012


def test_power_tail_limit():
    tail = PowerTail(1.5, 1)
    rng = make_rng(3)
    draws = [tail.sample(rng, limit=2) for _ in range(200)]
    assert set(draws) <= {1, 2}
    assert 2 in draws


def test_budget_retry_warns_after_resampling(ctx):
    outcomes = iter([SamplerBudgetError("too big"), SamplerBudgetError("too big"), "ok"])

    def draw():
        outcome = next(outcomes)
        if isinstance(outcome, Exception):
            raise outcome
        return outcome

    with pytest.warns(UserWarning, match="resampled 2 time"):
        assert _budget_retry(ctx, draw, "A draw") == ("ok", 3)


def test_power_tail_rejects_bad_parameters():
    with pytest.raises(ValueError, match="exponent"):
        PowerTail(1.0, 5)
    with pytest.raises(ValueError, match="table_order"):
        SamplerConfig(table_order=7)


def test_branch_probabilities(ctx):
    for symbol, cdf in ctx.branch_cdfs.items():
        assert len(cdf) == len(BRANCHES[symbol])
        assert cdf[-1] == 1.0
        assert np.all(np.diff(cdf) >= 0)
    v = ctx.symbol_values
    assert v["L"] + v["S"] + v["P"] + v["H"] == pytest.approx(v["D"], rel=1e-9)
    assert v["P-double"] + v["P-pair"] == pytest.approx(v["P"], rel=1e-12)
    ns = v["H"] + v["P-pair"] + v["I"] + v["S-PH"] + v["S-L"]
    assert ns == pytest.approx(v["Ns"], rel=1e-9)


def test_y_table_mass(ctx):
    assert ctx.y_cdf[-1] + ctx.y_law.tail_mass == pytest.approx(1.0, abs=1e-12)


def test_sample_Y(ctx):
    rng = make_rng(11)
    draws = sample_Y(ctx, rng, size=200_000)
    assert np.all(draws % 2 == 0)
    assert abs(np.mean(draws == 0) - ctx.y_law.pmf(0)) < 0.001
    assert ctx.y_law.pmf(0) == pytest.approx(0.988605, abs=2e-6)
    truncated = np.where(draws <= 100, draws, 0)
    expected = sum(n * ctx.y_law.pmf(n) for n in range(0, 101, 2))
    assert abs(truncated.mean() - expected) < 0.01
    single = sample_Y(ctx, rng)
    assert isinstance(single, int)
    assert single % 2 == 0


def test_boltzmann_networks_are_valid(ctx):
    rng = make_rng(3)
    for _ in range(150):
        record = sample_boltzmann_network(ctx, rng, "D")
        network = record.value
        assert network.n == record.size == record.tree.size
        check_network(network)
        assert classify_network(network) == record.tree.class_tag
        if network.n <= 60:
            rebuilt = recompose(decompose(network))
            assert rebuilt.graph.same_edges(network.graph)


def test_boltzmann_empty_frequency(ctx):
    rng = make_rng(4)
    records = [sample_boltzmann_network(ctx, rng) for _ in range(3000)]
    empty = [r for r in records if r.value is None]
    assert all(r.size == 0 for r in empty)
    assert abs(len(empty) / 3000 - ctx.y_law.pmf(0)) < 0.01


def test_boltzmann_is_reproducible(ctx):
    sizes = [sample_boltzmann_network(ctx, make_rng(5, i)).size for i in range(50)]
    again = [sample_boltzmann_network(ctx, make_rng(5, i)).size for i in range(50)]
    assert sizes == again


def test_exact_d_networks_of_size_4_are_uniform(ctx):
    rng = make_rng(8)
    poles = Counter()
    for _ in range(1200):
        network = sample_network(ctx, "D", 4, rng).value
        assert network.graph.same_edges(k4())
        poles[network.poles] += 1
    assert len(poles) == 12
    assert all(60 < count < 140 for count in poles.values())


def test_exact_class_frequencies_at_size_6(ctx):
    rng = make_rng(9)
    tags = Counter(sample_network(ctx, "D", 6, rng).tree.class_tag for _ in range(2000))
    coeffs = ctx.table.t_coeffs
    assert "S" not in tags
    for tag in ("L", "P", "H"):
        p = coeffs[tag][3] / coeffs["D"][3]
        sigma = np.sqrt(p * (1 - p) / 2000)
        assert abs(tags[tag] / 2000 - p) < 5 * sigma + 1e-9


@pytest.mark.parametrize(("cls", "n"), [("L", 6), ("S", 8), ("I", 10), ("P", 8), ("H", 12), ("Ns", 10)])
def test_sample_network_class(ctx, cls, n):
    record = sample_network(ctx, cls, n, make_rng(4))
    network = record.value
    assert network.n == n
    check_network(network)
    if cls != "Ns":
        assert classify_network(network) == cls
    else:
        assert network.graph.is_simple


def test_sample_network_errors(ctx):
    rng = make_rng(0)
    with pytest.raises(ValueError, match="Unknown class"):
        sample_network(ctx, "X", 4, rng)
    with pytest.raises(ValueError, match="even"):
        sample_network(ctx, "D", 5, rng)
    with pytest.raises(ValueError, match="No `I` structure"):
        sample_network(ctx, "I", 8, rng)
    with pytest.raises(SamplerBudgetError, match="exceeds the grammar table"):
        sample_network(ctx, "D", ctx.table.order + 2, rng)


@pytest.mark.parametrize(("n", "graph"), [(4, k4()), (6, prism())])
def test_connected_cubic_small_sizes(ctx, n, graph):
    rng = make_rng(12)
    for method in ("recursive", "rejection"):
        record = sample_connected_cubic(ctx, n, rng, method=method)
        assert canonical_form(record.value) == canonical_form(graph)
        assert record.trials >= 1


def test_connected_cubic_size_8_is_uniform(ctx):
    rng = make_rng(13)
    classes = Counter()
    examples = {}
    draws = 3000
    for _ in range(draws):
        graph = sample_connected_cubic(ctx, 8, rng).value
        key = canonical_form(graph)
        classes[key] += 1
        examples.setdefault(key, graph)
    weights = {key: 1 / automorphism_count(g) for key, g in examples.items()}
    total = sum(weights.values())
    for key, count in classes.items():
        p = weights[key] / total
        assert abs(count / draws - p) < 5 * np.sqrt(p * (1 - p) / draws)
    assert all(validate(g).valid for g in examples.values())


def test_connected_cubic_window_and_determinism(ctx):
    record = sample_connected_cubic(ctx, 40, make_rng(21), window=0.1)
    assert 36 <= record.size <= 44
    assert validate(record.value).valid
    assert record.extra["core_sizes"] == sorted(record.extra["core_sizes"], reverse=True)
    again = sample_connected_cubic(ctx, 40, make_rng(21), window=0.1)
    assert again.value.same_edges(record.value)


def test_connected_cubic_errors(ctx):
    with pytest.raises(ValueError, match="even"):
        sample_connected_cubic(ctx, 7, make_rng(0))
    with pytest.raises(ValueError, match="window"):
        sample_connected_cubic(ctx, 8, make_rng(0), window=1.5)
    with pytest.raises(ValueError, match="method"):
        sample_connected_cubic(ctx, 8, make_rng(0), method="magic")  # type: ignore[arg-type]


def test_size_biased_w_support(ctx):
    rng = make_rng(14)
    w = np.array([draw_size_biased_w(ctx, rng) for _ in range(5000)])
    assert not np.isin(w, [2, 3, 4, 5, 6]).any()
    assert np.all((w == 1) | ((w - 1) % 3 == 0))
    expected = ctx.y_law.pmf(0) / ctx.y_law.w_mean
    assert abs(np.mean(w == 1) - expected) < 0.03


def test_sample_size_biased(ctx):
    rng = make_rng(15)
    seen = 0
    for _ in range(300):
        with contextlib.suppress(SamplerBudgetError):
            record = sample_size_biased(ctx, rng)
            w_hat = record.extra["w_hat"]
            assert 0 <= record.extra["marked_edge"] < w_hat
            assert record.size == (0 if w_hat == 1 else 2 * (w_hat - 1) // 3)
            seen += 1
            if w_hat > 1:
                associated = record.value.associated_edges()
                assert len(associated) == w_hat
                assert record.extra["marked"] == associated[record.extra["marked_edge"]]
            else:
                assert record.extra["marked"] == (None, None)
    assert seen > 250


def test_size_biased_marked_edge_is_uniform(ctx, monkeypatch):
    # condition on W_hat = 7, a network with 4 vertices
    monkeypatch.setattr("cubicplanar.sampling._models.draw_size_biased_w", lambda *_: 7)
    rng = make_rng(19)
    draws = 3500
    counts = np.zeros(7, dtype=int)
    for _ in range(draws):
        record = sample_size_biased(ctx, rng)
        assert record.size == 4
        counts[record.extra["marked_edge"]] += 1
    sigma = np.sqrt(draws * (1 / 7) * (6 / 7))
    assert np.all(np.abs(counts - draws / 7) < 3 * sigma)
    assert stats.chisquare(counts).pvalue > 1e-3


def test_associated_edges_of_k4_network():
    network = network_from_graph(k4(), (0, 1))
    assert network.associated_edges() == [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (None, 0), (1, None)]


def test_triangulation_n2_is_tetrahedron():
    keys = set()
    for seed in range(20):
        tri = sample_triangulation(2, make_rng(seed))
        tri.check()
        assert tri.num_vertices == 4
        assert list(tri.vertex_degrees()) == [3, 3, 3, 3]
        keys.add(rooted_map_key(tri))
    assert len(keys) == 1


def test_triangulation_n3_uniform_over_rooted_maps():
    rng = make_rng(16)
    keys = Counter(rooted_map_key(sample_triangulation(3, rng)) for _ in range(3000))
    assert len(keys) == 3
    assert all(850 < count < 1150 for count in keys.values())


def test_triangulation_n4_octahedron_frequency():
    rng = make_rng(17)
    draws = 4000
    octahedra = 0
    for _ in range(draws):
        tri = sample_triangulation(4, rng)
        octahedra += bool(np.all(tri.vertex_degrees() == 4))
    assert 0.05 < octahedra / draws < 0.11


def test_triangulation_n100_is_valid():
    tri = sample_triangulation(100, make_rng(18))
    tri.check()
    assert tri.is_simple
    assert tri.num_vertices == 102
    assert tri.num_faces == 200
    assert np.all(tri.face_degrees() == 3)
    assert tri.euler_characteristic == 2
    cubic = dual_map(tri)
    assert np.all(cubic.vertex_degrees() == 3)


def test_triangulation_rejects_small_n():
    with pytest.raises(InvalidMapError, match="n >= 2"):
        sample_triangulation(1, make_rng(0))


def test_uniform_3connected_graph():
    graph, root = sample_uniform_3connected(10, make_rng(19)).to_graph()
    assert graph.n == 20
    assert validate(graph).valid
    assert nx.node_connectivity(graph.to_simple_networkx()) == 3
    assert root[0] != root[1]


def test_sample_disconnected(ctx):
    rng = make_rng(20)
    for _ in range(20):
        record = sample_disconnected(ctx, 16, rng)
        graph = record.value
        assert record.size == graph.n == 16 == sum(record.extra["components"])
        assert all(size >= 4 for size in record.extra["components"])
        assert graph.is_cubic
        assert graph.is_simple
        assert nx.number_connected_components(graph.to_simple_networkx()) == len(record.extra["components"])


def test_o_model(ctx):
    record = sample_O_model(ctx, 20, make_rng(22))
    graph = record.value
    assert validate(graph).valid
    assert record.size == graph.n
    assert record.extra["core_size"] >= 4
    assert graph.n >= record.extra["core_size"]


def test_sample_record_invariants():
    with pytest.raises(ValueError, match="even"):
        SampleRecord(None, 3)
    with pytest.raises(ValueError, match="trials"):
        SampleRecord(None, 0, trials=0)


def test_context_round_trip(ctx, tmp_path):
    path = tmp_path / "ctx.pkl"
    ctx.dump(path)
    loaded = SamplerContext.load(path, cache=False)
    assert loaded.config == ctx.config
    assert loaded.table.order == ctx.table.order
    for symbol, cdf in ctx.branch_cdfs.items():
        assert np.array_equal(loaded.branch_cdfs[symbol], cdf)
