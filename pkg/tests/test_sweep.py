from __future__ import annotations

from itertools import product

import pytest

from cubicplanar.sweep import Sweep


def test_sweep_full_product():
    items = {"n": [1000, 2000], "sample": [0, 1], "window": [0.01]}
    expected = [dict(zip(items.keys(), res)) for res in product(*items.values())]
    sweep = Sweep(items)
    assert sweep.list() == expected
    assert len(sweep) == 4
    assert list(sweep) == expected


def test_sweep_with_dims_zipped():
    items = {"n": [1000, 2000], "window": [0.01, 0.02], "sample": [0, 1]}
    sweep = Sweep(items, dims=[("n", "window"), "sample"])
    assert sweep.list() == [
        {"n": 1000, "window": 0.01, "sample": 0},
        {"n": 1000, "window": 0.01, "sample": 1},
        {"n": 2000, "window": 0.02, "sample": 0},
        {"n": 2000, "window": 0.02, "sample": 1},
    ]
    assert len(sweep) == 4


def test_sweep_unlisted_dims_form_a_product():
    items = {"n": [4, 6], "k": [1, 2]}
    assert Sweep(items, dims=["n"]).list() == Sweep(items).list()


def test_sweep_errors():
    with pytest.raises(ValueError, match="are not among the sweep items"):
        Sweep({"n": [1]}, dims=[("n", "k")])
    sweep = Sweep({"n": [1, 2], "window": [0.1]}, dims=[("n", "window")])
    with pytest.raises(ValueError, match="different lengths"):
        sweep.list()


def test_sweep_with_exclude():
    sweep = Sweep({"n": [4, 6, 8], "k": [0, 1]}, exclude=lambda c: c["n"] == 6)
    assert sweep.list() == [
        {"n": 4, "k": 0},
        {"n": 4, "k": 1},
        {"n": 8, "k": 0},
        {"n": 8, "k": 1},
    ]
    assert len(sweep) == 4


def test_sweep_constants_and_derivers():
    sweep = Sweep({"n": [10, 20]}, constants={"seed": 7, "n": 0})
    sweep = sweep.add_derivers(table_order=lambda c: 2 * c["n"])
    assert sweep.list() == [
        {"n": 10, "seed": 7, "table_order": 20},
        {"n": 20, "seed": 7, "table_order": 40},
    ]


def test_empty_sweep():
    sweep = Sweep({})
    assert sweep.list() == []
    assert len(sweep) == 0


def test_sweep_product():
    sizes = Sweep({"n": [1000, 2000]}, constants={"window": 0.01})
    samples = Sweep({"sample": range(3)}, exclude=lambda c: c["sample"] == 2)
    combined = sizes.product(samples)
    assert combined.list() == [
        {"n": 1000, "sample": 0, "window": 0.01},
        {"n": 1000, "sample": 1, "window": 0.01},
        {"n": 2000, "sample": 0, "window": 0.01},
        {"n": 2000, "sample": 1, "window": 0.01},
    ]
    with pytest.raises(ValueError, match="Both sweeps define"):
        sizes.product(Sweep({"n": [1]}))
    with pytest.raises(TypeError, match="must be Sweep instances"):
        sizes.product({"k": [1]})
