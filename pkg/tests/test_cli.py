from __future__ import annotations

import json
import math

import pytest

from cubicplanar import __version__
from cubicplanar.cli import EXACT_WINDOW, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, _sample_window, build_parser, main
from cubicplanar.graph import read_graph, write_graph
from tests.helpers import k4, prism


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_version(capsys):
    assert main(["--version"]) == EXIT_OK
    assert __version__ in capsys.readouterr().out


@pytest.mark.parametrize("argv", [[], ["bogus"], ["enumerate"], ["sample", "--model", "nope"]])
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert "usage:" in capsys.readouterr().err


def test_constants(capsys):
    assert main(["constants", "--digits", "20"]) == EXIT_OK
    data = _json(capsys)
    assert data["rho"].startswith("0.31922460619545")
    assert data["kappa"].startswith("0.85085309005831")
    assert data["precision"] == 20


def test_constants_global_digits(capsys):
    assert main(["--digits", "15", "constants"]) == EXIT_OK
    assert _json(capsys)["precision"] == 15


def test_coeffs(capsys):
    assert main(["coeffs", "--order", "8", "--classes", "D", "Cdot"]) == EXIT_OK
    data = _json(capsys)
    rows = {(row["class"], row["n"]): row for row in data["coefficients"]}
    assert rows[("D", 4)]["labelled"] == 12
    assert rows[("Cdot", 6)]["labelled"] == 360
    assert rows[("D", 4)]["coefficient"] == "1/2"


def test_airy(capsys):
    assert main(["airy", "--eval", "0", "1.5"]) == EXIT_OK
    data = _json(capsys)
    assert [row["t"] for row in data["values"]] == [0.0, 1.5]
    h0 = 3 ** (2 / 3) * math.gamma(5 / 3) * math.sqrt(3) / (2 * math.pi)
    assert data["values"][0]["density"] == pytest.approx(h0, rel=1e-10)
    assert 0 < data["values"][0]["cdf"] < data["values"][1]["cdf"] <= 1


def test_enumerate(capsys):
    assert main(["enumerate", "--n", "6"]) == EXIT_OK
    (row,) = _json(capsys)["summary"]
    assert row["labelled"] == 60
    assert row["unlabelled"] == 1
    assert row["automorphisms"] == [12]


def test_enumerate_out_of_range(capsys):
    assert main(["enumerate", "--n", "12"]) == EXIT_RUNTIME
    assert "supports n in" in capsys.readouterr().err


def test_enumerate_networks_csv(tmp_path, capsys):
    argv = ["--out", str(tmp_path), "--format", "csv", "enumerate", "--n", "4", "--networks"]
    assert main(argv) == EXIT_OK
    lines = (tmp_path / "enumerate_summary.csv").read_text().splitlines()
    assert lines[0] == "n,class,labelled"
    assert "4,H,12" in lines
    assert "4,D,12" in lines
    assert (tmp_path / "manifest.json").exists()
    assert str(tmp_path / "manifest.json") in capsys.readouterr().out


def test_decompose_and_core(tmp_path, capsys):
    path = tmp_path / "k4.txt"
    write_graph(path, k4(), (0, 1))
    assert main(["decompose", "--input", str(path)]) == EXIT_OK
    data = _json(capsys)
    assert data["class"] == "H"
    assert data["core_sizes"] == [4]
    write_graph(path, prism())
    assert main(["core", "--input", str(path)]) == EXIT_OK
    data = _json(capsys)
    assert [c["size"] for c in data["components"]] == [6]


def test_missing_input_is_a_runtime_error(tmp_path, capsys):
    assert main(["core", "--input", str(tmp_path / "missing.txt")]) == EXIT_RUNTIME
    assert "error:" in capsys.readouterr().err


def test_sample_triangulations(capsys):
    assert main(["--seed", "3", "sample", "--model", "tri", "--n", "5", "--count", "2"]) == EXIT_OK
    data = _json(capsys)
    assert [s["size"] for s in data["samples"]] == [7, 7]
    assert [s["faces"] for s in data["samples"]] == [10, 10]
    assert data["samples"][1]["seed"] == [3, 1]
    assert main(["--seed", "3", "sample", "--model", "triangulation", "--n", "5", "--count", "2"]) == EXIT_OK
    assert _json(capsys)["samples"] == data["samples"]


def test_sample_connected(tmp_path, capsys):
    argv = ["--seed", "1", "--table-order", "40", "--digits", "15", "sample", "--n", "10", "--count", "2"]
    assert main(argv) == EXIT_OK
    samples = _json(capsys)["samples"]
    assert [s["size"] for s in samples] == [10, 10]
    assert all(len(s["edges"]) == 15 for s in samples)
    assert main(argv) == EXIT_OK
    assert _json(capsys)["samples"] == samples


SMALL_CONTEXT = ["--seed", "2", "--table-order", "120", "--digits", "15"]


@pytest.mark.parametrize(
    ("model", "n", "check"),
    [
        ("D", 10, lambda s: s["size"] % 2 == 0),
        ("Dhat", 10, lambda s: 0 <= s["marked_edge"] < s["w_hat"]),
        ("C", 12, lambda s: s["size"] == 12 and len(s["edges"]) == 18),
        ("O", 20, lambda s: s["size"] >= s["core_size"] >= 4),
        ("3conn", 8, lambda s: s["size"] == 8 and len(s["edges"]) == 12),
        ("network", 8, lambda s: s["size"] == 8 and s["root"] is not None),
    ],
)
def test_sample_models(model, n, check, capsys):
    argv = [*SMALL_CONTEXT, "sample", "--model", model, "--n", str(n), "--count", "3"]
    assert main(argv) == EXIT_OK
    data = _json(capsys)
    assert data["model"] == model
    assert len(data["samples"]) == 3
    assert all(check(sample) for sample in data["samples"])


def test_sample_writes_graph_files(tmp_path, capsys):
    argv = ["sample", "--model", "C", "--n", "10", "--count", "3", "--seed", "4", "--out", str(tmp_path)]
    assert main(["--table-order", "40", "--digits", "15", *argv]) == EXIT_OK
    assert str(tmp_path / "manifest.json") in capsys.readouterr().out
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["seed"] == 4
    assert [s["seed"] for s in manifest["samples"]] == [[4, 0], [4, 1], [4, 2]]
    for sample in manifest["samples"]:
        assert sample["trials"] >= 1
        graph, root = read_graph(tmp_path / sample["file"])
        assert graph.n == sample["size"] == 10
        assert graph.is_cubic
        assert root is not None


def test_sample_csv_and_empty_networks(tmp_path, capsys):
    argv = [*SMALL_CONTEXT, "sample", "--model", "D", "--count", "20", "--out", str(tmp_path), "--format", "csv"]
    assert main(argv) == EXIT_OK
    capsys.readouterr()
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    empty = [s for s in manifest["samples"] if s["size"] == 0]
    assert empty  # P(Y = 0) is about 0.99
    assert all(s["file"] is None for s in empty)
    assert (tmp_path / "samples.csv").read_text().startswith("index,seed,size,trials")


def test_large_exact_sizes_get_a_window(caplog):
    args = build_parser().parse_args(["sample", "--n", "1000"])
    assert _sample_window(args) == EXACT_WINDOW
    assert "--force-exact" in caplog.text
    args = build_parser().parse_args(["sample", "--n", "1000", "--force-exact"])
    assert _sample_window(args) == 0.0
    args = build_parser().parse_args(["sample", "--n", "1000", "--window", "0.05"])
    assert _sample_window(args) == 0.05
    args = build_parser().parse_args(["sample", "--model", "O", "--n", "1000"])
    assert _sample_window(args) == 0.0


def test_options_after_the_command(tmp_path, capsys):
    assert main(["constants", "--digits", "20", "--format", "json"]) == EXIT_OK
    assert _json(capsys)["precision"] == 20
    argv = ["coeffs", "--class", "D", "--order", "6", "--format", "csv", "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    lines = (tmp_path / "coeffs.csv").read_text().splitlines()
    assert lines[0] == "n,class,coefficient,labelled"
    assert "4,D,1/2,12" in lines
    # the top-level value is kept when the command does not repeat it
    assert main(["--format", "csv", "--out", str(tmp_path / "top"), "constants", "--digits", "15"]) == EXIT_OK
    assert (tmp_path / "top" / "constants.csv").exists()


def test_airy_table(capsys):
    assert main(["airy", "--table", "-1", "1", "0.5", "--format", "json"]) == EXIT_OK
    values = _json(capsys)["values"]
    assert [row["t"] for row in values] == [-1.0, -0.5, 0.0, 0.5, 1.0]
    cdfs = [row["cdf"] for row in values]
    assert cdfs == sorted(cdfs)
    assert main(["airy", "--table", "1", "0", "0.5"]) == EXIT_RUNTIME


def test_decompose_in_flag(tmp_path, capsys):
    path = tmp_path / "k4.txt"
    write_graph(path, k4(), (0, 1))
    assert main(["decompose", "--in", str(path), "--format", "json"]) == EXIT_OK
    assert _json(capsys)["class"] == "H"
