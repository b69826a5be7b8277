"""Experiment reports, neighbourhood censuses and their file formats.

A report directory holds one ``<experiment>.json`` (or one CSV file per
table) and a ``manifest.json`` with the parameters, seeds, the constants
snapshot and a content hash of the inputs. Histograms use the CSV columns
``bin_lo,bin_hi,count``.
"""

from __future__ import annotations

import csv
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Literal

import numpy as np

from cubicplanar._profile import ProfilingStats, format_profiling_stats
from cubicplanar._utils import content_hash, to_jsonable
from cubicplanar._version import __version__
from cubicplanar.graph import neighborhood_key

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence
    from pathlib import Path

    from cubicplanar.graph import CubicGraph

logger = logging.getLogger(__name__)

OutputFormat = Literal["json", "csv"]
HISTOGRAM_COLUMNS = ("bin_lo", "bin_hi", "count")


def histogram(values: Sequence[float] | np.ndarray, bins: int | Sequence[float] = 20) -> list[dict[str, float]]:
    """Rows ``{bin_lo, bin_hi, count}`` of a histogram of ``values``."""
    counts, edges = np.histogram(np.asarray(values, dtype=float), bins=bins)
    return [
        {"bin_lo": float(lo), "bin_hi": float(hi), "count": int(c)}
        for lo, hi, c in zip(edges[:-1], edges[1:], counts)
    ]


def total_variation(p: Mapping[Any, float], q: Mapping[Any, float]) -> float:
    """``sum |p - q| / 2`` over the union of the supports."""
    return 0.5 * sum(abs(p.get(key, 0.0) - q.get(key, 0.0)) for key in p.keys() | q.keys())


@dataclass(frozen=True)
class CensusTable:
    """Fraction of vertices of one graph per isomorphism type of their ``k``-ball.

    Keys are the digests of `cubicplanar.graph.neighborhood_key`.
    """

    n: int
    k: int
    sample: int
    frequencies: dict[str, float]

    def __post_init__(self) -> None:
        total = sum(self.frequencies.values())
        if self.frequencies and abs(total - 1.0) > 1e-9:  # noqa: PLR2004
            msg = f"Census frequencies must sum to 1, got {total}."
            raise ValueError(msg)

    @classmethod
    def from_graph(cls, graph: CubicGraph, k: int, *, sample: int = 0) -> CensusTable:
        """Count the ``k``-ball of every vertex of ``graph``."""
        counts = Counter(neighborhood_key(graph, v, k).hex() for v in graph.vertices)
        return cls(graph.n, k, sample, {key: c / graph.n for key, c in sorted(counts.items())})

    def to_rows(self) -> list[dict[str, Any]]:
        """One row per key, for the CSV output."""
        return [
            {"n": self.n, "k": self.k, "sample": self.sample, "key": key, "frequency": freq}
            for key, freq in self.frequencies.items()
        ]


def mean_census(tables: Iterable[CensusTable]) -> dict[str, float]:
    """Average frequencies over several censuses (missing keys count as 0)."""
    tables = list(tables)
    total: Counter[str] = Counter()
    for census in tables:
        total.update(census.frequencies)
    return {key: value / len(tables) for key, value in sorted(total.items())} if tables else {}


def census_spread(tables: Sequence[CensusTable]) -> dict[str, float]:
    """Sample standard deviation of every key's frequency across censuses."""
    keys = sorted({key for census in tables for key in census.frequencies})
    if len(tables) < 2:  # noqa: PLR2004
        return dict.fromkeys(keys, 0.0)
    values = np.array([[census.frequencies.get(key, 0.0) for key in keys] for census in tables])
    return dict(zip(keys, np.std(values, axis=0, ddof=1).tolist()))


@dataclass
class ExperimentReport:
    """Result of one experiment run.

    Attributes
    ----------
    experiment
        Experiment id (``core``, ``second``, ``census``, ``fragments``, ``components``).
    parameters
        The inputs: size grid, sample counts, seed, thread count, window.
    summary
        Summary statistics, one row per size (or a single row).
    tables
        Raw per-sample tables; every summary value is recomputable from them.
    histograms
        Histogram tables with rows ``{bin_lo, bin_hi, count}``.
    constants
        Snapshot of the singular constants used (`SingularData.to_dict`).
    runtime
        Wall time, average CPU and peak memory of the run.

    """

    experiment: str
    parameters: dict[str, Any]
    summary: list[dict[str, Any]]
    tables: dict[str, list[dict[str, Any]]] = field(default_factory=dict)
    histograms: dict[str, list[dict[str, Any]]] = field(default_factory=dict)
    constants: dict[str, Any] = field(default_factory=dict)
    runtime: dict[str, float] = field(default_factory=dict)
    profiling: ProfilingStats | None = field(default=None, repr=False, compare=False)

    @property
    def seed(self) -> int | None:
        return self.parameters.get("seed")

    def to_dict(self) -> dict[str, Any]:
        """The report as JSON-ready data."""
        return to_jsonable(
            {
                "experiment": self.experiment,
                "version": __version__,
                "parameters": self.parameters,
                "summary": self.summary,
                "tables": self.tables,
                "histograms": self.histograms,
                "constants": self.constants,
                "runtime": self.runtime,
            },
        )

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ExperimentReport:
        """Inverse of `to_dict` (without the profiler state)."""
        return cls(
            experiment=data["experiment"],
            parameters=dict(data["parameters"]),
            summary=list(data["summary"]),
            tables=dict(data.get("tables", {})),
            histograms=dict(data.get("histograms", {})),
            constants=dict(data.get("constants", {})),
            runtime=dict(data.get("runtime", {})),
        )

    def input_hash(self) -> str:
        """Hash of everything that determines the result: experiment, parameters and constants."""
        return content_hash(
            {"experiment": self.experiment, "parameters": self.parameters, "constants": self.constants},
        )

    def manifest(self, files: Sequence[str]) -> dict[str, Any]:
        return to_jsonable(
            {
                "experiment": self.experiment,
                "version": __version__,
                "parameters": self.parameters,
                "seed": self.seed,
                "constants": self.constants,
                "content_hash": self.input_hash(),
                "files": sorted(files),
            },
        )

    def write(self, out: Path, fmt: OutputFormat = "json") -> list[Path]:
        """Write the report into the directory ``out`` and return the written paths."""
        out.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []
        if fmt == "json":
            path = out / f"{self.experiment}.json"
            path.write_text(json.dumps(self.to_dict(), indent=2))
            written.append(path)
        elif fmt == "csv":
            written.append(write_csv(out / f"{self.experiment}_summary.csv", self.summary))
            for name, rows in self.tables.items():
                written.append(write_csv(out / f"{self.experiment}_{name}.csv", rows))
            for name, rows in self.histograms.items():
                path = out / f"{self.experiment}_hist_{name}.csv"
                written.append(write_csv(path, rows, HISTOGRAM_COLUMNS))
        else:
            msg = f"Unknown output format `{fmt}`, use 'json' or 'csv'."
            raise ValueError(msg)
        manifest = out / "manifest.json"
        manifest.write_text(json.dumps(self.manifest([p.name for p in written]), indent=2))
        written.append(manifest)
        logger.info("Wrote %d files for the `%s` experiment to %s.", len(written), self.experiment, out)
        return written

    def runtime_table(self) -> str:
        """Printable resource usage of the run."""
        if self.profiling is None:
            return "No profiling information."
        return format_profiling_stats({self.experiment: self.profiling})


def write_csv(path: Path, rows: Sequence[Mapping[str, Any]], columns: Sequence[str] | None = None) -> Path:
    if columns is None:
        columns = list(dict.fromkeys(key for row in rows for key in row))
    with path.open("w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(columns), extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(to_jsonable(dict(row)))
    return path
