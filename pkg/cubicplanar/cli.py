"""Command line interface: ``cubicplanar <command> [options]``.

Exit codes are 0 on success, 1 for usage errors and 2 for errors raised
while running a command.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any, NoReturn

import numpy as np

from cubicplanar._utils import to_jsonable
from cubicplanar._version import __version__
from cubicplanar.airy import AiryEval, airy_density_closed_form
from cubicplanar.graph import (
    CLASS_TAGS,
    Network,
    decompose,
    network_from_graph,
    read_graph,
    three_connected_components,
    write_graph,
)
from cubicplanar.harness import (
    ExperimentReport,
    cached_context,
    count_cubic_planar,
    count_networks,
    enumerate_cubic_planar,
    run_census,
    run_components_experiment,
    run_core_experiment,
    run_fragments,
    run_second_largest,
    unlabelled_cubic_planar,
)
from cubicplanar.harness._enumerate import MAX_NETWORK_VERTICES
from cubicplanar.harness._report import write_csv
from cubicplanar.sampling import (
    SAMPLEABLE_CLASSES,
    SamplerConfig,
    SamplerContext,
    make_rng,
    sample_boltzmann_network,
    sample_connected_cubic,
    sample_disconnected,
    sample_network,
    sample_O_model,
    sample_size_biased,
    sample_triangulation,
    sample_uniform_3connected,
    stream_id,
)
from cubicplanar.series import NETWORK_CLASSES, solve_grammar, solve_singular_constants

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from cubicplanar.graph import CubicGraph

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

EXPERIMENTS = ("core", "second", "census", "fragments", "components")
SAMPLE_MODELS = ("D", "Dhat", "C", "O", "tri", "3conn", "disconnected", "network")
MODEL_ALIASES = {"boltzmann": "D", "connected": "C", "triangulation": "tri"}
WINDOWED_MODELS = frozenset({"C", "disconnected", "network"})
EXACT_SIZE_LIMIT = 500
EXACT_WINDOW = 0.01


class _Parser(argparse.ArgumentParser):
    """Argument parser that prints the help and exits with code 1 on usage errors."""

    def error(self, message: str) -> NoReturn:
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args: argparse.Namespace, name: str, payload: Any, rows: list[dict[str, Any]] | None = None) -> None:
    """Print ``payload`` as JSON, or write it below ``--out`` (rows as CSV with ``--format csv``)."""
    if args.out is None:
        print(json.dumps(to_jsonable(payload), indent=2))
        return
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.format == "csv" and rows is not None:
        path = write_csv(out / f"{name}.csv", rows)
    else:
        path = out / f"{name}.json"
        path.write_text(json.dumps(to_jsonable(payload), indent=2))
    print(path)


def _emit_report(args: argparse.Namespace, report: ExperimentReport) -> None:
    if args.out is None:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        for path in report.write(Path(args.out), args.format):
            print(path)
    logger.info("\n%s", report.runtime_table())


def _table_order(n_max: int, window: float, requested: int | None) -> int:
    if requested is not None:
        return requested
    order = math.ceil(n_max * (1 + window)) + 2
    return max(120, order + order % 2)


def _context(args: argparse.Namespace, n_max: int, window: float = 0.0) -> tuple[SamplerContext, Path | None]:
    config = SamplerConfig(table_order=_table_order(n_max, window, args.table_order), precision=args.digits)
    return cached_context(config, cache_dir=args.cache_dir)


def cmd_coeffs(args: argparse.Namespace) -> None:
    table = solve_grammar(args.order, args.mode)
    classes = args.classes or list(NETWORK_CLASSES)
    rows = []
    for n in range(0, args.order + 1, 2):
        for name in classes:
            row: dict[str, Any] = {"n": n, "class": name, "coefficient": table.coefficient(name, n)}
            if args.mode == "exact":
                row["labelled"] = table.labelled_count(name, n)
            rows.append(row)
    _emit(args, "coeffs", {"order": args.order, "mode": args.mode, "coefficients": rows}, rows)


def cmd_constants(args: argparse.Namespace) -> None:
    constants = solve_singular_constants(args.digits)
    _emit(args, "constants", constants.to_dict(), [constants.to_dict()])


def _airy_points(args: argparse.Namespace) -> list[float]:
    if args.t:
        return list(args.t)
    if args.table is None:
        return np.linspace(args.lo, args.hi, args.points).tolist()
    t_min, t_max, step = args.table
    if step <= 0 or t_max < t_min:
        msg = f"--table needs TMIN <= TMAX and STEP > 0, got {t_min} {t_max} {step}."
        raise ValueError(msg)
    count = math.floor((t_max - t_min) / step + 1e-9) + 1
    return (t_min + step * np.arange(count)).tolist()


def cmd_airy(args: argparse.Namespace) -> None:
    evaluator = AiryEval(terms=args.terms)
    rows = []
    for t in _airy_points(args):
        inside = abs(t) <= evaluator.t_switch
        rows.append(
            {
                "t": t,
                "density": evaluator.density(t) if inside else float(airy_density_closed_form(t)[0]),
                "cdf": float(evaluator.cdf_array(t)[0]),
            },
        )
    payload = {"terms": args.terms, "total_mass": evaluator.total_mass, "values": rows}
    _emit(args, "airy", payload, rows)


def _sample_window(args: argparse.Namespace) -> float:
    """``--window``, raised to `EXACT_WINDOW` for large exact sizes unless ``--force-exact``."""
    if (
        args.model in WINDOWED_MODELS
        and args.n > EXACT_SIZE_LIMIT
        and args.window < EXACT_WINDOW
        and not args.force_exact
    ):
        logger.warning(
            "Using window %.2f for n=%d > %d; pass --force-exact to keep %g.",
            EXACT_WINDOW,
            args.n,
            EXACT_SIZE_LIMIT,
            args.window,
        )
        return EXACT_WINDOW
    return args.window


def _draw(
    args: argparse.Namespace,
    model: str,
    ctx: SamplerContext | None,
    window: float,
    rng: np.random.Generator,
) -> tuple[CubicGraph | None, tuple[int, int] | None, dict[str, Any]]:
    """One sample of ``model`` as ``(graph, root, annotations)``; the graph is ``None`` when empty."""
    if model in {"tri", "3conn"}:
        if model == "3conn" and args.n % 2:
            msg = f"3-connected cubic maps have an even number of vertices, got {args.n}."
            raise ValueError(msg)
        planar = sample_triangulation(args.n, rng) if model == "tri" else sample_uniform_3connected(args.n // 2, rng)
        graph, root = planar.to_graph()
        return graph, root, {"size": graph.n, "trials": 1, "faces": planar.num_faces}
    assert ctx is not None
    if model == "D":
        record = sample_boltzmann_network(ctx, rng)
    elif model == "Dhat":
        record = sample_size_biased(ctx, rng)
    elif model == "C":
        record = sample_connected_cubic(ctx, args.n, rng, window=window, method=args.method)
    elif model == "disconnected":
        record = sample_disconnected(ctx, args.n, rng, window=window)
    elif model == "O":
        record = sample_O_model(ctx, args.n, rng)
    else:
        record = sample_network(ctx, args.cls, args.n, rng, window=window)
    value = record.value
    if value is None:
        graph, root = None, None
    elif isinstance(value, Network):
        graph, root = value.graph, value.poles
    else:
        graph, root = value, record.extra.get("root")
    extra = {k: v for k, v in record.extra.items() if k != "root"}
    return graph, root, {"size": record.size, "trials": record.trials, **extra}


def cmd_sample(args: argparse.Namespace) -> None:
    model = MODEL_ALIASES.get(args.model, args.model)
    window = _sample_window(args)
    ctx = None if model in {"tri", "3conn"} else _context(args, args.n, window)[0]
    out = None if args.out is None else Path(args.out)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    entries = []
    for i in range(args.count):
        rng = make_rng(args.seed, i)
        entry: dict[str, Any] = {"index": i, "seed": [args.seed, i], "stream": stream_id(rng)}
        graph, root, annotations = _draw(args, model, ctx, window, rng)
        entry.update(annotations)
        entry["root"] = root
        if out is None:
            entry["edges"] = [] if graph is None else list(graph.edges)
        elif graph is None:
            entry["file"] = None
        else:
            path = out / f"sample_{i:04d}.txt"
            write_graph(path, graph, root)
            entry["file"] = path.name
        entries.append(entry)
    manifest = {
        "model": model,
        "n": args.n,
        "window": window,
        "count": args.count,
        "seed": args.seed,
        "convention": "core edges in canonical order; associated edges off the root in label order, then the host links",
        "samples": entries,
    }
    if out is None:
        print(json.dumps(to_jsonable(manifest), indent=2))
        return
    path = out / "manifest.json"
    path.write_text(json.dumps(to_jsonable(manifest), indent=2))
    print(path)
    if args.format == "csv":
        print(write_csv(out / "samples.csv", [{k: v for k, v in e.items() if k != "stream"} for e in entries]))


def cmd_decompose(args: argparse.Namespace) -> None:
    graph, root = read_graph(args.input)
    network = network_from_graph(graph, root)
    tree = decompose(network)
    payload = {"class": tree.class_tag, "core_sizes": tree.core_sizes(), "tree": tree.to_dict()}
    _emit(args, "decompose", payload, [{"class": tree.class_tag, "core_sizes": tree.core_sizes()}])


def cmd_core(args: argparse.Namespace) -> None:
    graph, _ = read_graph(args.input)
    cores = three_connected_components(graph)
    rows = [{"index": i, "size": core.n, "vertices": list(core.vertices)} for i, core in enumerate(cores)]
    _emit(args, "core", {"n": graph.n, "components": rows}, rows)


def cmd_enumerate(args: argparse.Namespace) -> None:
    if args.networks:
        if args.n > MAX_NETWORK_VERTICES:
            msg = f"Network enumeration supports n <= {MAX_NETWORK_VERTICES}."
            raise ValueError(msg)
        counts = count_networks(args.n)
        rows = [{"n": args.n, "class": tag, "labelled": counts[tag]} for tag in (*CLASS_TAGS, "D")]
    else:
        classes = unlabelled_cubic_planar(args.n)
        labelled = len(enumerate_cubic_planar(args.n)) if args.labelled else count_cubic_planar(args.n)
        rows = [
            {
                "n": args.n,
                "labelled": labelled,
                "unlabelled": len(classes),
                "automorphisms": [aut for _, aut in classes],
            },
        ]
    report = ExperimentReport(
        experiment="enumerate",
        parameters={"n": args.n, "networks": args.networks, "seed": args.seed},
        summary=rows,
    )
    _emit_report(args, report)


def cmd_experiment(args: argparse.Namespace) -> None:
    ns = args.n or [1000]
    window = args.window if args.window is not None else (0.01 if max(ns) > 500 else 0.0)  # noqa: PLR2004
    ctx, path = _context(args, max(ns), window)
    common = {"seed": args.seed, "threads": args.threads, "context_path": path}
    runners: dict[str, Callable[[], ExperimentReport]] = {
        "core": lambda: run_core_experiment(ctx, ns, args.samples, window=window, **common),
        "second": lambda: run_second_largest(ctx, ns, args.samples, window=window, **common),
        "census": lambda: run_census(ctx, ns, args.k, args.samples, **common),
        "fragments": lambda: run_fragments(ctx, max(ns), args.samples, window=window, **common),
        "components": lambda: run_components_experiment(ctx, max(ns), args.samples, window=window or 0.05, **common),
    }
    _emit_report(args, runners[args.name]())


def build_parser() -> argparse.ArgumentParser:
    """The argument parser of the ``cubicplanar`` command."""
    parser = _Parser(prog="cubicplanar", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--seed", type=int, default=0, help="Root seed of all random streams.")
    parser.add_argument("--threads", type=int, default=1, help="Worker processes for experiments.")
    parser.add_argument("--out", default=None, help="Output directory (default: print JSON).")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--digits", type=int, default=30, help="Decimal digits of the singular constants.")
    parser.add_argument("--table-order", type=int, default=None, help="Grammar table order for samplers.")
    parser.add_argument("--cache-dir", default=None, help="Keep sampler contexts on disk here.")
    parser.add_argument("-v", "--verbose", action="count", default=0)

    # the global options again, so they may also follow the command
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    shared.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    shared.add_argument("--out", default=argparse.SUPPRESS)
    shared.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    shared.add_argument("--digits", type=int, default=argparse.SUPPRESS)
    shared.add_argument("--table-order", type=int, default=argparse.SUPPRESS)
    shared.add_argument("--cache-dir", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help_, parents=[shared])

    p = add("coeffs", "Coefficients of the network grammar.")
    p.add_argument("--order", type=int, default=20)
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p.add_argument("--classes", "--class", nargs="*", choices=NETWORK_CLASSES)
    p.set_defaults(func=cmd_coeffs)

    p = add("constants", "The singular constants.")
    p.set_defaults(func=cmd_constants)

    p = add("airy", "Map-Airy density and CDF.")
    p.add_argument("--t", "--eval", dest="t", type=float, nargs="*", help="Points to evaluate.")
    p.add_argument("--table", type=float, nargs=3, metavar=("TMIN", "TMAX", "STEP"), help="Evenly spaced points.")
    p.add_argument("--lo", type=float, default=-3.0)
    p.add_argument("--hi", type=float, default=3.0)
    p.add_argument("--points", type=int, default=13)
    p.add_argument("--terms", type=int, default=4000)
    p.set_defaults(func=cmd_airy)

    p = add("sample", "Random graphs, networks and maps; with --out one graph file per sample.")
    p.add_argument("--model", choices=(*SAMPLE_MODELS, *MODEL_ALIASES), default="C")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--window", type=float, default=0.0)
    p.add_argument(
        "--force-exact",
        action="store_true",
        help=f"Keep --window below {EXACT_WINDOW} for n > {EXACT_SIZE_LIMIT}.",
    )
    p.add_argument("--method", choices=("recursive", "rejection"), default="recursive")
    p.add_argument("--class", dest="cls", choices=SAMPLEABLE_CLASSES, default="D", help="Class of --model network.")
    p.set_defaults(func=cmd_sample)

    p = add("decompose", "Decomposition tree of a rooted graph file.")
    p.add_argument("--in", "--input", dest="input", required=True)
    p.set_defaults(func=cmd_decompose)

    p = add("core", "3-connected components of a graph file.")
    p.add_argument("--in", "--input", dest="input", required=True)
    p.set_defaults(func=cmd_core)

    p = add("enumerate", "Exhaustive counts for small sizes.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--networks", action="store_true", help="Count labelled networks per class.")
    p.add_argument("--labelled", action="store_true", help="Count by listing all labelled graphs.")
    p.set_defaults(func=cmd_enumerate)

    p = add("experiment", "Run an experiment and write a report.")
    p.add_argument("--name", choices=EXPERIMENTS, required=True)
    p.add_argument("--n", type=int, nargs="*")
    p.add_argument("--samples", type=int, default=300)
    p.add_argument("--window", type=float, default=None)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line interface and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    logging.basicConfig(
        level=max(logging.DEBUG, logging.WARNING - 10 * args.verbose),
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )
    try:
        args.func(args)
    except (ValueError, OSError) as e:
        logger.error("%s: %s", type(e).__name__, e)  # noqa: TRY400
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK
