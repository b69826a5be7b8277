"""Reading and writing graphs.

Text format::

    n m [root_u root_v]
    u v
    ...

with 0-based labels and loops written as ``u u``. The JSON form gives
every edge an explicit id so parallel edges stay distinguishable.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import TYPE_CHECKING, Any

from cubicplanar.exceptions import InvalidGraphError
from cubicplanar.graph._types import CubicGraph

if TYPE_CHECKING:
    from cubicplanar.graph._types import Edge


def parse_graph(text: str) -> tuple[CubicGraph, Edge | None]:
    """Parse the text format; returns the graph and the optional root edge."""
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not rows:
        msg = "Empty graph file."
        raise InvalidGraphError(msg)
    header, *body = rows
    try:
        numbers = [int(x) for x in header]
        edges = [(int(u), int(v)) for u, v in body]
    except ValueError as e:
        msg = f"Malformed graph text: {e}"
        raise InvalidGraphError(msg) from e
    if len(numbers) not in (2, 4):
        msg = f"The header must read `n m [root_u root_v]`, got {header}."
        raise InvalidGraphError(msg)
    n, m = numbers[:2]
    if len(edges) != m:
        msg = f"The header announces {m} edges but {len(edges)} follow."
        raise InvalidGraphError(msg)
    if any(not (0 <= x < n) for e in edges for x in e):
        msg = f"Edge labels must lie in 0..{n - 1}."
        raise InvalidGraphError(msg)
    root = (numbers[2], numbers[3]) if len(numbers) == 4 else None  # noqa: PLR2004
    return CubicGraph.from_edges(edges, vertices=range(n)), root


def format_graph(graph: CubicGraph, root: Edge | None = None) -> str:
    """Render ``graph`` in the text format, relabelling vertices to ``0..n-1`` by label order."""
    index = {v: i for i, v in enumerate(sorted(graph.vertices))}
    header = [graph.n, graph.m]
    if root is not None:
        header += [index[root[0]], index[root[1]]]
    lines = [" ".join(map(str, header))]
    lines.extend(f"{index[u]} {index[v]}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"


def read_graph(path: str | Path) -> tuple[CubicGraph, Edge | None]:
    """Read a graph file, see `parse_graph`."""
    return parse_graph(Path(path).read_text())


def write_graph(path: str | Path, graph: CubicGraph, root: Edge | None = None) -> None:
    """Write ``graph`` (and optionally a root edge) in the text format."""
    Path(path).write_text(format_graph(graph, root))


def to_dict(graph: CubicGraph, root: Edge | None = None) -> dict[str, Any]:
    """JSON-ready form with explicit edge ids."""
    data: dict[str, Any] = {
        "n": graph.n,
        "vertices": list(graph.vertices),
        "edges": [{"id": i, "u": u, "v": v} for i, (u, v) in enumerate(graph.edges)],
    }
    if root is not None:
        data["root"] = list(root)
    if graph.embedding is not None:
        data["embedding"] = {str(v): list(rot) for v, rot in graph.embedding.items()}
    return data


def from_dict(data: dict[str, Any]) -> tuple[CubicGraph, Edge | None]:
    """Inverse of `to_dict`."""
    edges = [(e["u"], e["v"]) for e in sorted(data["edges"], key=lambda e: e["id"])]
    graph = CubicGraph.from_edges(edges, vertices=data["vertices"])
    if "embedding" in data:
        graph = graph.with_embedding({int(v): tuple(rot) for v, rot in data["embedding"].items()})
    root = tuple(data["root"]) if "root" in data else None
    return graph, root  # type: ignore[return-value]


def dumps(graph: CubicGraph, root: Edge | None = None) -> str:
    """`to_dict` serialised to a JSON string."""
    return json.dumps(to_dict(graph, root))


def loads(text: str) -> tuple[CubicGraph, Edge | None]:
    """Inverse of `dumps`."""
    return from_dict(json.loads(text))
