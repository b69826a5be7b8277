from __future__ import annotations

import functools
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Any

import cloudpickle
import mpmath
import numpy as np

if TYPE_CHECKING:
    from collections.abc import Callable


def at_least_tuple(x: Any) -> tuple[Any, ...]:
    """Convert x to a tuple if it is not already a tuple."""
    return x if isinstance(x, tuple) else (x,)


def load(path: Path, *, cache: bool = False) -> Any:
    """Load a cloudpickled object from a path.

    If ``cache`` is ``True``, the object is kept in memory and reused for as
    long as the file is unchanged (same modification time, size and inode).
    """
    if cache:
        return _cached_load(_get_cache_key(path))
    with path.open("rb") as f:
        return cloudpickle.load(f)


def dump(obj: Any, path: Path) -> None:
    """Dump an object to a path using cloudpickle."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as f:
        cloudpickle.dump(obj, f)


def _get_cache_key(path: Path) -> tuple[str, int, int, int]:
    # the inode changes when a file is atomically replaced
    resolved_path = path.resolve()
    stats = resolved_path.stat()
    return (str(resolved_path), stats.st_mtime_ns, stats.st_size, stats.st_ino)


@functools.lru_cache(maxsize=16)
def _cached_load(cache_key: tuple[str, int, int, int]) -> Any:
    return load(Path(cache_key[0]), cache=False)


def to_jsonable(obj: Any) -> Any:  # noqa: PLR0911
    """Convert numbers and containers from numpy, mpmath and fractions to JSON types.

    Rationals become ``"p/q"`` strings and high precision floats become
    decimal strings so no digits are lost.
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, mpmath.mpf):
        return mpmath.nstr(obj, mpmath.mp.dps, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def content_hash(obj: Any) -> str:
    """SHA-256 of the canonical JSON encoding of ``obj``."""
    encoded = json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(encoded.encode()).hexdigest()


def handle_error(e: Exception, func: Callable, task: dict[str, Any]) -> None:
    """Re-raise ``e`` with a note naming the task it occurred in."""
    call = ", ".join(f"{k}={v!r}" for k, v in task.items())
    msg = f"Error occurred while executing `{func.__name__}({call})`."
    if sys.version_info < (3, 11):  # pragma: no cover
        raise type(e)(f"{e.args[0] if e.args else ''} {msg}") from e
    e.add_note(msg)
    raise e


def _format_table_row(row: list[str], widths: list[int], separator: str = " | ") -> str:
    return separator.join(f"{cell!s:<{widths[i]}}" for i, cell in enumerate(row))


def table(rows: list[Any], headers: list[str]) -> str:
    """Create a printable table from a list of rows and headers."""
    column_widths = [len(header) for header in headers]
    for row in rows:
        for i, x in enumerate(row):
            column_widths[i] = max(column_widths[i], len(str(x)))

    separator_line = [w * "-" for w in column_widths]
    table_rows = [
        _format_table_row(separator_line, column_widths, separator="-+-"),
        _format_table_row(headers, column_widths),
        _format_table_row(["-" * width for width in column_widths], column_widths),
    ]
    table_rows.extend(_format_table_row(row, column_widths) for row in rows)
    table_rows.append(_format_table_row(separator_line, column_widths, separator="-+-"))
    return "\n".join(table_rows)
