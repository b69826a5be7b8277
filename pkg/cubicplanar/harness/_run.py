"""Run experiment tasks serially or on a process pool with reproducible random streams.

Task ``i`` always draws from ``make_rng(seed, i)``, so the results do not
depend on the number of workers. Workers read the sampler context from a
cloudpickle file instead of receiving it with every task.
"""

from __future__ import annotations

import functools
import logging
import os
import tempfile
from concurrent.futures import Executor, ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import asdict
from pathlib import Path
from typing import TYPE_CHECKING, Any

from cubicplanar._cache import DiskCache
from cubicplanar._profile import ProfilingStats, ResourceProfiler
from cubicplanar._utils import dump, handle_error
from cubicplanar.sampling import SamplerConfig, SamplerContext, make_rng

if TYPE_CHECKING:
    from collections.abc import Callable, Generator, Sequence

    from numpy.random import Generator as RandomGenerator

    Task = Callable[..., Any]

logger = logging.getLogger(__name__)


def cached_context(
    config: SamplerConfig | None = None,
    *,
    cache_dir: str | Path | None = None,
) -> tuple[SamplerContext, Path | None]:
    """The sampler context for ``config`` and the file it is stored in.

    With ``cache_dir`` the context is kept on disk between runs (keyed by
    the configuration); the returned path can be handed to `run_tasks`.
    """
    config = config or SamplerConfig()
    if cache_dir is None:
        return SamplerContext.create(config), None
    cache = DiskCache(cache_dir, max_size=4, prefix="context")
    key = asdict(config)
    if key in cache:
        logger.info("Loaded the sampler context from %s.", cache.path_of(key))
    ctx = cache.get_or_compute(key, lambda: SamplerContext.create(config))
    return ctx, cache.path_of(key)


def _run_task(
    func: Task,
    source: SamplerContext | Path,
    seed: int | None,
    index: int,
    task: dict[str, Any],
) -> Any:
    ctx = SamplerContext.load(source, cache=True) if isinstance(source, Path) else source
    rng: RandomGenerator = make_rng(seed, index)
    try:
        return func(ctx, rng, **task)
    except Exception as e:  # noqa: BLE001
        handle_error(e, func, task)


@contextmanager
def _maybe_executor(threads: int) -> Generator[Executor | None, None, None]:
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as executor:
            yield executor
    else:
        yield None


@contextmanager
def _context_file(ctx: SamplerContext, path: Path | None) -> Generator[Path, None, None]:
    if path is not None:
        yield path
        return
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "context.pkl"
        dump(ctx, path)
        yield path


def run_tasks(
    func: Task,
    tasks: Sequence[dict[str, Any]],
    ctx: SamplerContext,
    *,
    seed: int | None,
    threads: int = 1,
    context_path: Path | None = None,
    stats: ProfilingStats | None = None,
) -> list[Any]:
    """Evaluate ``func(ctx, rng, **task)`` for every task, in task order.

    Parameters
    ----------
    func
        A module-level function (it is pickled for the workers).
    tasks
        Keyword arguments per task; task ``i`` gets the stream ``make_rng(seed, i)``.
    ctx
        The sampler context.
    seed
        Root seed of all streams.
    threads
        Number of worker processes; 1 runs in the current process.
    context_path
        A cloudpickle file holding ``ctx`` (for example from `cached_context`);
        a temporary one is written when needed and not given.
    stats
        Receives the resource usage of the run.

    """
    if threads < 1:
        msg = f"threads must be at least 1, got {threads}."
        raise ValueError(msg)
    stats = stats if stats is not None else ProfilingStats()
    logger.info("Running %d tasks of `%s` on %d worker(s).", len(tasks), func.__name__, threads)
    with ResourceProfiler(os.getpid(), stats, tasks=len(tasks)):
        if threads == 1:
            return [_run_task(func, ctx, seed, i, dict(task)) for i, task in enumerate(tasks)]
        with _context_file(ctx, context_path) as path, _maybe_executor(threads) as executor:
            assert executor is not None
            run = functools.partial(_run_task, func, path, seed)
            return list(executor.map(run, range(len(tasks)), [dict(t) for t in tasks], chunksize=8))
