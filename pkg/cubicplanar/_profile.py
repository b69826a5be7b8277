"""Resource usage of experiment runs.

Experiment tasks run in worker processes, so a measurement adds up the
resident memory and CPU load of the profiled process and all of its
children alive at that moment.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from cubicplanar._utils import table

if TYPE_CHECKING:
    import sys
    from types import TracebackType

    import psutil

    if sys.version_info >= (3, 11):
        from typing import Self
    else:
        from typing import Any as Self

_MB = 1024 * 1024


@dataclass
class ResourceStats:
    """Running mean, variance (Welford) and maximum of a measured quantity."""

    num_executions: int = 0
    average: float = 0.0
    variance: float = 0.0
    max: float = 0.0

    def update(self, value: float) -> None:
        """Add one measurement."""
        self.num_executions += 1
        delta = value - self.average
        self.average += delta / self.num_executions
        self.variance += delta * (value - self.average)
        self.max = max(self.max, value)

    @property
    def total(self) -> float:
        return self.average * self.num_executions

    @property
    def std(self) -> float:
        """Sample standard deviation of the measurements."""
        if self.num_executions < 2:  # noqa: PLR2004
            return 0.0
        return (self.variance / (self.num_executions - 1)) ** 0.5


@dataclass(frozen=True, slots=True)
class ProfilingStats:
    """Accumulated usage of every `run_tasks` call of one experiment.

    ``time`` and ``tasks`` get one entry per call, ``cpu`` and ``memory`` one
    per measurement.
    """

    cpu: ResourceStats = field(default_factory=ResourceStats)
    memory: ResourceStats = field(default_factory=ResourceStats)
    time: ResourceStats = field(default_factory=ResourceStats)
    tasks: ResourceStats = field(default_factory=ResourceStats)

    def as_dict(self) -> dict[str, float]:
        """Summary stored in the ``runtime`` section of a report."""
        wall = self.time.total
        tasks = round(self.tasks.total)
        return {
            "wall_time_s": wall,
            "avg_cpu_percent": self.cpu.average,
            "max_memory_mb": self.memory.max / _MB,
            "tasks": tasks,
            "tasks_per_s": tasks / wall if wall > 0 else 0.0,
        }


class ResourceProfiler:
    """Context manager that samples a process tree from a background thread.

    Parameters
    ----------
    pid
        The process to measure.
    stats
        Receives the measurements, the elapsed time and ``tasks``.
    tasks
        Number of tasks run inside the block.
    interval
        Seconds between two measurements.
    include_children
        Also measure the (recursive) child processes, i.e. pool workers.

    """

    def __init__(
        self,
        pid: int,
        stats: ProfilingStats,
        *,
        tasks: int = 0,
        interval: float = 0.5,
        include_children: bool = True,
    ) -> None:
        self.pid = pid
        self.stats = stats
        self.tasks = tasks
        self.interval = interval
        self.include_children = include_children
        self._thread: threading.Thread | None = None
        self._stop = threading.Event()
        self._start: float | None = None

    def __enter__(self) -> Self:
        self._thread = threading.Thread(target=self.measure_resources, daemon=True)
        self._thread.start()
        self._start = time.perf_counter()
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc_value: BaseException | None,
        traceback: TracebackType | None,
    ) -> None:
        assert self._start is not None
        self._stop.set()
        if self._thread is not None:
            self._thread.join()
        self.stats.time.update(time.perf_counter() - self._start)
        self.stats.tasks.update(self.tasks)

    def _tree(self, root: psutil.Process, known: dict[int, psutil.Process]) -> list[psutil.Process]:
        # cpu_percent is relative to the previous call on the same object
        procs = [root]
        if self.include_children:
            import psutil

            try:
                procs += root.children(recursive=True)
            except psutil.NoSuchProcess:  # pragma: no cover
                return []
        return [known.setdefault(p.pid, p) for p in procs]

    def measure_resources(self) -> None:
        """Measure summed CPU percentage and resident memory until stopped."""
        import psutil

        try:
            root = psutil.Process(self.pid)
        except psutil.NoSuchProcess:  # pragma: no cover
            return
        known: dict[int, psutil.Process] = {}
        while not self._stop.is_set():
            memory = cpu = 0.0
            for process in self._tree(root, known):
                try:
                    memory += process.memory_info().rss
                    cpu += process.cpu_percent()
                except psutil.NoSuchProcess:  # noqa: PERF203  # pragma: no cover
                    known.pop(process.pid, None)
            if memory:
                self.stats.memory.update(memory)
                self.stats.cpu.update(cpu)
            self._stop.wait(self.interval)


def format_profiling_stats(profiling_stats: dict[str, ProfilingStats]) -> str:
    """Table with one row per experiment in ``profiling_stats``."""
    headers = ["Experiment", "Tasks", "Time (s)", "Tasks/s", "Avg CPU (%)", "Max Memory (MB)"]
    rows = []
    for name, stats in profiling_stats.items():
        s = stats.as_dict()
        rows.append(
            [
                name,
                s["tasks"],
                f"{s['wall_time_s']:.2e}",
                f"{s['tasks_per_s']:.1f}",
                f"{s['avg_cpu_percent']:.1f}",
                f"{s['max_memory_mb']:.1f}",
            ],
        )
    return "Resource usage:\n" + table(rows, headers)
