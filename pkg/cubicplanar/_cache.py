"""Caches for sampler tables.

`LRUCache` keeps per-size probability tables of a sampler in memory.
`DiskCache` keeps whole sampler contexts as cloudpickle files, which take
seconds to minutes to build and are read by every worker of an experiment.
"""

from __future__ import annotations

import logging
import os
import tempfile
from collections import OrderedDict
from contextlib import suppress
from pathlib import Path
from typing import TYPE_CHECKING, Any

from cubicplanar._utils import content_hash, dump, load

if TYPE_CHECKING:
    from collections.abc import Callable, Hashable

logger = logging.getLogger(__name__)


class LRUCache:
    """An in-process least recently used cache.

    Parameters
    ----------
    max_size
        Number of entries kept, by default 128.

    """

    def __init__(self, *, max_size: int = 128) -> None:
        if max_size <= 0:
            msg = "max_size must be greater than 0"
            raise ValueError(msg)
        self.max_size = max_size
        self._entries: OrderedDict[Hashable, Any] = OrderedDict()

    def get(self, key: Hashable) -> Any:
        """The value of ``key`` (``None`` if absent), marking it as recently used."""
        if key not in self._entries:
            return None
        self._entries.move_to_end(key)
        return self._entries[key]

    def put(self, key: Hashable, value: Any) -> None:
        self._entries[key] = value
        self._entries.move_to_end(key)
        while len(self._entries) > self.max_size:
            self._entries.popitem(last=False)

    def get_or_compute(self, key: Hashable, compute: Callable[[], Any]) -> Any:
        """The cached value of ``key``, computing and storing it on a miss."""
        if key in self._entries:
            return self.get(key)
        value = compute()
        self.put(key, value)
        return value

    def __contains__(self, key: Hashable) -> bool:
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def clear(self) -> None:
        self._entries.clear()

    def __getstate__(self) -> dict[str, Any]:
        # entries are recomputed in the receiving process
        return {"max_size": self.max_size, "_entries": OrderedDict()}


class DiskCache:
    """Values stored as ``<prefix>-<hash>.pkl`` files in one directory.

    Keys can be anything `content_hash` accepts (dicts, tuples, numbers,
    strings), so equal configurations map to the same file in every process.

    Parameters
    ----------
    cache_dir
        Directory of the cache files, created when missing.
    max_size
        Maximum number of files; the oldest files are removed first.
        ``None`` means no limit.
    prefix
        File name prefix, distinguishing kinds of values in a shared directory.
    in_memory
        Keep loaded values in the in-process cache of `cubicplanar._utils.load`.

    """

    def __init__(
        self,
        cache_dir: str | Path,
        max_size: int | None = None,
        *,
        prefix: str = "value",
        in_memory: bool = True,
    ) -> None:
        if max_size is not None and max_size < 1:
            msg = f"max_size must be at least 1 or None, got {max_size}."
            raise ValueError(msg)
        self.cache_dir = Path(cache_dir)
        self.max_size = max_size
        self.prefix = prefix
        self.in_memory = in_memory
        self.cache_dir.mkdir(parents=True, exist_ok=True)

    def path_of(self, key: Any) -> Path:
        """The file that holds (or would hold) ``key``."""
        return self.cache_dir / f"{self.prefix}-{content_hash(key)[:20]}.pkl"

    def get(self, key: Any) -> Any:
        """The value stored under ``key``, ``None`` if absent."""
        path = self.path_of(key)
        if not path.exists():
            return None
        return load(path, cache=self.in_memory)

    def put(self, key: Any, value: Any) -> Path:
        """Store ``value``; the file appears atomically for concurrent readers."""
        path = self.path_of(key)
        fd, tmp = tempfile.mkstemp(dir=self.cache_dir, suffix=".tmp")
        os.close(fd)
        try:
            dump(value, Path(tmp))
            Path(tmp).replace(path)
        finally:
            with suppress(FileNotFoundError):
                Path(tmp).unlink()
        self._evict(keep=path)
        return path

    def get_or_compute(self, key: Any, compute: Callable[[], Any]) -> Any:
        """The stored value of ``key``, computing and storing it on a miss."""
        if key in self:
            logger.debug("Cache hit for %s.", self.path_of(key).name)
            return self.get(key)
        value = compute()
        self.put(key, value)
        return value

    def _files(self) -> list[Path]:
        return sorted(self.cache_dir.glob(f"{self.prefix}-*.pkl"), key=lambda p: p.stat().st_mtime_ns)

    def _evict(self, keep: Path) -> None:
        if self.max_size is None:
            return
        files = [p for p in self._files() if p != keep]
        for path in files[: max(0, len(files) + 1 - self.max_size)]:
            logger.info("Evicting %s from the cache.", path.name)
            with suppress(FileNotFoundError):
                path.unlink()

    def __contains__(self, key: Any) -> bool:
        return self.path_of(key).exists()

    def __len__(self) -> int:
        return len(self._files())

    def clear(self) -> None:
        """Delete every file of this cache."""
        for path in self._files():
            with suppress(FileNotFoundError):
                path.unlink()
