from __future__ import annotations

import pickle
from typing import TYPE_CHECKING

import pytest

from cubicplanar._cache import DiskCache, LRUCache

if TYPE_CHECKING:
    from pathlib import Path


def test_lru_cache_evicts_least_recently_used():
    cache = LRUCache(max_size=2)
    cache.put("a", 1)
    cache.put("b", 2)
    assert cache.get("a") == 1
    cache.put("c", 3)
    assert "a" in cache
    assert "b" not in cache
    assert cache.get("b") is None
    assert len(cache) == 2
    cache.clear()
    assert len(cache) == 0
    with pytest.raises(ValueError, match="max_size must be greater than 0"):
        LRUCache(max_size=0)


def test_lru_cache_pickles_empty():
    cache = LRUCache(max_size=3)
    cache.get_or_compute((2, 40), lambda: [0.5, 0.5])
    restored = pickle.loads(pickle.dumps(cache))
    assert restored.max_size == 3
    assert len(restored) == 0
    assert restored.get_or_compute((2, 40), lambda: "fresh") == "fresh"


@pytest.mark.parametrize("in_memory", [True, False])
def test_disk_cache_round_trip(tmp_path: Path, in_memory):
    cache = DiskCache(tmp_path / "cache", prefix="context", in_memory=in_memory)
    key = {"table_order": 120, "precision": 30}
    path = cache.put(key, {"rho": 0.319})
    assert path == cache.path_of(key)
    assert path.name.startswith("context-")
    assert key in cache
    assert cache.get(key) == {"rho": 0.319}
    assert len(cache) == 1
    # a second instance (another process) finds the same file
    other = DiskCache(tmp_path / "cache", prefix="context", in_memory=in_memory)
    assert other.get({"precision": 30, "table_order": 120}) == {"rho": 0.319}
    assert other.get({"table_order": 121}) is None
    cache.clear()
    assert len(cache) == 0
    assert key not in cache


def test_disk_cache_keys_by_content(tmp_path: Path):
    cache = DiskCache(tmp_path)
    assert cache.path_of((1, 2)) == cache.path_of([1, 2])
    assert cache.path_of({"a": 1}) != cache.path_of({"a": 2})
    assert DiskCache(tmp_path, prefix="other").path_of((1, 2)) != cache.path_of((1, 2))


def test_disk_cache_overwrite(tmp_path: Path):
    cache = DiskCache(tmp_path)
    cache.put("k", 1)
    cache.put("k", 2)
    assert cache.get("k") == 2
    assert len(cache) == 1
    assert not list(tmp_path.glob("*.tmp"))


def test_get_or_compute_runs_once(tmp_path: Path):
    cache = DiskCache(tmp_path)
    calls = []

    def compute():
        calls.append(1)
        return 42

    assert cache.get_or_compute("k", compute) == 42
    assert cache.get_or_compute("k", compute) == 42
    assert len(calls) == 1


def test_disk_cache_max_size(tmp_path: Path):
    cache = DiskCache(tmp_path, max_size=2)
    for i in range(4):
        cache.put(f"key{i}", i)
        assert f"key{i}" in cache
    assert len(cache) == 2
    # files of other prefixes are left alone
    DiskCache(tmp_path, prefix="other").put("x", 0)
    assert len(cache) == 2
    with pytest.raises(ValueError, match="max_size must be at least 1"):
        DiskCache(tmp_path, max_size=0)
