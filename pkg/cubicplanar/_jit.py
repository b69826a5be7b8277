"""Optional numba compilation for integer hot loops."""

from __future__ import annotations

from typing import Any

try:
    import numba as nb
except ImportError:  # pragma: no cover
    JIT_DISABLED = True
else:
    JIT_DISABLED = False


def njit(*args: Any, **kwargs: Any) -> Any:
    """``numba.njit`` when numba is installed, the identity decorator otherwise."""
    if not JIT_DISABLED:
        return nb.njit(*args, **kwargs)
    return lambda func: func
