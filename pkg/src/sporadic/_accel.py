"""Optional numba acceleration.

Set ``SPORADIC_NO_NUMBA=1`` to run every kernel as plain Python.  The
kernels are written in the numba-compatible subset, so the same source
serves both paths.
"""
from __future__ import annotations

import os

NUMBA_DISABLED = os.environ.get("SPORADIC_NO_NUMBA", "").strip() not in ("", "0", "false")

try:
    if NUMBA_DISABLED:
        raise ImportError
    import numba as _numba

    NUMBA_AVAILABLE = True
except ImportError:
    _numba = None
    NUMBA_AVAILABLE = False


def njit(func=None, **opts):
    """``numba.njit(cache=True)`` when enabled, identity decorator otherwise."""
    if func is None:
        return lambda f: njit(f, **opts)
    if not NUMBA_AVAILABLE:
        return func
    opts.setdefault("cache", True)
    return _numba.njit(**opts)(func)


def backend() -> str:
    return "numba" if NUMBA_AVAILABLE else "python"
