"""Numba switch for the hot kernels.

Set ``SETA_DISABLE_NUMBA=1`` to force the pure-numpy code paths. When numba
is not importable the numpy paths are used as well.
"""

from __future__ import annotations

import os

_DISABLED = os.environ.get("SETA_DISABLE_NUMBA", "0").strip().lower() in ("1", "true", "yes")

try:  # pragma: no cover - depends on the environment
    import numba as _numba
except ImportError:  # pragma: no cover
    _numba = None

NUMBA_AVAILABLE = _numba is not None
USE_NUMBA = NUMBA_AVAILABLE and not _DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` if numba is importable, else an identity decorator.

    The decorated function is always compiled when numba exists, so the
    benchmark and the parity tests can reach it even with the env flag set;
    dispatch between paths happens in the calling module via ``USE_NUMBA``.
    """
    if _numba is None:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn
    kwargs.setdefault("cache", True)
    return _numba.njit(*args, **kwargs)
