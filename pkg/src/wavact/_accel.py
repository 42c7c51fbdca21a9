"""Numba switch.

Set ``WAVACT_NUMBA=0`` to force the pure-numpy kernels. When numba is not
importable the numpy path is used regardless of the flag.
"""

import os

_FALSY = {"0", "false", "no", "off"}

try:
    import numba as _nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    _nb = None

NUMBA_AVAILABLE = _nb is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("WAVACT_NUMBA", "1").strip().lower() not in _FALSY


def njit(fn):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if _nb is None:
        return fn
    return _nb.njit(cache=True, nogil=True)(fn)
