"""Numba acceleration switch.

Hot kernels in :mod:`quakesurf.kernels` exist in two versions: a pure-numpy
reference implementation and a numba ``@njit`` one.  The jit path is used
when numba imports cleanly and the environment variable
``QUAKESURF_DISABLE_NUMBA`` is unset (or not ``"1"``); otherwise the numpy
path is selected.  ``benchmarks/bench_kernels.py`` times both.
"""

import os

_DISABLED = os.environ.get("QUAKESURF_DISABLE_NUMBA", "0") == "1"

try:
    if _DISABLED:
        raise ImportError("disabled by QUAKESURF_DISABLE_NUMBA")
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False
    _njit = None

JIT_ENABLED = HAS_NUMBA and not _DISABLED


def maybe_jit(func):
    """Return an njit-compiled version of func, or func itself on the fallback path."""
    if JIT_ENABLED:
        return _njit(cache=True)(func)
    return func
