"""Optional numba acceleration.

Kernels are written in the numba-compatible subset of Python and numpy.  When
numba is importable and ``FPGADGETS_DISABLE_NUMBA`` is unset (or ``0``), they
are compiled with ``njit``; otherwise the identical source runs interpreted.
"""

import os

_flag = os.environ.get("FPGADGETS_DISABLE_NUMBA", "0").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    from numba import njit as _njit

    NUMBA_ENABLED = True
except ImportError:
    _njit = None
    NUMBA_ENABLED = False


def kernel(func):
    """Compile ``func`` with numba if enabled, keeping the Python original
    reachable as ``func.py_func`` either way (the benchmark uses it)."""
    if NUMBA_ENABLED:
        compiled = _njit(cache=True, nogil=True)(func)
        return compiled
    func.py_func = func
    return func
