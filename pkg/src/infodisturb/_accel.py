"""Optional numba acceleration.

Set ``INFODISTURB_NO_NUMBA=1`` to force the pure-numpy kernels.
"""
import os

_disabled = os.environ.get("INFODISTURB_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _disabled:
        raise ImportError
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False
    _njit = None


def njit(*args, **kwargs):
    """``numba.njit`` when available and enabled, identity otherwise."""
    if HAVE_NUMBA:
        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn
