"""Optional numba acceleration.

Set ``DIVDECOMP_DISABLE_NUMBA=1`` to force the pure-numpy code paths.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional speedup
    numba = None

NUMBA_DISABLED = os.environ.get("DIVDECOMP_DISABLE_NUMBA", "0").lower() in ("1", "true", "yes")
NUMBA_AVAILABLE = numba is not None and not NUMBA_DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` when acceleration is on, otherwise the identity decorator."""
    if NUMBA_AVAILABLE:
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


_compiled = {}


def compiled(fn):
    """Return a nopython-compiled twin of ``fn`` or None if it cannot be compiled.

    Results are memoised per function object; a failed compile is remembered
    so the numpy path is chosen without retrying.
    """
    if not NUMBA_AVAILABLE or fn is None:
        return None
    key = id(fn)
    hit = _compiled.get(key)
    if hit is not None and hit[0] is fn:
        return hit[1]
    if isinstance(fn, numba.core.registry.CPUDispatcher):
        disp = fn
    else:
        try:
            disp = numba.njit(fn)
            disp.compile("float64(float64)")
        except Exception:
            disp = None
    _compiled[key] = (fn, disp)
    return disp
