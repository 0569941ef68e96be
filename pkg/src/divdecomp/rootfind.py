"""Inversion of a strictly increasing scalar map, y -> x with f(x) = y.

This is the hot loop behind every numeric Legendre conjugate: each dual
coordinate is pulled back to the primal domain by bracketing the root of
``f(x) - y`` and refining it with bisection guarded Newton steps.

Two interchangeable kernels are provided.  ``_invert_loop`` is a scalar
loop compiled with numba; ``_invert_vectorized`` runs the same algorithm
over whole arrays with numpy masks.  :func:`invert_increasing` picks the
compiled kernel when numba is available and both callables compile in
nopython mode, and falls back to numpy otherwise.
"""
import math

import numpy as np

from . import _jit
from .errors import ConvergenceError

MAX_EXPANSIONS = 200
MAX_ITER = 600
ROOT_RTOL = 1e-12

# status codes returned by the kernels
_OK = 0
_NO_BRACKET = 1
_NO_CONVERGENCE = 2
# once the residual tolerance is met, polish until steps are this small,
# for at most _MAX_POLISH further iterations
_STEP_RTOL = 8.0 * np.finfo(np.float64).eps
_MAX_POLISH = 3


def interior_seed(lo, hi):
    """A deterministic point strictly inside the open interval (lo, hi)."""
    if math.isfinite(lo) and math.isfinite(hi):
        return 0.5 * (lo + hi)
    for cand in (1.0, 0.0, -1.0):
        if lo < cand < hi:
            return cand
    if math.isfinite(lo):
        return lo + 1.0
    return hi - 1.0


@_jit.njit
def _expand_point(s, bound, k, up):
    # k-th geometric probe from the seed towards ``bound``
    if up:
        if math.isinf(bound):
            return s + max(1.0, abs(s)) * (2.0 ** k - 1.0)
        return bound - (bound - s) * 0.5 ** k
    if math.isinf(bound):
        return s - max(1.0, abs(s)) * (2.0 ** k - 1.0)
    return bound + (s - bound) * 0.5 ** k


@_jit.njit
def _split(a, b):
    # geometric midpoint for wide one-signed brackets, arithmetic otherwise
    if a > 0.0 and b > 4.0 * a:
        return math.sqrt(a) * math.sqrt(b)
    if b < 0.0 and a < 4.0 * b:
        return -math.sqrt(-a) * math.sqrt(-b)
    return a + 0.5 * (b - a)


# Not disk-cached: numba cannot pickle signatures that carry dispatcher arguments.
@_jit.njit(cache=False)
def _invert_loop(f, df, y, lo, hi, seed, rtol, max_expand, max_iter):
    n = y.size
    out = np.empty(n)
    status = np.zeros(n, dtype=np.int64)
    fs = f(seed)
    for i in range(n):
        yi = y[i]
        tol = rtol * max(1.0, abs(yi))
        if abs(fs - yi) <= tol:
            out[i] = seed
            continue
        up = fs < yi
        a = seed
        b = seed
        found = False
        for k in range(1, max_expand + 1):
            if up:
                t = _expand_point(seed, hi, k, True)
                if not t < hi:
                    break
                ft = f(t)
                if ft >= yi:
                    b = t
                    found = True
                    break
                a = t
            else:
                t = _expand_point(seed, lo, k, False)
                if not t > lo:
                    break
                ft = f(t)
                if ft <= yi:
                    a = t
                    found = True
                    break
                b = t
        if not found:
            status[i] = _NO_BRACKET
            out[i] = np.nan
            continue
        if ft == yi:
            out[i] = t
            continue

        x = _split(a, b)
        r = f(x) - yi
        dx_old = b - a
        converged = False
        polish = 0
        for _ in range(max_iter):
            if abs(r) <= tol:
                if r == 0.0 or abs(dx_old) <= _STEP_RTOL * abs(x) or polish >= _MAX_POLISH:
                    converged = True
                    break
                polish += 1
            if r < 0.0:
                a = x
            else:
                b = x
            d = df(x)
            xn = x - r / d if d > 0.0 else np.nan
            if not (a < xn < b) or abs(xn - x) > 0.5 * abs(dx_old):
                xn = _split(a, b)
            if xn == a or xn == b:
                # bracket is down to adjacent floats: nothing better exists
                converged = True
                break
            dx_old = xn - x
            x = xn
            r = f(x) - yi
        if not converged:
            status[i] = _NO_CONVERGENCE
        out[i] = x
    return out, status


def _invert_vectorized(f, df, y, lo, hi, seed, rtol, max_expand, max_iter):
    y = np.asarray(y, dtype=np.float64)
    n = y.size
    tol = rtol * np.maximum(1.0, np.abs(y))
    fs = float(f(seed))
    a = np.full(n, seed)
    b = np.full(n, seed)
    done = np.abs(fs - y) <= tol
    root = np.full(n, seed)
    up = fs < y
    need = ~done
    found = done.copy()

    step = max(1.0, abs(seed))
    for k in range(1, max_expand + 1):
        pend = need & ~found
        if not pend.any():
            break
        with np.errstate(over="ignore", invalid="ignore"):
            t_up = hi - (hi - seed) * 0.5 ** k if math.isfinite(hi) else seed + step * (2.0 ** k - 1.0)
            t_dn = lo + (seed - lo) * 0.5 ** k if math.isfinite(lo) else seed - step * (2.0 ** k - 1.0)
        for side, t, going_up in ((pend & up, t_up, True), (pend & ~up, t_dn, False)):
            if not side.any() or not (lo < t < hi):
                continue
            ft = float(f(t))
            if going_up:
                hit = side & (ft >= y)
                b[hit] = t
                a[side & ~hit] = t
            else:
                hit = side & (ft <= y)
                a[hit] = t
                b[side & ~hit] = t
            found |= hit
            exact = hit & (ft == y)
            root[exact] = t
            done |= exact

    status = np.where(found, _OK, _NO_BRACKET)
    x = np.where(done, root, _split_vec(a, b))
    act = found & ~done
    r = np.zeros(n)
    dx_old = b - a
    if act.any():
        r[act] = f(x[act]) - y[act]
    x_prev = np.where(r < 0.0, b, a)
    r_prev = np.zeros(n)
    if act.any():
        r_prev[act] = f(x_prev[act]) - y[act]
    polish = np.zeros(n, dtype=np.int64)
    for _ in range(max_iter):
        within = np.abs(r) <= tol
        ok = within & ((r == 0.0) | (np.abs(dx_old) <= _STEP_RTOL * np.abs(x))
                       | (polish >= _MAX_POLISH))
        act &= ~ok
        polish[act & within] += 1
        if not act.any():
            break
        neg = act & (r < 0.0)
        pos = act & (r >= 0.0)
        a[neg] = x[neg]
        b[pos] = x[pos]
        xa = x[act]
        if df is not None:
            d = np.asarray(df(xa), dtype=np.float64)
            with np.errstate(divide="ignore", invalid="ignore"):
                xn = np.where(d > 0.0, xa - r[act] / d, np.nan)
        else:
            # secant slope through the previous iterate
            with np.errstate(divide="ignore", invalid="ignore"):
                d = (r[act] - r_prev[act]) / (xa - x_prev[act])
                xn = np.where(d > 0.0, xa - r[act] / d, np.nan)
        aa, bb = a[act], b[act]
        bad = ~((aa < xn) & (xn < bb)) | (np.abs(xn - xa) > 0.5 * np.abs(dx_old[act]))
        xn = np.where(bad, _split_vec(aa, bb), xn)
        stuck = (xn == aa) | (xn == bb)
        idx = np.flatnonzero(act)
        act[idx[stuck]] = False
        move = idx[~stuck]
        xn = xn[~stuck]
        dx_old[move] = xn - x[move]
        x_prev[move] = x[move]
        r_prev[move] = r[move]
        x[move] = xn
        if move.size:
            r[move] = f(xn) - y[move]
    status[act] = _NO_CONVERGENCE
    x[status != _OK] = np.nan
    return x, status


def _split_vec(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    mid = a + 0.5 * (b - a)
    with np.errstate(invalid="ignore"):
        pos = (a > 0.0) & (b > 4.0 * a)
        neg = (b < 0.0) & (a < 4.0 * b)
        mid = np.where(pos, np.sqrt(np.abs(a)) * np.sqrt(np.abs(b)), mid)
        mid = np.where(neg, -np.sqrt(np.abs(a)) * np.sqrt(np.abs(b)), mid)
    return mid


def invert_increasing(f, y, lo, hi, df=None, seed=None, rtol=ROOT_RTOL,
                      max_expand=MAX_EXPANSIONS, max_iter=MAX_ITER, backend=None):
    """Solve ``f(x) = y`` elementwise for strictly increasing ``f`` on (lo, hi).

    Parameters
    ----------
    f : callable
        Strictly increasing function, vectorised over numpy arrays.
    y : float or array_like
        Target values, assumed to lie in the image of ``f``.
    lo, hi : float
        Open domain bounds, may be infinite.
    df : callable, optional
        Derivative of ``f``; enables Newton steps.  Without it the
        refinement uses safeguarded secant steps (numpy kernel only).
    backend : {None, "numba", "numpy"}
        Force a kernel.  ``None`` picks numba when it can compile ``f``
        and ``df``.

    Returns
    -------
    float or ndarray
        Roots with ``|f(x) - y| <= rtol * max(1, |y|)`` unless the bracket
        has shrunk to adjacent floating point numbers first.

    Raises
    ------
    ConvergenceError
        If no bracket is found within ``max_expand`` geometric expansions.
    """
    y_arr = np.asarray(y, dtype=np.float64)
    flat = np.ascontiguousarray(y_arr.ravel())
    lo, hi = float(lo), float(hi)
    if seed is None:
        seed = interior_seed(lo, hi)
    seed = float(seed)

    kernel = backend
    if kernel is None:
        kernel = "numba" if _numba_pair(f, df) is not None else "numpy"
    if kernel == "numba":
        pair = _numba_pair(f, df)
        if pair is None:
            raise ValueError("numba backend unavailable for these callables")
        x, status = _invert_loop(pair[0], pair[1], flat, lo, hi, seed,
                                 rtol, max_expand, max_iter)
    elif kernel == "numpy":
        x, status = _invert_vectorized(f, df, flat, lo, hi, seed,
                                       rtol, max_expand, max_iter)
    else:
        raise ValueError(f"unknown backend {backend!r}")

    if np.any(status == _NO_BRACKET):
        bad = flat[status == _NO_BRACKET]
        raise ConvergenceError(
            f"could not bracket f(x) = y within {max_expand} expansions "
            f"on ({lo}, {hi}) for y = {bad[:5].tolist()}"
        )
    if np.any(status == _NO_CONVERGENCE):
        bad = flat[status == _NO_CONVERGENCE]
        raise ConvergenceError(f"refinement did not converge for y = {bad[:5].tolist()}")
    x = x.reshape(y_arr.shape)
    return float(x) if x.ndim == 0 else x


def _numba_pair(f, df):
    if df is None:
        return None
    cf = _jit.compiled(f)
    cdf = _jit.compiled(df)
    if cf is None or cdf is None:
        return None
    return cf, cdf
