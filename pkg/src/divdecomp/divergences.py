"""Bregman, symmetric Bregman, Jensen and conjugate-Jensen divergences.

Vectors are 1-D float64 arrays; a scalar divergence is simply the length-1
case.  Every public divergence returns a :class:`DivergenceValue` whose
value has been checked for non-negativity (tiny negatives from round-off
are clamped to zero, anything below ``-CLAMP_TOL`` raises).
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NumericalError, ParameterError, ShapeError
from .generator import check_domain, eval_conjugate, eval_conjugate_prime

CLAMP_TOL = 1e-12
WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class DivergenceValue:
    value: float
    divergence_name: str
    generator_name: Optional[str] = None

    def __float__(self):
        return self.value

    def to_dict(self):
        return {"value": self.value, "divergence": self.divergence_name,
                "generator": self.generator_name}


def clamp_nonnegative(value, what="divergence"):
    """Map values in ``[-CLAMP_TOL, 0)`` to 0 and reject anything below."""
    value = float(value)
    if np.isnan(value):
        raise NumericalError(f"{what} evaluated to NaN")
    if value < 0.0:
        if value < -CLAMP_TOL:
            raise NumericalError(f"{what} = {value:.3e} is negative beyond round-off")
        return 0.0
    return value


def _value(total, name, g=None):
    return DivergenceValue(clamp_nonnegative(total, name), name,
                           g.name if g is not None else None)


def as_points(values, g=None, name="p"):
    """Validate a point vector: 1-D, non-empty, finite, inside ``g.domain``."""
    arr = np.atleast_1d(np.asarray(values, dtype=np.float64))
    if arr.ndim != 1 or arr.size == 0:
        raise ShapeError(f"{name} must be a non-empty 1-D vector, got shape {arr.shape}")
    if g is not None:
        check_domain(g.domain, arr, name, g.name)
    elif not np.all(np.isfinite(arr)):
        raise ShapeError(f"{name} contains non-finite entries")
    return arr


def as_pair(g, p, q):
    p = as_points(p, g, "p")
    q = as_points(q, g, "q")
    if p.shape != q.shape:
        raise ShapeError(f"length mismatch: {p.size} vs {q.size}")
    return p, q


def as_weights(w, n=None):
    """Positive weights summing to one (to WEIGHT_TOL), renormalised exactly."""
    arr = np.atleast_1d(np.asarray(w, dtype=np.float64))
    if arr.ndim != 1 or arr.size == 0:
        raise ShapeError("weights must be a non-empty 1-D vector")
    if n is not None and arr.size != n:
        raise ShapeError(f"{arr.size} weights for {n} points")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ParameterError("weights must be finite and strictly positive")
    total = arr.sum()
    if abs(total - 1.0) > WEIGHT_TOL:
        raise ParameterError(f"weights sum to {total!r}, not 1")
    return arr / total


def check_alpha(alpha):
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha must lie in the open interval (0, 1), got {alpha}")
    return alpha


def bregman_terms(g, p, q):
    """Per-coordinate F(p) - F(q) - F'(q)(p - q), unvalidated."""
    return g.f(p) - g.f(q) - g.f_prime(q) * (p - q)


def bregman(g, p, q):
    """Separable Bregman divergence sum_i B_F(p_i, q_i)."""
    p, q = as_pair(g, p, q)
    return _value(np.sum(bregman_terms(g, p, q)), "bregman", g)


def symmetric_bregman(g, p, q):
    """sum_i (F'(p_i) - F'(q_i)) (p_i - q_i)."""
    p, q = as_pair(g, p, q)
    return _value(np.sum((g.f_prime(p) - g.f_prime(q)) * (p - q)), "symmetric_bregman", g)


def dual_map(g, p):
    """Coordinatewise dual coordinates F'(p_i)."""
    p = as_points(p, g, "p")
    return np.asarray(g.f_prime(p), dtype=np.float64)


def _weighted_points(g, w, points):
    points = as_points(points, g, "points")
    w = as_weights(w, points.size)
    return w, points


def centroid(w, points):
    return float(np.dot(w, points))


def dual_centroid(g, w, points):
    """(c_hat*, c_hat): the weighted dual mean and its primal pre-image."""
    w, points = _weighted_points(g, w, points)
    cs = float(np.dot(w, g.f_prime(points)))
    return cs, eval_conjugate_prime(g, cs)


def jensen_multi(g, w, points):
    """sum_v a_v F(p_v) - F(sum_v a_v p_v)."""
    w, points = _weighted_points(g, w, points)
    c = centroid(w, points)
    return _value(np.dot(w, g.f(points)) - g.f(c), "jensen_multi", g)


def conjugate_jensen_multi(g, w, points):
    """Jensen gap of F* at the dual coordinates of ``points`` (primal input)."""
    w, points = _weighted_points(g, w, points)
    ps = g.f_prime(points)
    cs = float(np.dot(w, ps))
    return _value(np.dot(w, eval_conjugate(g, ps)) - eval_conjugate(g, cs),
                  "conjugate_jensen_multi", g)


def pair_centroids(g, alpha, p, q):
    """Coordinatewise primal mixture C and pulled-back dual mixture C_hat."""
    alpha = check_alpha(alpha)
    p, q = as_pair(g, p, q)
    c = alpha * p + (1.0 - alpha) * q
    cs = alpha * g.f_prime(p) + (1.0 - alpha) * g.f_prime(q)
    return c, np.atleast_1d(eval_conjugate_prime(g, cs))


def jensen_pair(g, alpha, p, q):
    """sum_i [a F(p_i) + (1-a) F(q_i) - F(a p_i + (1-a) q_i)]."""
    alpha = check_alpha(alpha)
    p, q = as_pair(g, p, q)
    c = alpha * p + (1.0 - alpha) * q
    terms = alpha * g.f(p) + (1.0 - alpha) * g.f(q) - g.f(c)
    return _value(np.sum(terms), "jensen", g)


def conjugate_jensen_pair(g, alpha, p, q):
    """Coordinatewise conjugate Jensen divergence, summed."""
    alpha = check_alpha(alpha)
    p, q = as_pair(g, p, q)
    ps, qs = g.f_prime(p), g.f_prime(q)
    cs = alpha * ps + (1.0 - alpha) * qs
    terms = (alpha * eval_conjugate(g, ps) + (1.0 - alpha) * eval_conjugate(g, qs)
             - eval_conjugate(g, cs))
    return _value(np.sum(terms), "conjugate_jensen", g)


# Conjugate representations.  These reach the same numbers through F*
# and serve as cross-checks of the direct definitions above.

def bregman_via_conjugate(g, p, q):
    """sum_i F(p_i) + F*(q_i*) - q_i* p_i."""
    p, q = as_pair(g, p, q)
    qs = g.f_prime(q)
    return float(np.sum(g.f(p) + eval_conjugate(g, qs) - qs * p))


def symmetric_bregman_via_duals(g, p, q):
    """sum_i (p_i* - q_i*)(p_i - q_i) computed as B(p, q) + B(q, p)."""
    p, q = as_pair(g, p, q)
    return float(np.sum(bregman_terms(g, p, q)) + np.sum(bregman_terms(g, q, p)))


def jensen_multi_via_conjugate(g, w, points):
    """sum_v a_v F(p_v) + F*(c*) - c* c."""
    w, points = _weighted_points(g, w, points)
    c = centroid(w, points)
    cs = float(g.f_prime(c))
    return float(np.dot(w, g.f(points)) + eval_conjugate(g, cs) - cs * c)


def conjugate_jensen_multi_via_primal(g, w, points):
    """sum_v a_v F*(p_v*) + F(c_hat) - c_hat c_hat*."""
    w, points = _weighted_points(g, w, points)
    ps = g.f_prime(points)
    cs = float(np.dot(w, ps))
    ch = eval_conjugate_prime(g, cs)
    return float(np.dot(w, eval_conjugate(g, ps)) + g.f(ch) - ch * cs)
