"""Closed-form named divergences on positive vectors.

All definitions are the extended (unnormalised) ones, so they remain
divergences for vectors that do not sum to one, e.g. KL carries the
``- sum p + sum q`` correction.  They are written independently of the
generator machinery and double as oracles for it.
"""
import numpy as np

from .divergences import DivergenceValue, as_points, check_alpha, clamp_nonnegative
from .errors import DomainError, ShapeError


def _positive(values, name):
    arr = as_points(values, None, name)
    if np.any(arr <= 0.0):
        raise DomainError(f"{name} must be strictly positive")
    return arr


def _positive_pair(p, q):
    p = _positive(p, "p")
    q = _positive(q, "q")
    if p.shape != q.shape:
        raise ShapeError(f"length mismatch: {p.size} vs {q.size}")
    return p, q


def _named(value, name):
    return DivergenceValue(clamp_nonnegative(value, name), name, None)


def _kl(p, q):
    return float(np.sum(p * np.log(p / q) - p + q))


def kl(p, q):
    """Extended Kullback-Leibler divergence KL(p || q)."""
    p, q = _positive_pair(p, q)
    return _named(_kl(p, q), "kl")


def jeffreys(p, q):
    """KL(p || q) + KL(q || p)."""
    p, q = _positive_pair(p, q)
    return _named(_kl(p, q) + _kl(q, p), "jeffreys")


def js_alpha(alpha, p, q):
    """Skew Jensen-Shannon: a KL(p || c) + (1-a) KL(q || c), c = a p + (1-a) q."""
    alpha = check_alpha(alpha)
    p, q = _positive_pair(p, q)
    c = alpha * p + (1.0 - alpha) * q
    return _named(alpha * _kl(p, c) + (1.0 - alpha) * _kl(q, c), "js_alpha")


def hellinger_sq(p, q):
    """Squared Hellinger distance 1/2 sum (sqrt p - sqrt q)^2."""
    p, q = _positive_pair(p, q)
    return _named(0.5 * np.sum((np.sqrt(p) - np.sqrt(q)) ** 2), "hellinger_sq")


def alpha_divergence(alpha, p, q):
    """Amari alpha-divergence for alpha in (0, 1)."""
    alpha = check_alpha(alpha)
    p, q = _positive_pair(p, q)
    # same as (sum p^a q^(1-a) - a sum p - (1-a) sum q) / (a (a-1)), summed termwise
    gap = alpha * p + (1.0 - alpha) * q - p ** alpha * q ** (1.0 - alpha)
    return _named(np.sum(gap) / (alpha * (1.0 - alpha)), "alpha_divergence")


def geometric_mixture_kl(alpha, p, q):
    """KL(a p + (1-a) q || p^a q^(1-a)), coordinatewise mixtures."""
    alpha = check_alpha(alpha)
    p, q = _positive_pair(p, q)
    arith = alpha * p + (1.0 - alpha) * q
    geo = p ** alpha * q ** (1.0 - alpha)
    return _named(_kl(arith, geo), "geometric_mixture_kl")


def neyman_chi_square(p, q):
    """sum (p - q)^2 / p."""
    p, q = _positive_pair(p, q)
    return _named(np.sum((p - q) ** 2 / p), "neyman_chi_square")


def itakura_saito(p, q):
    """Scalar Itakura-Saito divergence p/q - log(p/q) - 1."""
    p, q = float(p), float(q)
    if not (p > 0.0 and q > 0.0 and np.isfinite(p) and np.isfinite(q)):
        raise DomainError(f"itakura_saito needs positive finite arguments, got {p}, {q}")
    r = p / q
    return _named(r - np.log(r) - 1.0, "itakura_saito")
