"""Three-term sum decompositions and the inequalities that follow from them.

Each decomposition evaluates a left-hand side and three non-negative
divergences (a Jensen gap, a conjugate Jensen gap and a Bregman
divergence between the primal and the pulled-back dual centroid) and
records their residual, so the identity can be audited numerically.
"""
import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import named
from .divergences import (
    as_pair,
    as_points,
    as_weights,
    bregman,
    check_alpha,
    clamp_nonnegative,
    conjugate_jensen_multi,
    conjugate_jensen_pair,
    jensen_multi,
    jensen_pair,
    pair_centroids,
    symmetric_bregman,
)
from .errors import DomainError, MassMismatchError, ShapeError
from .generator import check_domain, eval_conjugate, eval_conjugate_prime

RESIDUAL_RTOL = 1e-9
INEQUALITY_SLACK = 1e-12
MASS_RTOL = 1e-9


class Theorem(str, enum.Enum):
    BASIC = "basic"
    SYMMETRIC_BREGMAN = "symmetric_bregman"
    F_DIVERGENCE = "f_divergence"


@dataclass
class InequalityCheck:
    name: str
    lhs: float
    rhs: float
    holds: bool
    margin: float

    @classmethod
    def greater_equal(cls, name, lhs, rhs):
        margin = float(lhs) - float(rhs)
        return cls(name, float(lhs), float(rhs), margin >= -INEQUALITY_SLACK, margin)

    def to_dict(self):
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
                "holds": self.holds, "margin": self.margin}


class BoundCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


@dataclass
class DecompositionReport:
    theorem: Theorem
    generator: str
    lhs: float
    jensen_term: float
    conjugate_jensen_term: float
    bregman_term: float
    centroid: np.ndarray
    dual_centroid_primal: np.ndarray
    lhs_alternate: Optional[float] = None
    inequality_checks: list = field(default_factory=list)

    @property
    def rhs(self):
        return self.jensen_term + self.conjugate_jensen_term + self.bregman_term

    @property
    def residual(self):
        return self.lhs - self.rhs

    def scale(self):
        return max(1.0, abs(self.lhs))

    def residual_ok(self, tol=RESIDUAL_RTOL):
        ok = abs(self.residual) <= tol * self.scale()
        if self.lhs_alternate is not None:
            ok = ok and abs(self.lhs - self.lhs_alternate) <= tol * self.scale()
        return ok

    @property
    def inequalities_hold(self):
        return all(c.holds for c in self.inequality_checks)

    def passed(self, tol=RESIDUAL_RTOL):
        return self.residual_ok(tol) and self.inequalities_hold

    def to_dict(self):
        return {
            "theorem": self.theorem.value,
            "generator": self.generator,
            "lhs": self.lhs,
            "lhs_alternate": self.lhs_alternate,
            "jensen_term": self.jensen_term,
            "conjugate_jensen_term": self.conjugate_jensen_term,
            "bregman_term": self.bregman_term,
            "residual": self.residual,
            "centroid": [float(v) for v in self.centroid],
            "dual_centroid_primal": [float(v) for v in self.dual_centroid_primal],
            "inequality_checks": [c.to_dict() for c in self.inequality_checks],
        }


def _term_checks(prefix, lhs, jensen, conj, breg):
    return [
        InequalityCheck.greater_equal(f"{prefix}:lhs>=jensen", lhs, jensen),
        InequalityCheck.greater_equal(f"{prefix}:lhs>=conjugate_jensen", lhs, conj),
        InequalityCheck.greater_equal(f"{prefix}:lhs>=bregman", lhs, breg),
    ]


def decompose_basic(g, w, points):
    """Weighted symmetric Bregman divergences to the centroid, split in three.

    ``points`` are N >= 2 primal scalars and ``w`` positive weights summing
    to one.  Both forms of the left-hand side are evaluated: the weighted
    symmetric Bregman sum and ``sum_v a_v F'(p_v)(p_v - c)``.
    """
    points = as_points(points, g, "points")
    if points.size < 2:
        raise ShapeError("the basic decomposition needs at least two points")
    w = as_weights(w, points.size)
    c = float(np.dot(w, points))
    ps = g.f_prime(points)
    cs_hat = float(np.dot(w, ps))
    c_hat = float(eval_conjugate_prime(g, cs_hat))

    lhs = float(np.dot(w, (ps - g.f_prime(c)) * (points - c)))
    lhs_alt = float(np.dot(w, ps * (points - c)))
    jensen = jensen_multi(g, w, points).value
    conj = conjugate_jensen_multi(g, w, points).value
    breg = bregman(g, [c], [c_hat]).value
    return DecompositionReport(
        Theorem.BASIC, g.name, lhs, jensen, conj, breg,
        centroid=np.array([c]), dual_centroid_primal=np.array([c_hat]),
        lhs_alternate=lhs_alt,
        inequality_checks=_term_checks("basic", lhs, jensen, conj, breg),
    )


def decompose_symmetric_bregman(g, alpha, p, q):
    """a(1-a) B_sym(P, Q) = J_a(P, Q) + J*_a(P*, Q*) + B(C, C_hat)."""
    alpha = check_alpha(alpha)
    p, q = as_pair(g, p, q)
    lhs = alpha * (1.0 - alpha) * symmetric_bregman(g, p, q).value
    jensen = jensen_pair(g, alpha, p, q).value
    conj = conjugate_jensen_pair(g, alpha, p, q).value
    c, c_hat = pair_centroids(g, alpha, p, q)
    breg = bregman(g, c, c_hat).value
    return DecompositionReport(
        Theorem.SYMMETRIC_BREGMAN, g.name, lhs, jensen, conj, breg,
        centroid=c, dual_centroid_primal=c_hat,
        inequality_checks=_term_checks("symmetric_bregman", lhs, jensen, conj, breg),
    )


def check_equal_mass(p, q, rtol=MASS_RTOL):
    sp, sq = float(np.sum(p)), float(np.sum(q))
    if abs(sp - sq) > rtol * abs(sq):
        raise MassMismatchError(f"total masses differ: sum(p) = {sp!r}, sum(q) = {sq!r}")
    return sq


def decompose_f_divergence(g, p, q):
    """(1/S) sum F'(p_i/q_i)(p_i - q_i) = D_F + D_F_hat + B_F(1, c_hat).

    ``p`` and ``q`` must be positive with equal total mass S.  The weights
    are q_i / S and the points are the likelihood ratios p_i / q_i.
    """
    p = as_points(p, None, "p")
    q = as_points(q, None, "q")
    if p.shape != q.shape:
        raise ShapeError(f"length mismatch: {p.size} vs {q.size}")
    if np.any(p <= 0.0) or np.any(q <= 0.0):
        raise DomainError("f-divergence decomposition needs strictly positive vectors")
    s = check_equal_mass(p, q)
    check_domain(g.domain, 1.0, "1", g.name)
    ratio = check_domain(g.domain, p / q, "p/q", g.name)
    w = q / s

    rs = g.f_prime(ratio)
    lhs = float(np.sum(rs * (p - q)) / s)
    lhs_alt = float(np.dot(w, (rs - g.f_prime(1.0)) * (ratio - 1.0)))

    d_f = clamp_nonnegative(np.dot(w, g.f(ratio)) - g.f(1.0), "D_F")
    cs_hat = float(np.dot(w, rs))
    d_hat = clamp_nonnegative(np.dot(w, eval_conjugate(g, rs)) - eval_conjugate(g, cs_hat),
                              "D_F_hat")
    c_hat = float(eval_conjugate_prime(g, cs_hat))
    breg = bregman(g, [1.0], [c_hat]).value
    return DecompositionReport(
        Theorem.F_DIVERGENCE, g.name, lhs, d_f, d_hat, breg,
        centroid=np.array([1.0]), dual_centroid_primal=np.array([c_hat]),
        lhs_alternate=lhs_alt,
        inequality_checks=_term_checks("f_divergence", lhs, d_f, d_hat, breg),
    )


def chi_square_kl_bound(p, q):
    """Neyman chi-square against exp(KL(q || p)) - 1 on unit-mass vectors."""
    p = as_points(p, None, "p")
    q = as_points(q, None, "q")
    for name, v in (("p", p), ("q", q)):
        if abs(float(np.sum(v)) - 1.0) > MASS_RTOL:
            raise MassMismatchError(f"{name} must have unit mass, got {float(np.sum(v))!r}")
    lhs = named.neyman_chi_square(p, q).value
    rhs = math.expm1(named.kl(q, p).value)
    return BoundCheck(lhs, rhs, lhs >= rhs - INEQUALITY_SLACK)


def lin_inequality_check(p, q):
    """J(p, q) / 4 against JS(p, q)."""
    lhs = 0.25 * named.jeffreys(p, q).value
    rhs = named.js_alpha(0.5, p, q).value
    return BoundCheck(lhs, rhs, lhs >= rhs - INEQUALITY_SLACK)
