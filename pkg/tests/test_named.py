import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divdecomp import divergences as dv
from divdecomp import named
from divdecomp.errors import DomainError, ParameterError, ShapeError

from .conftest import P, Q, rel_err

# mpmath oracles at 40 digits
KL_PQ = 0.14384103622589046
KL_QP = 0.13081203594113696
JEFFREYS = 0.27465307216702742
JS = 0.03382207556860523
HELLINGER_SQ = 0.034074173710931713
GEO_MIX_KL = 0.00076701876221991246
IS_1_08 = 0.026856448685790244
ALPHA_QUARTER_1_2 = 0.36377157062704487
KL_2_1 = 0.38629436111989062


@pytest.mark.parametrize("fn,args,expect", [
    (named.kl, (P, Q), KL_PQ),
    (named.kl, (Q, P), KL_QP),
    (named.kl, ([2.0], [1.0]), KL_2_1),
    (named.jeffreys, (P, Q), JEFFREYS),
    (named.js_alpha, (0.5, P, Q), JS),
    (named.hellinger_sq, (P, Q), HELLINGER_SQ),
    (named.alpha_divergence, (0.5, P, Q), 4 * HELLINGER_SQ),
    (named.alpha_divergence, (0.25, [1.0], [2.0]), ALPHA_QUARTER_1_2),
    (named.geometric_mixture_kl, (0.5, P, Q), GEO_MIX_KL),
    (named.neyman_chi_square, (P, Q), 0.25),
    (named.itakura_saito, (1.0, 0.8), IS_1_08),
])
def test_examples(fn, args, expect):
    res = fn(*args)
    assert res.value == pytest.approx(expect, abs=1e-12)
    assert res.generator_name is None


def test_kl_is_neg_entropy_bregman(registry, rng):
    for _ in range(100):
        p, q = rng.uniform(0.05, 20.0, (2, 5))
        assert rel_err(named.kl(p, q).value,
                       dv.bregman(registry["neg_entropy"], p, q).value) <= 1e-12


def test_jeffreys_is_symmetric_bregman(registry, rng):
    for _ in range(100):
        p, q = rng.uniform(0.05, 20.0, (2, 5))
        assert rel_err(named.jeffreys(p, q).value,
                       dv.symmetric_bregman(registry["neg_entropy"], p, q).value) <= 1e-12


def test_js_is_neg_entropy_jensen(registry, rng):
    for _ in range(100):
        p, q = rng.uniform(0.05, 20.0, (2, 5))
        a = rng.uniform(0.01, 0.99)
        assert rel_err(named.js_alpha(a, p, q).value,
                       dv.jensen_pair(registry["neg_entropy"], a, p, q).value) <= 1e-11


def test_itakura_saito_is_burg_bregman(registry):
    assert named.itakura_saito(1.0, 0.8).value == pytest.approx(
        dv.bregman(registry["burg_entropy"], [1.0], [0.8]).value, rel=1e-13)


def test_alpha_divergence_closed_form(rng):
    # the vector form (sum p^a q^(1-a) - a sum p - (1-a) sum q) / (a (a - 1))
    for _ in range(50):
        p, q = rng.uniform(0.05, 20.0, (2, 5))
        a = rng.uniform(0.05, 0.95)
        vec = (np.sum(p ** a * q ** (1 - a)) - a * p.sum() - (1 - a) * q.sum()) / (a * (a - 1))
        assert rel_err(named.alpha_divergence(a, p, q).value, vec) <= 1e-10


def test_alpha_divergence_limits(rng):
    p, q = rng.uniform(0.05, 20.0, (2, 5))
    assert named.alpha_divergence(1 - 1e-7, p, q).value == pytest.approx(named.kl(p, q).value,
                                                                         rel=1e-5)
    assert named.alpha_divergence(1e-7, p, q).value == pytest.approx(named.kl(q, p).value,
                                                                     rel=1e-5)


def test_alpha_divergence_is_scaled_conjugate_jensen(registry, rng):
    # neg_entropy has F*(y) = exp(y - 1), so its conjugate Jensen gap is a p + (1-a) q - p^a q^(1-a)
    for _ in range(50):
        p, q = rng.uniform(0.05, 20.0, (2, 5))
        a = rng.uniform(0.01, 0.99)
        assert rel_err(a * (1 - a) * named.alpha_divergence(a, p, q).value,
                       dv.conjugate_jensen_pair(registry["neg_entropy"], a, p, q).value) <= 1e-10


def test_geometric_mixture_kl_is_bregman_between_centroids(registry, rng):
    g = registry["neg_entropy"]
    for _ in range(50):
        p, q = rng.uniform(0.05, 20.0, (2, 5))
        a = rng.uniform(0.01, 0.99)
        c, c_hat = dv.pair_centroids(g, a, p, q)
        assert rel_err(named.geometric_mixture_kl(a, p, q).value,
                       dv.bregman(g, c, c_hat).value) <= 1e-10


def test_lin_inequality_example():
    assert 0.25 * JEFFREYS >= JS


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0.01, 50.0), min_size=1, max_size=8), st.data())
def test_hypothesis_named_nonnegative(ps, data):
    qs = data.draw(st.lists(st.floats(0.01, 50.0), min_size=len(ps), max_size=len(ps)))
    a = data.draw(st.floats(0.01, 0.99))
    for res in (named.kl(ps, qs), named.jeffreys(ps, qs), named.js_alpha(a, ps, qs),
                named.hellinger_sq(ps, qs), named.alpha_divergence(a, ps, qs),
                named.geometric_mixture_kl(a, ps, qs), named.neyman_chi_square(ps, qs)):
        assert res.value >= 0.0 and math.isfinite(res.value)


def test_input_errors():
    with pytest.raises(DomainError):
        named.kl([0.0, 1.0], [0.5, 0.5])
    with pytest.raises(ShapeError):
        named.hellinger_sq([1.0], [1.0, 2.0])
    with pytest.raises(ParameterError):
        named.js_alpha(1.0, P, Q)
    with pytest.raises(DomainError):
        named.itakura_saito(-1.0, 1.0)
