import math

import numpy as np
import pytest

from divdecomp.errors import ConvergenceError, DomainError, UnknownNameError
from divdecomp.generator import (
    NEGATIVE,
    POSITIVE,
    ConvexGenerator,
    GeneratorRegistry,
    conjugate_grid,
    domain_grid,
    dual_generator,
    eval_conjugate,
    eval_conjugate_prime,
    eval_f,
    eval_f_prime,
    invert_derivative,
    validate_generator,
)

from .conftest import ANALYTIC_NAMES


def broken_generator():
    # concave: F' = -x is decreasing
    return ConvexGenerator("broken", POSITIVE, lambda x: -0.5 * x * x, lambda x: -x, NEGATIVE)


class TestEvaluation:
    def test_eval_f(self, registry):
        assert eval_f(registry["neg_entropy"], 1.0) == 0.0
        assert eval_f(registry["burg_entropy"], 1.0) == 0.0
        # oracle: 0.5 ln 0.5 evaluated in mpmath at 40 digits
        assert eval_f(registry["neg_entropy"], 0.5) == pytest.approx(-0.34657359027997265, abs=1e-15)

    def test_eval_f_prime(self, registry):
        assert eval_f_prime(registry["neg_entropy"], 1.0) == 1.0
        assert eval_f_prime(registry["burg_entropy"], 2.0) == -0.5
        assert eval_f_prime(registry["half_square"], 3.0) == 3.0

    @pytest.mark.parametrize("suffix", ["", "_numeric"])
    def test_eval_conjugate(self, registry, suffix):
        assert eval_conjugate(registry["neg_entropy" + suffix], 1.0) == pytest.approx(1.0, abs=1e-12)
        assert eval_conjugate(registry["burg_entropy" + suffix], -1.0) == pytest.approx(-1.0, abs=1e-12)
        assert eval_conjugate(registry["half_square" + suffix], 2.0) == pytest.approx(2.0, abs=1e-12)

    def test_half_square_conjugate_against_grid_supremum(self, registry):
        # oracle: brute-force sup_x (2x - x^2/2) on a grid, refined around the best cell
        x = np.linspace(-10, 10, 200001)
        k = np.argmax(2 * x - 0.5 * x * x)
        x = np.linspace(x[k - 1], x[k + 1], 200001)
        sup = np.max(2 * x - 0.5 * x * x)
        for name in ("half_square", "half_square_numeric"):
            assert eval_conjugate(registry[name], 2.0) == pytest.approx(sup, abs=1e-9)

    @pytest.mark.parametrize("suffix", ["", "_numeric"])
    def test_eval_conjugate_prime(self, registry, suffix):
        assert eval_conjugate_prime(registry["neg_entropy" + suffix], 1.0) == pytest.approx(1.0, rel=1e-12)
        assert eval_conjugate_prime(registry["burg_entropy" + suffix], -0.8) == pytest.approx(1.25, rel=1e-12)
        assert eval_conjugate_prime(registry["half_square" + suffix], -4.0) == pytest.approx(-4.0, rel=1e-12)

    def test_burg_conjugate_prime_by_bisection(self, registry):
        # oracle: plain bisection on -1/x = -0.8 over [0.1, 10]
        lo, hi = 0.1, 10.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            lo, hi = (mid, hi) if -1.0 / mid < -0.8 else (lo, mid)
        assert eval_conjugate_prime(registry["burg_entropy_numeric"], -0.8) == pytest.approx(lo, rel=1e-12)

    @pytest.mark.parametrize("name,y,x", [
        ("neg_entropy", 1.0 + math.log(2.0), 2.0),
        ("burg_entropy", -2.0, 0.5),
        ("half_square", 0.0, 0.0),
    ])
    def test_invert_derivative(self, registry, name, y, x):
        g = registry[name]
        got = invert_derivative(g, y)
        assert got == pytest.approx(x, rel=1e-12, abs=1e-15)
        assert abs(g.f_prime(got) - y) <= max(1e-12, 1e-12 * abs(y))

    @pytest.mark.parametrize("x", [0.0, -1.0, np.inf, np.nan])
    def test_domain_is_open(self, registry, x):
        with pytest.raises(DomainError):
            eval_f(registry["neg_entropy"], x)
        with pytest.raises(DomainError):
            eval_f_prime(registry["burg_entropy"], x)

    def test_conjugate_domain_checked(self, registry):
        for name in ("burg_entropy", "burg_entropy_numeric"):
            with pytest.raises(DomainError):
                eval_conjugate(registry[name], 0.5)
            with pytest.raises(DomainError):
                eval_conjugate_prime(registry[name], 0.0)

    def test_vectorised(self, registry):
        g = registry["neg_entropy_numeric"]
        y = np.array([0.0, 1.0, 2.0])
        np.testing.assert_allclose(eval_conjugate(g, y), np.exp(y - 1.0), rtol=1e-12)


class TestValidation:
    @pytest.mark.parametrize("name", ["neg_entropy", "half_square", "burg_entropy_numeric"])
    def test_builtins_pass(self, registry, name):
        report = validate_generator(registry[name], 100)
        assert report.passed, report.checks

    def test_broken_generator_fails(self):
        report = validate_generator(broken_generator(), 100)
        assert not report.passed
        assert "monotone_derivative" in report.failed()
        assert "young_equality" in report.failed()

    def test_wrong_derivative_fails_finite_difference(self):
        g = ConvexGenerator("bad_fd", POSITIVE, lambda x: x * np.log(x), lambda x: np.log(x) + 1.1,
                            conjugate_domain=NEGATIVE)
        assert "finite_difference" in validate_generator(g, 50).failed()

    def test_samples_lower_bound(self, registry):
        with pytest.raises(ValueError):
            validate_generator(registry["neg_entropy"], 1)


class TestRegistry:
    def test_lookup(self, registry):
        assert registry["neg_entropy"].has_analytic_conjugate
        assert not registry["burg_entropy_numeric"].has_analytic_conjugate
        assert "nonexistent" not in registry
        with pytest.raises(UnknownNameError):
            registry["nonexistent"]

    def test_contents(self, registry):
        assert set(registry) == {"neg_entropy", "burg_entropy", "half_square",
                                 "neg_entropy_numeric", "burg_entropy_numeric",
                                 "half_square_numeric"}

    def test_registration_validates(self, registry):
        with pytest.raises(ValueError, match="failed validation"):
            registry.with_generator(broken_generator())
        injected = registry.with_generator(broken_generator(), validate=False)
        assert "broken" in injected and "broken" not in registry

    def test_duplicate_names_rejected(self, registry):
        with pytest.raises(ValueError, match="duplicate"):
            registry.with_generator(registry["neg_entropy"])

    def test_empty_registry(self):
        assert len(GeneratorRegistry()) == 0


class TestConjugateInvariants:
    def test_young_equality(self, gen):
        x = np.random.default_rng(1).uniform(0.05, 20.0, 1000)
        fx, fp = gen.f(x), gen.f_prime(x)
        err = np.abs(fx + eval_conjugate(gen, fp) - x * fp)
        assert np.all(err <= 1e-9 * np.maximum(1.0, np.abs(fx)))

    def test_inverse_relation(self, gen):
        x = np.random.default_rng(2).uniform(0.05, 20.0, 1000)
        back = eval_conjugate_prime(gen, gen.f_prime(x))
        assert np.all(np.abs(back - x) <= 1e-9 * np.maximum(1.0, np.abs(x)))

    @pytest.mark.parametrize("name", ANALYTIC_NAMES)
    def test_numeric_matches_analytic(self, registry, name):
        g, gn = registry[name], registry[name + "_numeric"]
        y = conjugate_grid(g, 200)
        a, n = eval_conjugate(g, y), eval_conjugate(gn, y)
        assert np.all(np.abs(a - n) <= 1e-8 * np.maximum(1.0, np.abs(a)))
        np.testing.assert_allclose(eval_conjugate_prime(gn, y), eval_conjugate_prime(g, y),
                                   rtol=1e-9)

    def test_finite_difference(self, gen):
        x = domain_grid(gen.domain, 200)
        h = 1e-6 * np.maximum(1.0, np.abs(x))
        fd = (gen.f(x + h) - gen.f(x - h)) / (2 * h)
        fp = gen.f_prime(x)
        assert np.all(np.abs(fp - fd) <= 1e-6 * np.maximum(1.0, np.abs(fp)))

    def test_conjugate_derivative_increasing_on_samples(self, gen):
        y = np.sort(conjugate_grid(gen, 100))
        assert np.all(np.diff(eval_conjugate_prime(gen, y)) > 0)

    def test_dual_generator_round_trip(self, gen):
        gs = dual_generator(gen)
        assert dual_generator(gs).domain == gen.domain
        x = np.array([0.3, 1.0, 7.0])
        np.testing.assert_allclose(gs.conjugate(x), gen.f(x))
        np.testing.assert_allclose(gs.f_prime(gen.f_prime(x)), x, rtol=1e-12)

    def test_numeric_inversion_failure_surfaces(self):
        with pytest.raises(ConvergenceError):
            invert_derivative(broken_generator(), -2.0)
