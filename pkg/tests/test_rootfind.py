import os
import subprocess
import sys

import numpy as np
import pytest

from divdecomp import _jit
from divdecomp.errors import ConvergenceError
from divdecomp.generator import BURG_ENTROPY, HALF_SQUARE, NEG_ENTROPY
from divdecomp.rootfind import interior_seed, invert_increasing

BACKENDS = ["numpy"] + (["numba"] if _jit.NUMBA_AVAILABLE else [])
CASES = [
    (NEG_ENTROPY, np.array([1.0 + np.log(2.0), -50.0, 40.0, 1.0, 0.3, -3.7])),
    (BURG_ENTROPY, np.array([-2.0, -0.8, -1e-8, -1e8, -3.3])),
    (HALF_SQUARE, np.array([0.0, -4.0, 1e6, -1e-9, 3.0])),
]


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("g,y", CASES, ids=lambda v: getattr(v, "name", ""))
def test_inverse_residual(backend, g, y):
    x = invert_increasing(g.f_prime, y, *g.domain, df=g.f_second, backend=backend)
    assert np.all(g.domain.contains(x))
    assert np.all(np.abs(g.f_prime(x) - y) <= np.maximum(1e-12, 1e-12 * np.abs(y)))


@pytest.mark.parametrize("g,y", CASES, ids=lambda v: getattr(v, "name", ""))
def test_backends_agree(g, y):
    ref = invert_increasing(g.f_prime, y, *g.domain, df=g.f_second, backend="numpy")
    for backend in BACKENDS:
        x = invert_increasing(g.f_prime, y, *g.domain, df=g.f_second, backend=backend)
        np.testing.assert_allclose(x, ref, rtol=1e-13, atol=0)


def test_without_derivative_uses_secant():
    y = np.array([-2.0, -0.8, -3.3])
    x = invert_increasing(BURG_ENTROPY.f_prime, y, 0.0, np.inf)
    np.testing.assert_allclose(x, -1.0 / y, rtol=1e-13)


def test_scalar_in_scalar_out():
    x = invert_increasing(HALF_SQUARE.f_prime, 0.0, -np.inf, np.inf)
    assert isinstance(x, float) and x == 0.0


def test_finite_interval():
    # F'(x) = tan(x) on (-pi/2, pi/2)
    y = np.array([-50.0, 0.0, 1.0, 1e4])
    x = invert_increasing(np.tan, y, -np.pi / 2, np.pi / 2,
                          df=lambda t: 1.0 / np.cos(t) ** 2)
    np.testing.assert_allclose(x, np.arctan(y), rtol=1e-12, atol=1e-15)


def test_unbracketable_raises():
    # exp(log x + 1 = -1e8) underflows: no representable root
    with pytest.raises(ConvergenceError):
        invert_increasing(NEG_ENTROPY.f_prime, -1e8, 0.0, np.inf, df=NEG_ENTROPY.f_second)


def test_decreasing_map_cannot_bracket():
    with pytest.raises(ConvergenceError):
        invert_increasing(lambda x: -x, -2.0, 0.0, np.inf)


@pytest.mark.parametrize("lo,hi,expected", [
    (0.0, np.inf, 1.0), (-np.inf, np.inf, 1.0), (-np.inf, 0.0, -1.0),
    (2.0, 4.0, 3.0), (5.0, np.inf, 6.0), (-np.inf, -3.0, -4.0),
])
def test_interior_seed(lo, hi, expected):
    assert interior_seed(lo, hi) == expected


def test_env_flag_forces_numpy():
    code = ("from divdecomp import _jit; from divdecomp.rootfind import _numba_pair;"
            "from divdecomp.generator import NEG_ENTROPY as g;"
            "print(_jit.NUMBA_AVAILABLE, _numba_pair(g.f_prime, g.f_second))")
    env = dict(os.environ, DIVDECOMP_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    assert out == ["False", "None"]


def test_uncompilable_callable_falls_back():
    calls = []

    def fp(x):
        calls.append(1)  # list mutation is not nopython-compatible
        return np.log(x) + 1.0

    x = invert_increasing(fp, 1.0 + np.log(2.0), 0.0, np.inf, df=lambda t: 1.0 / t)
    assert x == pytest.approx(2.0, rel=1e-13)
    assert calls
