import numpy as np
import pytest

from divdecomp.generator import builtin_generators

BUILTIN_NAMES = list(builtin_generators())
ANALYTIC_NAMES = [n for n in BUILTIN_NAMES if builtin_generators()[n].has_analytic_conjugate]

# Worked-example vectors used throughout.
P = np.array([0.5, 0.5])
Q = np.array([0.25, 0.75])


@pytest.fixture(scope="session")
def registry():
    return builtin_generators()


@pytest.fixture(params=BUILTIN_NAMES)
def gen(request, registry):
    return registry[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def rel_err(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))
