"""Strictly convex scalar generators and their Legendre conjugates.

A :class:`ConvexGenerator` bundles F, F' and (optionally) the closed-form
conjugate F* and its derivative. When the conjugate is missing it is
computed numerically: for a dual coordinate y the maximiser of
``x*y - F(x)`` is the unique x with F'(x) = y, found by
:func:`divdecomp.rootfind.invert_increasing`.
"""
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import ConvergenceError, DomainError, UnknownNameError
from .rootfind import invert_increasing

YOUNG_RTOL = 1e-9
INVERSE_RTOL = 1e-9
FD_RTOL = 1e-6
FD_STEP = 1e-6


class Interval(NamedTuple):
    """Open real interval ``(lower, upper)``; bounds may be infinite."""

    lower: float
    upper: float

    def contains(self, x):
        x = np.asarray(x, dtype=np.float64)
        return (x > self.lower) & (x < self.upper)

    def __str__(self):
        return f"({self.lower:g}, {self.upper:g})"


REALS = Interval(-np.inf, np.inf)
POSITIVE = Interval(0.0, np.inf)
NEGATIVE = Interval(-np.inf, 0.0)


@dataclass(frozen=True)
class ConvexGenerator:
    """A differentiable, strictly convex function of one real variable.

    ``f``, ``f_prime`` and the optional conjugate callables must accept
    numpy arrays elementwise.  ``f_second`` is optional and only used to
    speed up numeric inversion of F'.
    """

    name: str
    domain: Interval
    f: Callable
    f_prime: Callable
    conjugate_domain: Interval
    conjugate: Optional[Callable] = None
    conjugate_prime: Optional[Callable] = None
    f_second: Optional[Callable] = None
    description: str = field(default="", compare=False)

    @property
    def has_analytic_conjugate(self):
        return self.conjugate is not None and self.conjugate_prime is not None


def _as_float(x):
    arr = np.asarray(x, dtype=np.float64)
    return float(arr) if arr.ndim == 0 else arr


def check_domain(interval, x, what="x", generator=None):
    """Raise DomainError unless every entry of ``x`` lies strictly inside ``interval``."""
    arr = np.asarray(x, dtype=np.float64)
    inside = interval.contains(arr)
    if not np.all(inside):
        bad = arr[~inside] if arr.ndim else arr
        owner = f" of {generator}" if generator else ""
        raise DomainError(
            f"{what} = {np.ravel(bad)[:5].tolist()} outside open domain{owner} {interval}"
        )
    return arr


def eval_f(g, x):
    """F(x) for x strictly inside the domain."""
    arr = check_domain(g.domain, x, "x", g.name)
    return _as_float(g.f(arr))


def eval_f_prime(g, x):
    """Dual coordinate x* = F'(x)."""
    arr = check_domain(g.domain, x, "x", g.name)
    return _as_float(g.f_prime(arr))


def invert_derivative(g, y, backend=None):
    """The unique x in the domain with F'(x) = y.

    Raises DomainError if ``y`` is outside ``g.conjugate_domain`` and
    ConvergenceError if no bracket is found.
    """
    arr = check_domain(g.conjugate_domain, y, "y", g.name)
    x = invert_increasing(g.f_prime, arr, g.domain.lower, g.domain.upper,
                          df=g.f_second, backend=backend)
    if not np.all(g.domain.contains(x)):
        raise ConvergenceError(f"inversion of F' for {g.name} left the domain")
    return x


def eval_conjugate(g, y):
    """F*(y), closed form when available, otherwise ``x̂·y - F(x̂)``."""
    arr = check_domain(g.conjugate_domain, y, "y", g.name)
    if g.conjugate is not None:
        return _as_float(g.conjugate(arr))
    xh = invert_derivative(g, arr)
    return _as_float(xh * arr - g.f(xh))


def eval_conjugate_prime(g, y):
    """(F*)'(y), i.e. the x with F'(x) = y."""
    arr = check_domain(g.conjugate_domain, y, "y", g.name)
    if g.conjugate_prime is not None:
        return _as_float(g.conjugate_prime(arr))
    return _as_float(invert_derivative(g, arr))


def domain_grid(interval, n):
    """A deterministic grid of ``n`` points well inside an open interval."""
    lo, hi = interval
    if np.isfinite(lo) and np.isfinite(hi):
        return lo + (hi - lo) * np.linspace(0.01, 0.99, n)
    if np.isfinite(lo):
        return lo + np.geomspace(1e-2, 1e2, n)
    if np.isfinite(hi):
        return hi - np.geomspace(1e2, 1e-2, n)
    return np.linspace(-10.0, 10.0, n)


def conjugate_grid(g, n):
    """Dual coordinates obtained by mapping :func:`domain_grid` through F'."""
    return np.asarray(g.f_prime(domain_grid(g.domain, n)), dtype=np.float64)


def dual_generator(g):
    """The generator whose function is F* (and whose conjugate is F again)."""
    def f_second(y):
        return 1.0 / g.f_second(eval_conjugate_prime(g, y))

    return ConvexGenerator(
        name=f"{g.name}*",
        domain=g.conjugate_domain,
        f=lambda y: eval_conjugate(g, y),
        f_prime=lambda y: eval_conjugate_prime(g, y),
        conjugate_domain=g.domain,
        conjugate=g.f,
        conjugate_prime=g.f_prime,
        f_second=f_second if g.f_second is not None else None,
        description=f"convex conjugate of {g.name}",
    )


def numeric_clone(g, name=None):
    """Copy of ``g`` with the analytic conjugate removed."""
    return replace(g, name=name or f"{g.name}_numeric", conjugate=None,
                   conjugate_prime=None,
                   description=f"{g.description} (numeric conjugate)".strip())


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    worst_point: Optional[float] = None
    message: str = ""


@dataclass
class ValidationReport:
    generator: str
    samples: int
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failed(self):
        return [c.name for c in self.checks if not c.passed]


def _worst(residual, points):
    residual = np.asarray(residual, dtype=np.float64)
    if not np.all(np.isfinite(residual)):
        k = int(np.flatnonzero(~np.isfinite(residual))[0])
        return np.inf, float(points[k])
    k = int(np.argmax(residual))
    return float(residual[k]), float(points[k])


def validate_generator(g, samples=100):
    """Check monotonicity of F', F' against finite differences, Young's
    equality and the inverse relation on a deterministic grid.

    Failures are reported, never raised.
    """
    if samples < 2:
        raise ValueError("samples must be at least 2")
    xs = domain_grid(g.domain, samples)
    checks = []

    with np.errstate(all="ignore"):
        fp = np.asarray(g.f_prime(xs), dtype=np.float64)
        steps = np.diff(fp)
        k = int(np.argmin(steps))
        # worst = smallest increment of F' between neighbouring grid points
        checks.append(CheckResult("monotone_derivative", bool(np.all(steps > 0)),
                                  float(steps[k]), float(xs[k])))

        h = FD_STEP * np.maximum(1.0, np.abs(xs))
        fd = (g.f(xs + h) - g.f(xs - h)) / (2.0 * h)
        err = np.abs(fp - fd) / np.maximum(1.0, np.abs(fp))
        worst, at = _worst(err, xs)
        checks.append(CheckResult("finite_difference", worst <= FD_RTOL, worst, at))

    try:
        fx = np.asarray(g.f(xs), dtype=np.float64)
        young = np.abs(fx + eval_conjugate(g, fp) - xs * fp) / np.maximum(1.0, np.abs(fx))
        worst, at = _worst(young, xs)
        checks.append(CheckResult("young_equality", worst <= YOUNG_RTOL, worst, at))
    except (ConvergenceError, DomainError) as exc:
        checks.append(CheckResult("young_equality", False, np.inf, None, str(exc)))

    try:
        back = eval_conjugate_prime(g, fp)
        inv = np.abs(back - xs) / np.maximum(1.0, np.abs(xs))
        worst, at = _worst(inv, xs)
        checks.append(CheckResult("inverse_relation", worst <= INVERSE_RTOL, worst, at))
    except (ConvergenceError, DomainError) as exc:
        checks.append(CheckResult("inverse_relation", False, np.inf, None, str(exc)))

    return ValidationReport(g.name, samples, checks)


class GeneratorRegistry(Mapping):
    """Immutable name -> ConvexGenerator mapping."""

    def __init__(self, generators=(), validate=True):
        self._items = {}
        for g in generators:
            self._add(g, validate)

    def _add(self, g, validate):
        if g.name in self._items:
            raise ValueError(f"duplicate generator name {g.name!r}")
        if validate:
            report = validate_generator(g)
            if not report.passed:
                raise ValueError(f"generator {g.name!r} failed validation: {report.failed()}")
        self._items[g.name] = g

    def __getitem__(self, name):
        try:
            return self._items[name]
        except KeyError:
            raise UnknownNameError(f"unknown generator {name!r}; "
                                   f"known: {', '.join(self._items)}") from None

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def with_generator(self, g, validate=True):
        """A new registry with ``g`` added."""
        out = GeneratorRegistry(self._items.values(), validate=False)
        out._add(g, validate)
        return out


# Builtin generators.  Plain functions (not lambdas) so numba can compile
# them for the inversion kernel.

def _xlogx(x):
    return x * np.log(x)


def _xlogx_prime(x):
    return np.log(x) + 1.0


def _xlogx_second(x):
    return 1.0 / x


def _xlogx_conj(y):
    return np.exp(y - 1.0)


def _neglog(x):
    return -np.log(x)


def _neglog_prime(x):
    return -1.0 / x


def _neglog_second(x):
    return 1.0 / (x * x)


def _neglog_conj(y):
    return -np.log(-y) - 1.0


def _neglog_conj_prime(y):
    return -1.0 / y


def _half_square(x):
    return 0.5 * x * x


def _identity(x):
    return x * 1.0


def _one(x):
    return x * 0.0 + 1.0


NEG_ENTROPY = ConvexGenerator(
    name="neg_entropy", domain=POSITIVE, f=_xlogx, f_prime=_xlogx_prime,
    f_second=_xlogx_second, conjugate=_xlogx_conj, conjugate_prime=_xlogx_conj,
    conjugate_domain=REALS, description="F(x) = x log x",
)

BURG_ENTROPY = ConvexGenerator(
    name="burg_entropy", domain=POSITIVE, f=_neglog, f_prime=_neglog_prime,
    f_second=_neglog_second, conjugate=_neglog_conj, conjugate_prime=_neglog_conj_prime,
    conjugate_domain=NEGATIVE, description="F(x) = -log x",
)

HALF_SQUARE = ConvexGenerator(
    name="half_square", domain=REALS, f=_half_square, f_prime=_identity,
    f_second=_one, conjugate=_half_square, conjugate_prime=_identity,
    conjugate_domain=REALS, description="F(x) = x^2 / 2",
)

_BUILTINS = None


def builtin_generators():
    """Registry of the builtin generators and their numeric-conjugate clones."""
    global _BUILTINS
    if _BUILTINS is None:
        base = [NEG_ENTROPY, BURG_ENTROPY, HALF_SQUARE]
        _BUILTINS = GeneratorRegistry(base + [numeric_clone(g) for g in base])
    return _BUILTINS
