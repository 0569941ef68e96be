"""Bregman, Jensen and f-divergences over pluggable convex generators,
with numerically audited three-term sum decompositions."""

__version__ = "0.1.0"

from .decomposition import (  # noqa: E402
    BoundCheck,
    DecompositionReport,
    InequalityCheck,
    Theorem,
    chi_square_kl_bound,
    decompose_basic,
    decompose_f_divergence,
    decompose_symmetric_bregman,
    lin_inequality_check,
)
from .divergences import (  # noqa: E402
    DivergenceValue,
    bregman,
    conjugate_jensen_multi,
    conjugate_jensen_pair,
    dual_map,
    jensen_multi,
    jensen_pair,
    symmetric_bregman,
)
from .errors import (  # noqa: E402
    ConvergenceError,
    DivergenceError,
    DomainError,
    MassMismatchError,
    NumericalError,
    ParameterError,
    ShapeError,
)
from .generator import (  # noqa: E402
    ConvexGenerator,
    GeneratorRegistry,
    Interval,
    builtin_generators,
    dual_generator,
    eval_conjugate,
    eval_conjugate_prime,
    eval_f,
    eval_f_prime,
    invert_derivative,
    numeric_clone,
    validate_generator,
)
