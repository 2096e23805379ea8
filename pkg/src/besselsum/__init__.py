"""Bessel-function lattice sums: brute-force oracle and small-a expansions."""

from .core import (
    ConvergenceClass,
    ConvergenceDomainError,
    DomainError,
    DoublePoleError,
    EvalResult,
    EvenPError,
    Kind,
    Method,
    NonConvergence,
    PoleError,
    SignedLogValue,
    SumParams,
    TruncationPolicy,
    classify_convergence,
    validate,
)

__version__ = "0.1.0"
