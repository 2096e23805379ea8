"""Shared value types, error classes and parameter validation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

# exp() overflows double precision just above this
MAX_LOG = math.log(1.7976931348623157e308)
EVEN_TOL = 1e-12


class DomainError(ValueError):
    """A parameter lies outside the region where an operation is defined."""


class PoleError(DomainError):
    pass


class EvenPError(DomainError):
    pass


class ConvergenceDomainError(DomainError):
    """The requested convergent series diverges at these parameters."""


class DoublePoleError(DomainError):
    pass


class NonConvergence(RuntimeError):
    pass


class Kind(str, enum.Enum):
    S = "S"
    T = "T"
    SMU = "Smu"


class Method(str, enum.Enum):
    DIRECT = "Direct"
    EXPANSION = "Expansion"
    CLOSED_FORM = "ClosedForm"


class ConvergenceClass(str, enum.Enum):
    CONVERGENT = "Convergent"
    CONDITIONALLY_CONVERGENT = "ConditionallyConvergent"
    ASYMPTOTIC = "Asymptotic"
    EXPONENTIALLY_SMALL = "ExponentiallySmall"


@dataclass(frozen=True)
class SumParams:
    """One instance of the sums S, T or S^mu.

    ``mu=None`` means the plain sum (mu = 0).
    """

    nu: float
    p: float
    a: float
    x: float
    mu: Optional[float] = None
    kind: Kind = Kind.S

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))

    @property
    def phi(self) -> float:
        return math.atan(self.x)

    @property
    def mu_value(self) -> float:
        return 0.0 if self.mu is None else float(self.mu)

    def with_(self, **changes) -> "SumParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class TruncationPolicy:
    tol: float = 1e-12
    max_terms: int = 10_000
    optimal_truncation: bool = True
    # cap for brute-force summation, which needs O(a^{-1/p}) terms
    max_direct_terms: int = 10_000_000

    def __post_init__(self):
        if not (0.0 < self.tol < 1.0):
            raise DomainError(f"tol must lie in (0, 1), got {self.tol}")
        if self.max_terms < 1 or self.max_direct_terms < 1:
            raise DomainError("max_terms must be >= 1")


@dataclass(frozen=True)
class EvalResult:
    value: float
    error_estimate: float
    terms_used: int
    method: Method
    convergence: ConvergenceClass
    certified: bool = True

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "terms_used": self.terms_used,
            "method": self.method.value,
            "convergence_class": self.convergence.value,
        }


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as sign * exp(log_mag)."""

    sign: int
    log_mag: float = 0.0

    @classmethod
    def from_real(cls, value: float) -> "SignedLogValue":
        if value == 0.0:
            return cls(0, -math.inf)
        return cls(1 if value > 0 else -1, math.log(abs(value)))

    @classmethod
    def zero(cls) -> "SignedLogValue":
        return cls(0, -math.inf)

    def __mul__(self, other) -> "SignedLogValue":
        if not isinstance(other, SignedLogValue):
            other = SignedLogValue.from_real(float(other))
        if self.sign == 0 or other.sign == 0:
            return SignedLogValue.zero()
        return SignedLogValue(self.sign * other.sign, self.log_mag + other.log_mag)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "SignedLogValue":
        if not isinstance(other, SignedLogValue):
            other = SignedLogValue.from_real(float(other))
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero SignedLogValue")
        if self.sign == 0:
            return SignedLogValue.zero()
        return SignedLogValue(self.sign * other.sign, self.log_mag - other.log_mag)

    def __neg__(self) -> "SignedLogValue":
        return SignedLogValue(-self.sign, self.log_mag)

    def __abs__(self) -> "SignedLogValue":
        return SignedLogValue(abs(self.sign), self.log_mag)

    def __pow__(self, n: int) -> "SignedLogValue":
        if self.sign == 0:
            return SignedLogValue(1, 0.0) if n == 0 else SignedLogValue.zero()
        return SignedLogValue(self.sign ** n, self.log_mag * n)

    def to_real(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log_mag > MAX_LOG:
            raise OverflowError(
                f"magnitude exp({self.log_mag:.6g}) exceeds double precision"
            )
        return self.sign * math.exp(self.log_mag)

    def __float__(self) -> float:
        return self.to_real()


def is_even_integer(p: float) -> bool:
    m = round(p / 2.0)
    return m >= 1 and abs(p - 2.0 * m) < EVEN_TOL


def is_integer(v: float, tol: float = EVEN_TOL) -> bool:
    return abs(v - round(v)) < tol


def s_threshold(x: float) -> float:
    """Largest a for which the p=1 residue series of S converges."""
    return 2.0 * math.pi / math.sqrt(1.0 + x * x)


def t_threshold(x: float) -> float:
    return 2.0 * math.pi / (1.0 + x)


def validate(params: SumParams) -> SumParams:
    for name in ("nu", "p", "a", "x"):
        v = getattr(params, name)
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v}")
    if params.p <= 0:
        raise DomainError(f"p must be > 0, got p={params.p}")
    if params.a <= 0:
        raise DomainError(f"a must be > 0, got a={params.a}")
    if params.x <= 0:
        raise DomainError(f"x must be > 0, got x={params.x}")
    if params.kind is Kind.T and not params.x < 1.0:
        raise DomainError(f"kind=T requires x in (0,1), got x={params.x}")
    if params.mu is not None and not math.isfinite(params.mu):
        raise DomainError(f"mu must be finite, got {params.mu}")
    if params.kind is not Kind.SMU and params.mu not in (None, 0, 0.0):
        raise DomainError(f"mu is only meaningful for kind=Smu, got kind={params.kind.value}")
    return params


def classify_convergence(params: SumParams) -> ConvergenceClass:
    """Convergence character of the small-a expansion for these parameters."""
    validate(params)
    p, a, x = params.p, params.a, params.x
    if is_even_integer(p):
        if params.kind is Kind.SMU and not is_integer(params.mu_value):
            # residue series of S^mu at p=2 survives unless mu is an integer
            return ConvergenceClass.ASYMPTOTIC
        return ConvergenceClass.EXPONENTIALLY_SMALL
    if p < 1.0 and abs(p - 1.0) >= EVEN_TOL:
        return ConvergenceClass.CONVERGENT
    if abs(p - 1.0) < EVEN_TOL:
        limit = t_threshold(x) if params.kind is Kind.T else s_threshold(x)
        if a < limit:
            return ConvergenceClass.CONDITIONALLY_CONVERGENT
        return ConvergenceClass.ASYMPTOTIC
    return ConvergenceClass.ASYMPTOTIC
