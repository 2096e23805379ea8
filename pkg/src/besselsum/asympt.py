"""Ratio checks of large-k estimates for the terminating 2F1 polynomials.

"Exact" values come from rational arithmetic on the terminating series;
double precision loses roughly 2^k to cancellation at these degrees.
The complex-parameter 2F1 needed by the remainder profile is evaluated
with mpmath and used nowhere else.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import mpmath

from .core import DomainError, NonConvergence
from .specfun import signed_log_gamma

NODE_SIN = 0.1


@dataclass(frozen=True)
class AsymptoticCheck:
    k: int
    exact: float
    estimate: float
    ratio: float
    node: bool = False
    t: Optional[float] = None


def exact_terminating_2f1(k: int, shift: float, nu: float, z: float) -> float:
    """2F1(-k, -k + shift; 1+nu; z) summed exactly in rationals, rounded once."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    b = Fraction(-k) + Fraction(shift)
    c = 1 + Fraction(nu)
    zf = Fraction(z)
    term = Fraction(1)
    total = Fraction(1)
    for j in range(k):
        den = (c + j) * (j + 1)
        if den == 0:
            raise DomainError(f"1+nu={float(c)} hits a pole of 2F1")
        term = term * (j - k) * (b + j) * zf / den
        total += term
    return float(total)


def _log_gamma_signed(s: float):
    g = signed_log_gamma(s)
    return g.log_mag, float(g.sign)


def _neg_parts(k: int, nu: float, x: float):
    phi = math.atan(x)
    lg, sg = _log_gamma_signed(1.0 + nu)
    log_mag = (
        lg
        - 0.5 * math.log(math.pi)
        + (k + 0.5 * nu + 0.75) * math.log1p(x * x)
        - (nu + 0.5) * math.log(x * k)
    )
    s = math.sin((2 * k + nu + 1.5) * phi - 0.5 * math.pi * nu + 0.25 * math.pi)
    return sg, log_mag, s


def hyp_largek_neg_estimate(k: int, nu: float, x: float) -> float:
    """Leading behaviour of 2F1(-k, -k-1/2; 1+nu; -x^2) for large k."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if x <= 0:
        raise DomainError(f"x must be > 0, got {x}")
    sg, log_mag, s = _neg_parts(k, nu, x)
    return sg * s * math.exp(log_mag)


def hyp_largek_pos_estimate(k: int, nu: float, x: float) -> float:
    """Leading behaviour of 2F1(-k, -k-1/2; 1+nu; x^2) for large k, 0 < x < 1."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x}")
    lg, sg = _log_gamma_signed(1.0 + nu)
    log_mag = (
        lg
        - math.log(2.0 * math.sqrt(math.pi))
        + (2 * k + nu + 1.5) * math.log1p(x)
        - (nu + 0.5) * math.log(x * k)
    )
    return sg * math.exp(log_mag)


def _ratio(exact: float, estimate: float) -> float:
    return exact / estimate if estimate != 0.0 else math.inf


def neg_checks(nu: float, x: float, ks: Iterable[int]) -> list:
    out = []
    for k in ks:
        est = hyp_largek_neg_estimate(k, nu, x)
        ex = exact_terminating_2f1(k, -0.5, nu, -x * x)
        _, _, s = _neg_parts(k, nu, x)
        out.append(AsymptoticCheck(k, ex, est, _ratio(ex, est), node=abs(s) < NODE_SIN))
    return out


def pos_checks(nu: float, x: float, ks: Iterable[int]) -> list:
    out = []
    for k in ks:
        est = hyp_largek_pos_estimate(k, nu, x)
        ex = exact_terminating_2f1(k, -0.5, nu, x * x)
        out.append(AsymptoticCheck(k, ex, est, _ratio(ex, est)))
    return out


def median_deviation(checks: Sequence[AsymptoticCheck]) -> float:
    """Median |ratio-1| over non-node checks (nan if every point is a node)."""
    devs = [abs(c.ratio - 1.0) for c in checks if not c.node]
    return statistics.median(devs) if devs else math.nan


def remainder_bound_profile(
    N: int,
    nu: float,
    x: float,
    t_grid: Iterable[float],
    *,
    envelope: str = "symmetric",
) -> list:
    """|2F1(-N+it/2, -N+1/2+it/2; 1+nu; -x^2)| against its growth envelope.

    The modulus is even in t.  envelope="symmetric" uses e^{phi|t|};
    "literal" uses e^{-phi t}, which only bounds the t <= 0 half.
    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if x <= 0:
        raise DomainError(f"x must be > 0, got {x}")
    if envelope not in ("symmetric", "literal"):
        raise ValueError(f"unknown envelope {envelope!r}")
    phi = math.atan(x)
    out = []
    with mpmath.workdps(30):
        for t in t_grid:
            alpha = mpmath.mpc(-N, 0.5 * t)
            beta = mpmath.mpc(-N + 0.5, 0.5 * t)
            try:
                val = mpmath.hyp2f1(alpha, beta, 1 + mpmath.mpf(nu), -mpmath.mpf(x) ** 2)
            except mpmath.libmp.NoConvergence as exc:
                raise NonConvergence(f"complex 2F1 failed at t={t}") from exc
            exact = float(abs(val))
            expo = phi * abs(t) if envelope == "symmetric" else -phi * t
            est = math.exp(
                N * math.log1p(x * x) + expo - (0.5 * nu + 0.25) * math.log(N * N + 0.25 * t * t)
            )
            out.append(AsymptoticCheck(N, exact, est, _ratio(exact, est), t=float(t)))
    return out


def fitted_constant(checks: Sequence[AsymptoticCheck]) -> float:
    """Smallest K with exact <= K * estimate on the grid."""
    return max(c.ratio for c in checks)
