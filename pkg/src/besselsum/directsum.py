"""Brute-force evaluation of S, T and S^mu with certified tail bounds.

Terms are generated in numpy blocks and accumulated with ``math.fsum``
(exactly rounded summation), so round-off does not grow with the number
of terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ConvergenceClass,
    DomainError,
    EvalResult,
    Kind,
    Method,
    NonConvergence,
    SumParams,
    TruncationPolicy,
    validate,
)
from .specfun import bessel_i_norm, bessel_j_norm, rgamma

_FIRST_BLOCK = 256
_MAX_BLOCK = 1 << 17
_TINY = 1e-300


@dataclass(frozen=True)
class TailBound:
    n_stop: int
    bound: float


def terms(params: SumParams, n: np.ndarray) -> np.ndarray:
    """Summands of the selected sum at the integer indices ``n``."""
    nu, a, x = params.nu, params.a, params.x
    t = a * np.asarray(n, dtype=float) ** params.p
    z = t * x
    if params.kind is Kind.T:
        # e^{-t} I(z) = e^{-t(1-x)} * (e^{-z} I(z))
        return np.exp(-t * (1.0 - x)) * bessel_i_norm(nu, z, scaled=True)
    f = bessel_j_norm(nu, z)
    if params.kind is Kind.SMU and params.mu_value != 0.0:
        return np.exp(-t + params.mu_value * np.log(0.5 * z)) * f
    return np.exp(-t) * f


def _upper_gamma_bound(s: float, lower: float) -> float:
    """Upper bound on the incomplete gamma integral from ``lower`` to infinity."""
    if lower <= 0:
        return math.gamma(s) if s > 0 else math.inf
    if s <= 1.0:
        return math.exp(-lower + (s - 1.0) * math.log(lower))
    if lower > s - 1.0:
        return math.exp(-lower + (s - 1.0) * math.log(lower)) * lower / (lower - (s - 1.0))
    return math.gamma(s)


def tail_bound(params: SumParams, n: int) -> float:
    """Certified bound on |sum_{m > n} term(m)|.

    Each summand is bounded by C e^{-u} u^mu with u = r m^p, using
    |(z/2)^-nu J_nu(z)| <= 1/Gamma(1+nu) and (z/2)^-nu I_nu(z) <= e^z/Gamma(1+nu)
    (both need nu >= -1/2).  For T the effective rate is r = a(1-x).
    The tail is then at most the first omitted summand plus the integral
    of the (eventually decreasing) envelope.
    """
    validate(params)
    if n < 1:
        raise DomainError(f"tail index must be >= 1, got {n}")
    nu, p, a, x = params.nu, params.p, params.a, params.x
    if nu < -0.5:
        raise DomainError(f"no certified Bessel bound for nu={nu} < -1/2")
    coef = rgamma(1.0 + nu)
    rate = a * (1.0 - x) if params.kind is Kind.T else a
    mu = params.mu_value if params.kind is Kind.SMU else 0.0
    if mu != 0.0:
        coef *= (0.5 * x) ** mu
    m = n + 1
    if mu == 0.0 and p == 1.0:
        return coef * math.exp(-rate * m) / -math.expm1(-rate)
    u = rate * m ** p
    if u < mu:
        # envelope still increasing: nothing certified from this index
        return math.inf
    first = math.exp(-u + (mu * math.log(u) if mu else 0.0))
    integral = _upper_gamma_bound(mu + 1.0 / p, u) * rate ** (-1.0 / p) / p
    return coef * (first + integral)


def _empirical_tail(block_terms: np.ndarray) -> float:
    return float(np.sum(np.abs(block_terms)))


def sum_direct(params: SumParams, policy: TruncationPolicy = TruncationPolicy()) -> EvalResult:
    """Sum the series term by term until a tail bound falls below tol*|value|."""
    validate(params)
    certified = params.nu >= -0.5
    blocks = []
    partials = []
    n_done = 0
    size = _FIRST_BLOCK
    while True:
        if n_done >= policy.max_direct_terms:
            raise NonConvergence(
                f"direct sum needs more than {policy.max_direct_terms} terms"
            )
        size = min(size, policy.max_direct_terms - n_done)
        n = np.arange(n_done + 1, n_done + size + 1, dtype=float)
        block = terms(params, n)
        blocks.append(block)
        partials.append(math.fsum(block))
        n_done += size
        total = math.fsum(partials)
        target = policy.tol * max(abs(total), _TINY)
        if certified:
            if tail_bound(params, n_done) <= target:
                break
        elif n_done > _FIRST_BLOCK and _empirical_tail(block) <= target:
            break
        size = min(2 * size, _MAX_BLOCK)

    allterms = np.concatenate(blocks)
    if not certified:
        # stop where the last doubling contributed nothing measurable
        half = n_done // 2
        value = math.fsum(allterms[:half])
        err = _empirical_tail(allterms[half:])
        return EvalResult(value, err, half, Method.DIRECT, ConvergenceClass.CONVERGENT, certified=False)

    # smallest n whose certified tail is within tolerance
    lo, hi = 1, n_done
    while lo < hi:
        mid = (lo + hi) // 2
        if tail_bound(params, mid) <= target:
            hi = mid
        else:
            lo = mid + 1
    n_stop = lo
    value = math.fsum(allterms[:n_stop])
    while tail_bound(params, n_stop) > policy.tol * max(abs(value), _TINY) and n_stop < n_done:
        n_stop += 1
        value = math.fsum(allterms[:n_stop])
    return EvalResult(
        value, tail_bound(params, n_stop), n_stop, Method.DIRECT, ConvergenceClass.CONVERGENT
    )
