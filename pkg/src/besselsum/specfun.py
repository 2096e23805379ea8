"""Double-precision special-function kernels.

Gamma, Riemann zeta on the real line, Gauss 2F1, Kummer 1F1, Hermite
polynomials and the normalized Bessel functions (z/2)^-nu J_nu(z) and
(z/2)^-nu I_nu(z).  The Bessel kernels accept numpy arrays so that the
brute-force sums can be evaluated in bulk.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Union

import numpy as np

from .core import DomainError, NonConvergence, PoleError, SignedLogValue

ArrayLike = Union[float, np.ndarray]

EPS = 2.220446049250313e-16
GAMMA_MAX = 171.62437695630272
BESSEL_SWITCH = 25.0
_J_SERIES_MAX = 2.0
_HANKEL_TERMS = 30
_CHUNK = 1 << 16


def _is_nonpositive_integer(s: float) -> bool:
    return s <= 0 and s == math.floor(s)


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

def gamma(s: float) -> float:
    if _is_nonpositive_integer(s):
        raise PoleError(f"Gamma has a pole at s={s}")
    if s > GAMMA_MAX:
        raise OverflowError(f"Gamma({s}) overflows double precision")
    if s == math.floor(s) and s <= 171:
        return float(math.factorial(int(s) - 1))
    return math.gamma(s)


def rgamma(s: float) -> float:
    """1/Gamma(s), zero at the poles."""
    if _is_nonpositive_integer(s):
        return 0.0
    if s > GAMMA_MAX:
        return math.exp(-math.lgamma(s))
    return 1.0 / gamma(s)


def log_gamma(s: float) -> SignedLogValue:
    if s <= 0:
        raise DomainError(f"log_gamma requires s > 0, got {s}")
    return SignedLogValue(1, math.lgamma(s))


def signed_log_gamma(s: float) -> SignedLogValue:
    """Gamma(s) for any non-pole real s, in sign/log form."""
    if _is_nonpositive_integer(s):
        raise PoleError(f"Gamma has a pole at s={s}")
    if s > 0:
        return SignedLogValue(1, math.lgamma(s))
    sign = -1 if int(math.floor(s)) % 2 else 1
    return SignedLogValue(sign, math.lgamma(s))


# ---------------------------------------------------------------------------
# Riemann zeta
# ---------------------------------------------------------------------------

def _borwein_weights(n: int) -> list:
    """(d_k - d_n)/d_n for Borwein's eta algorithm, computed exactly."""
    d = []
    acc = Fraction(0)
    for i in range(n + 1):
        acc += Fraction(
            n * math.factorial(n + i - 1) * 4 ** i,
            math.factorial(n - i) * math.factorial(2 * i),
        )
        d.append(acc)
    return [float((d[k] - d[n]) / d[n]) for k in range(n)]


_BORWEIN_N = 32
_BORWEIN_W = _borwein_weights(_BORWEIN_N)


def _eta(s: float) -> float:
    """Dirichlet eta function for s > 0 by Borwein's alternating-series algorithm."""
    terms = [(-1) ** k * w * (k + 1.0) ** (-s) for k, w in enumerate(_BORWEIN_W)]
    return -math.fsum(terms)


def _sin_half_pi(s: float) -> float:
    """sin(pi s / 2) with the argument reduced exactly modulo 4."""
    r = math.fmod(s, 4.0)
    if r == math.floor(r):
        return (0.0, 1.0, 0.0, -1.0)[int(r) % 4]
    return math.sin(0.5 * math.pi * r)


def zeta(s: float) -> float:
    if s == 1.0:
        raise PoleError("zeta has a pole at s=1")
    if s == 0.0:
        return -0.5
    if s > 60.0:
        # zeta(s) - 1 < 1e-18 here; two explicit correction terms suffice
        return 1.0 + 2.0 ** (-s) * (1.0 + (2.0 / 3.0) ** s)
    if s > 0.0:
        # 1 - 2^{1-s} evaluated without cancellation near s = 1
        return _eta(s) / -math.expm1((1.0 - s) * math.log(2.0))
    if s == math.floor(s) and int(s) % 2 == 0:
        return 0.0
    # functional equation, assembled in log form
    sine = _sin_half_pi(s)
    g = signed_log_gamma(1.0 - s)
    z1 = zeta(1.0 - s)
    log_mag = (
        s * math.log(2.0)
        + (s - 1.0) * math.log(math.pi)
        + g.log_mag
        + math.log(abs(z1))
        + math.log(abs(sine))
    )
    sign = g.sign * (1 if z1 > 0 else -1) * (1 if sine > 0 else -1)
    return SignedLogValue(sign, log_mag).to_real()


# ---------------------------------------------------------------------------
# Gauss hypergeometric 2F1
# ---------------------------------------------------------------------------

class Hyp2F1Args(NamedTuple):
    alpha: float
    beta: float
    gamma_param: float
    z: float


def _terminating_degree(alpha: float, beta: float):
    degs = [int(-round(v)) for v in (alpha, beta) if _is_nonpositive_integer(v)]
    return min(degs) if degs else None


def hyp2f1_terms(alpha: float, beta: float, gamma_param: float, z: float, n: int) -> list:
    """The first n+1 terms of the 2F1 power series."""
    out = [1.0]
    t = 1.0
    for k in range(n):
        t *= (alpha + k) * (beta + k) / ((gamma_param + k) * (k + 1)) * z
        out.append(t)
    return out


def _series_2f1(alpha, beta, gamma_param, z, tol, max_terms):
    deg = _terminating_degree(alpha, beta)
    if deg is not None:
        return math.fsum(hyp2f1_terms(alpha, beta, gamma_param, z, deg))
    terms = [1.0]
    t = 1.0
    small = 0
    total = 1.0
    damp = max(1.0 - abs(z), 1e-300)
    for k in range(max_terms):
        t *= (alpha + k) * (beta + k) / ((gamma_param + k) * (k + 1)) * z
        terms.append(t)
        total += t
        if abs(t) <= tol * abs(total) * damp:
            small += 1
            if small >= 2:
                return math.fsum(terms)
        else:
            small = 0
    raise NonConvergence(
        f"2F1({alpha}, {beta}; {gamma_param}; {z}) did not converge in {max_terms} terms"
    )


def hyp2f1(
    alpha: float,
    beta: float,
    gamma_param: float,
    z: float,
    *,
    route: str = "auto",
    tol: float = EPS,
    max_terms: int = 200_000,
) -> float:
    """Gauss hypergeometric function 2F1(alpha, beta; gamma; z) for real z < 1.

    Terminating cases are summed as polynomials.  For z < 0 the default
    route applies the Pfaff transformation, which maps z to z/(z-1) in (0, 1).
    ``route`` may force "direct" (|z| < 1 required) or "pfaff".
    """
    if not z < 1.0:
        raise DomainError(f"2F1 requires z < 1, got z={z}")
    deg = _terminating_degree(alpha, beta)
    if _is_nonpositive_integer(gamma_param):
        if deg is None or deg > -gamma_param:
            raise PoleError(f"2F1 undefined for gamma={gamma_param}")
    if z == 0.0:
        return 1.0
    if route == "auto":
        route = "pfaff" if (z < 0 and deg is None) else "direct"
    if route == "direct":
        if deg is None and abs(z) >= 1.0:
            raise DomainError(f"direct 2F1 series needs |z| < 1, got z={z}")
        return _series_2f1(alpha, beta, gamma_param, z, tol, max_terms)
    if route != "pfaff":
        raise ValueError(f"unknown route {route!r}")
    w = z / (z - 1.0)
    # keep whichever Pfaff form terminates, if either does
    if _is_nonpositive_integer(gamma_param - alpha) and not _is_nonpositive_integer(gamma_param - beta):
        alpha, beta = beta, alpha
    return (1.0 - z) ** (-alpha) * _series_2f1(
        alpha, gamma_param - beta, gamma_param, w, tol, max_terms
    )


# ---------------------------------------------------------------------------
# Kummer 1F1 and Hermite
# ---------------------------------------------------------------------------

def kummer_1f1(alpha: float, gamma_param: float, z: float, *, max_terms: int = 100_000) -> float:
    if _is_nonpositive_integer(gamma_param):
        raise PoleError(f"1F1 undefined for gamma={gamma_param}")
    if z < 0:
        return math.exp(z) * kummer_1f1(gamma_param - alpha, gamma_param, -z, max_terms=max_terms)
    terms = [1.0]
    t = 1.0
    total = 1.0
    for k in range(max_terms):
        t *= (alpha + k) * z / ((gamma_param + k) * (k + 1))
        if t == 0.0:
            return math.fsum(terms)
        terms.append(t)
        total += t
        if k > z and abs(t) <= EPS * abs(total):
            return math.fsum(terms)
    raise NonConvergence(f"1F1({alpha}; {gamma_param}; {z}) did not converge")


class _HermiteRecurrence:
    """Physicists' Hermite values H_0(y), H_1(y), ... with a shared log scale."""

    def __init__(self, y: float):
        self.y = y
        self.m = 0
        self.h_prev = 0.0
        self.h = 1.0
        self.log_scale = 0.0

    def value(self) -> SignedLogValue:
        if self.h == 0.0:
            return SignedLogValue.zero()
        return SignedLogValue(1 if self.h > 0 else -1, math.log(abs(self.h)) + self.log_scale)

    def step(self) -> None:
        h_next = 2.0 * self.y * self.h - 2.0 * self.m * self.h_prev
        self.h_prev, self.h = self.h, h_next
        self.m += 1
        big = max(abs(self.h), abs(self.h_prev))
        if big > 1e150 or (0 < big < 1e-150):
            shift = math.log(big)
            self.h /= big
            self.h_prev /= big
            self.log_scale += shift


def hermite(n: int, y: float) -> SignedLogValue:
    if n < 0:
        raise DomainError(f"Hermite degree must be >= 0, got {n}")
    rec = _HermiteRecurrence(y)
    for _ in range(n):
        rec.step()
    return rec.value()


# ---------------------------------------------------------------------------
# Normalized Bessel functions
# ---------------------------------------------------------------------------

def _hankel_coefficients(nu: float, kmax: int) -> np.ndarray:
    """a_k(nu) = prod_{j<=k} (4nu^2 - (2j-1)^2) / (k! 8^k)."""
    mu = 4.0 * nu * nu
    out = np.empty(kmax + 1)
    c = 1.0
    out[0] = 1.0
    for k in range(1, kmax + 1):
        c *= (mu - (2 * k - 1) ** 2) / (k * 8.0)
        out[k] = c
    return out


def _truncated_asymptotic(coef: np.ndarray, z: np.ndarray, alternate: bool):
    """Per-element sums of coef[k] / z^k stopped before the terms start to grow.

    Returns the even-index and odd-index partial sums with signs applied as
    the Hankel (alternate=False: P and Q pieces) or the exponentially
    scaled I expansion (alternate=True: single sum in slot 0).
    """
    kmax = len(coef) - 1
    inv = 1.0 / z
    powers = inv[None, :] ** np.arange(kmax + 1)[:, None]
    terms = coef[:, None] * powers
    mag = np.abs(terms)
    keep = np.ones_like(mag, dtype=bool)
    keep[1:] = np.logical_and.accumulate(mag[1:] <= mag[:-1], axis=0)
    terms = np.where(keep, terms, 0.0)
    k = np.arange(kmax + 1)[:, None]
    if alternate:
        signs = np.where(k % 2 == 0, 1.0, -1.0)
        return (signs * terms).sum(axis=0), None
    # P = sum_{k even} (-1)^{k/2} b_k,  Q = sum_{k odd} (-1)^{(k-1)/2} b_k
    sp = np.where(k % 2 == 0, np.where((k // 2) % 2 == 0, 1.0, -1.0), 0.0)
    sq = np.where(k % 2 == 1, np.where(((k - 1) // 2) % 2 == 0, 1.0, -1.0), 0.0)
    return (sp * terms).sum(axis=0), (sq * terms).sum(axis=0)


def _series_coefficients(nu: float, kmax: int) -> np.ndarray:
    return np.array([rgamma(1.0 + nu + k) / math.factorial(k) for k in range(kmax + 1)])


def _horner(coef: np.ndarray, q: np.ndarray) -> np.ndarray:
    acc = np.full_like(q, coef[-1])
    for c in coef[-2::-1]:
        acc = acc * q + c
    return acc


def _j_power_series(nu: float, z: np.ndarray) -> np.ndarray:
    coef = _series_coefficients(nu, 30)
    return _horner(coef, -0.25 * z * z)


def _j_miller(nu: float, z: np.ndarray) -> np.ndarray:
    """Backward recurrence for F_mu(z) = (z/2)^-mu J_mu(z).

    F_{mu-1} = mu F_mu - (z^2/4) F_{mu+1}, normalized through
    1 = sum_k w_k (z/2)^{2k} F_{mu0+2k} with w_k = (mu0+2k) Gamma(mu0+k)/k!.
    """
    m = math.floor(nu)
    mu0 = nu - m
    zmax = float(np.max(z))
    top = int(zmax) + 40 + max(m, 0)
    top += top % 2
    q = 0.25 * z * z
    f_hi = np.zeros_like(z)
    f = np.ones_like(z)
    norm = np.zeros_like(z)
    target = np.zeros_like(z)
    log_q = np.log(q)

    def add_norm(j, fj):
        k = j // 2
        if k == 0:
            w = math.gamma(mu0 + 1.0)
            return w * fj
        log_w = math.log(mu0 + 2 * k) + math.lgamma(mu0 + k) - math.lgamma(k + 1)
        return np.exp(log_w + k * log_q) * fj

    j = top
    while True:
        if j % 2 == 0 and j >= 0:
            norm = norm + add_norm(j, f)
        if j == m:
            target = f.copy()
        if j <= min(m, 0):
            break
        f_lo = (mu0 + j) * f - q * f_hi
        f_hi, f = f, f_lo
        j -= 1
        big = np.abs(f) > 1e200
        if np.any(big):
            scale = np.where(big, 1e-200, 1.0)
            f, f_hi, norm, target = f * scale, f_hi * scale, norm * scale, target * scale
    return target / norm


def _j_hankel(nu: float, z: np.ndarray) -> np.ndarray:
    coef = _hankel_coefficients(nu, _HANKEL_TERMS)
    p, qq = _truncated_asymptotic(coef, z, alternate=False)
    chi = z - (0.5 * nu + 0.25) * math.pi
    j = np.sqrt(2.0 / (math.pi * z)) * (p * np.cos(chi) - qq * np.sin(chi))
    return j * np.exp(-nu * np.log(0.5 * z))


def _prepare(z: ArrayLike):
    arr = np.asarray(z, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < 0) or np.any(~np.isfinite(arr)):
        raise DomainError("Bessel kernels require finite z >= 0")
    return arr, scalar


def _finish(out: np.ndarray, scalar: bool):
    return float(out[0]) if scalar else out


def _chunked(fn, nu, arr, **kw):
    if arr.size <= _CHUNK:
        return fn(nu, arr, **kw)
    return np.concatenate([fn(nu, arr[i:i + _CHUNK], **kw) for i in range(0, arr.size, _CHUNK)])


def bessel_j_norm(nu: float, z: ArrayLike, *, branch: str = "auto") -> ArrayLike:
    """(z/2)^-nu J_nu(z) for real order nu and z >= 0.

    branch="series" forces the power-series / backward-recurrence route and
    branch="asymptotic" the large-argument Hankel expansion.
    """
    arr, scalar = _prepare(z)
    out = np.empty_like(arr)
    if branch == "auto":
        small = arr <= _J_SERIES_MAX
        mid = (arr > _J_SERIES_MAX) & (arr <= BESSEL_SWITCH)
        large = arr > BESSEL_SWITCH
    elif branch == "series":
        small = arr <= _J_SERIES_MAX
        mid = ~small
        large = np.zeros_like(small)
    elif branch == "asymptotic":
        if np.any(arr == 0):
            raise DomainError("asymptotic branch needs z > 0")
        small = mid = np.zeros(arr.shape, dtype=bool)
        large = np.ones(arr.shape, dtype=bool)
    else:
        raise ValueError(f"unknown branch {branch!r}")
    if np.any(small):
        out[small] = _j_power_series(nu, arr[small])
    if np.any(mid):
        out[mid] = _j_miller(nu, arr[mid])
    if np.any(large):
        out[large] = _chunked(_j_hankel, nu, arr[large])
    if not np.all(np.isfinite(out)):
        raise OverflowError("normalized J_nu not representable at these arguments")
    return _finish(out, scalar)


def _i_series_scaled(nu: float, z: np.ndarray) -> np.ndarray:
    coef = _series_coefficients(nu, 90)
    return _horner(coef, 0.25 * z * z) * np.exp(-z)


def _i_asymptotic_scaled(nu: float, z: np.ndarray) -> np.ndarray:
    coef = _hankel_coefficients(nu, _HANKEL_TERMS)
    s, _ = _truncated_asymptotic(coef, z, alternate=True)
    return s / np.sqrt(2.0 * math.pi * z) * np.exp(-nu * np.log(0.5 * z))


def bessel_i_norm(nu: float, z: ArrayLike, *, scaled: bool = False, branch: str = "auto") -> ArrayLike:
    """(z/2)^-nu I_nu(z); with scaled=True the result carries an extra e^{-z}."""
    arr, scalar = _prepare(z)
    out = np.empty_like(arr)
    if branch == "auto":
        large = arr > BESSEL_SWITCH
    elif branch == "series":
        large = np.zeros(arr.shape, dtype=bool)
    elif branch == "asymptotic":
        if np.any(arr == 0):
            raise DomainError("asymptotic branch needs z > 0")
        large = np.ones(arr.shape, dtype=bool)
    else:
        raise ValueError(f"unknown branch {branch!r}")
    small = ~large
    if np.any(small):
        out[small] = _i_series_scaled(nu, arr[small])
    if np.any(large):
        out[large] = _chunked(_i_asymptotic_scaled, nu, arr[large])
    if not scaled:
        if np.any(arr > 709.0):
            raise OverflowError("I_nu overflows; use scaled=True")
        out = out * np.exp(arr)
    return _finish(out, scalar)
