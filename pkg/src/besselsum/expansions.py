"""Small-a expansions of S, T and S^mu obtained from their Mellin-Barnes form.

Every residue series is assembled term by term in sign/log form, because
Gamma(1+kp) and the hypergeometric polynomials overflow long before the
terms they multiply do.  Series flagged as asymptotic are cut at their
smallest term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

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
    SignedLogValue,
    SumParams,
    TruncationPolicy,
    classify_convergence,
    is_even_integer,
    is_integer,
    s_threshold,
    t_threshold,
    validate,
)
from .specfun import (
    EPS,
    _HermiteRecurrence,
    hyp2f1,
    hyp2f1_terms,
    rgamma,
    signed_log_gamma,
    zeta,
)

_LOG_PI = math.log(math.pi)
_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class ExpansionTermLog:
    k: int
    term: SignedLogValue
    # log of a majorant of |term| (absolute polynomial coefficients)
    log_bound: float = -math.inf


def _poly_2f1(alpha: float, beta: float, gamma_param: float, z: float):
    """Terminating 2F1 and the sum of the absolute values of its terms."""
    deg = min(int(-round(v)) for v in (alpha, beta) if v <= 0 and v == math.floor(v))
    t = hyp2f1_terms(alpha, beta, gamma_param, z, deg)
    return math.fsum(t), math.fsum(abs(v) for v in t)


def _sin_half_pi_exact(v: float) -> float:
    """sin(pi v / 2), exactly 0 or +-1 when v is (numerically) an integer."""
    if is_integer(v):
        return (0.0, 1.0, 0.0, -1.0)[int(round(v)) % 4]
    return math.sin(0.5 * math.pi * math.fmod(v, 4.0))


def _log_abs(v: float) -> float:
    return math.log(abs(v)) if v != 0.0 else -math.inf


def _sign(v: float) -> int:
    return (v > 0) - (v < 0)


# ---------------------------------------------------------------------------
# Series summation with the truncation policy
# ---------------------------------------------------------------------------

@dataclass
class _SeriesSum:
    total: float
    error: float
    terms_used: int
    abs_sum: float


def _sum_residues(
    terms: Iterator[ExpansionTermLog],
    base: float,
    policy: TruncationPolicy,
    asymptotic: bool,
) -> _SeriesSum:
    """Accumulate residue terms on top of ``base``.

    Convergent series stop once a term's majorant falls below tol*|sum|.
    Asymptotic series additionally stop before a term that exceeds both
    of its two nonzero predecessors (onset of divergence); the first
    omitted term is then the error estimate.
    """
    acc = [base]
    abs_sum = abs(base)
    recent: list = []
    used = 0
    terms = iter(terms)
    for item in terms:
        if item.k > policy.max_terms:
            break
        if item.term.sign == 0:
            used = item.k
            continue
        mag = item.term.log_mag
        if asymptotic and policy.optimal_truncation and len(recent) >= 2 and mag >= max(recent[-2:]):
            return _SeriesSum(math.fsum(acc), math.exp(mag), used, abs_sum)
        current = abs(math.fsum(acc))
        bound = max(item.log_bound, mag)
        if current > 0 and bound <= math.log(policy.tol * current):
            if asymptotic:
                err = _decreasing_tail(mag, terms, math.log(EPS * current))
            else:
                err = math.exp(bound) + 4 * EPS * abs_sum
            return _SeriesSum(math.fsum(acc), err, used, abs_sum)
        try:
            val = item.term.to_real()
        except OverflowError as exc:
            raise NonConvergence(f"residue term k={item.k} overflows") from exc
        acc.append(val)
        abs_sum += abs(val)
        recent.append(mag)
        used = item.k
    if asymptotic:
        return _SeriesSum(math.fsum(acc), math.exp(recent[-1]) if recent else 0.0, used, abs_sum)
    raise NonConvergence(f"residue series not converged after {policy.max_terms} terms")


def _decreasing_tail(first_mag: float, rest: Iterator[ExpansionTermLog], floor: float, lookahead: int = 64) -> float:
    """Sum of |omitted terms| while they keep decreasing and stay above ``floor``."""
    mags = [first_mag]
    for item, _ in zip(rest, range(lookahead)):
        if item.term.sign == 0:
            continue
        if item.term.log_mag >= mags[-1] or item.term.log_mag < floor:
            break
        mags.append(item.term.log_mag)
    return math.fsum(math.exp(m) for m in mags)


# ---------------------------------------------------------------------------
# General p
# ---------------------------------------------------------------------------

def residue_terms(params: SumParams, kmax: int | None = None) -> Iterator[ExpansionTermLog]:
    """Residue terms of the general-p expansion, k = 1, 2, ...

    term_k = -(1/pi) (-1)^k / k! (a/(2pi)^p)^k zeta(1+kp) Gamma(1+kp)
             sin(pi kp/2) 2F1(-k/2, 1/2-k/2; 1+nu; z)
    with z = -x^2 for S and z = +x^2 for T.
    """
    nu, p, a, x = params.nu, params.p, params.a, params.x
    z = x * x if params.kind is Kind.T else -x * x
    log_base = math.log(a) - p * _LOG_2PI
    k = 0
    while kmax is None or k < kmax:
        k += 1
        kp = k * p
        s = _sin_half_pi_exact(kp)
        if s == 0.0:
            yield ExpansionTermLog(k, SignedLogValue.zero())
            continue
        f, f_abs = _poly_2f1(-0.5 * k, 0.5 - 0.5 * k, 1.0 + nu, z)
        common = (
            k * log_base
            - math.lgamma(k + 1.0)
            + math.lgamma(1.0 + kp)
            + math.log(zeta(1.0 + kp))
            + math.log(abs(s))
            - _LOG_PI
        )
        sign = -((-1) ** k) * _sign(s) * _sign(f)
        if f == 0.0:
            yield ExpansionTermLog(k, SignedLogValue.zero(), common + _log_abs(f_abs))
            continue
        yield ExpansionTermLog(k, SignedLogValue(sign, common + math.log(abs(f))), common + math.log(f_abs))


def _residue_series(params: SumParams, policy: TruncationPolicy) -> EvalResult:
    nu, p, a, x = params.nu, params.p, params.a, params.x
    if is_even_integer(p):
        raise EvenPError(f"p={p} is an even integer; use expand_p2 for p=2")
    z = x * x if params.kind is Kind.T else -x * x
    rg = rgamma(1.0 + nu)
    alg = a ** (-1.0 / p) * math.gamma(1.0 / p) / p * hyp2f1(0.5 / p, 0.5 * (p + 1.0) / p, 1.0 + nu, z)
    conv = classify_convergence(params)
    asym = conv is ConvergenceClass.ASYMPTOTIC
    res = _sum_residues(residue_terms(params), alg - 0.5, policy, asym)
    # the smallest term does not bound contributions beyond all orders
    return EvalResult(
        rg * res.total, abs(rg) * res.error, res.terms_used, Method.EXPANSION, conv, certified=not asym
    )


def expand_residue(params: SumParams, policy: TruncationPolicy = TruncationPolicy()) -> EvalResult:
    """Algebraic small-a expansion of S for any p that is not an even integer."""
    validate(params)
    if params.kind is not Kind.S:
        raise DomainError("expand_residue evaluates kind=S; use expand_T_residue for T")
    return _residue_series(params, policy)


def expand_T_residue(params: SumParams, policy: TruncationPolicy = TruncationPolicy()) -> EvalResult:
    """Same expansion for the modified-Bessel sum T (2F1 argument +x^2)."""
    validate(params)
    if params.kind is not Kind.T:
        raise DomainError("expand_T_residue requires kind=T")
    return _residue_series(params, policy)


# ---------------------------------------------------------------------------
# p = 1
# ---------------------------------------------------------------------------

def _p1_terms(nu: float, a: float, z: float) -> Iterator[ExpansionTermLog]:
    """(1/pi)(-1)^k zeta(2k+2) 2F1(-k, -k-1/2; 1+nu; z) (a/2pi)^{2k+1}, k >= 0.

    Indexed from 1 so that ExpansionTermLog.k counts terms.
    """
    log_r = math.log(a) - _LOG_2PI
    k = -1
    while True:
        k += 1
        f, f_abs = _poly_2f1(-float(k), -k - 0.5, 1.0 + nu, z)
        common = (2 * k + 1) * log_r + math.log(zeta(2.0 * k + 2.0)) - _LOG_PI
        if f == 0.0:
            yield ExpansionTermLog(k + 1, SignedLogValue.zero(), common + _log_abs(f_abs))
            continue
        sign = (-1) ** k * _sign(f)
        yield ExpansionTermLog(k + 1, SignedLogValue(sign, common + math.log(abs(f))), common + math.log(f_abs))


def expand_p1(params: SumParams, policy: TruncationPolicy = TruncationPolicy()) -> EvalResult:
    """Convergent p=1 expansion of S, valid for a < 2 pi / sqrt(1+x^2)."""
    validate(params)
    if params.kind is not Kind.S or params.p != 1.0:
        raise DomainError("expand_p1 requires kind=S and p=1")
    nu, a, x = params.nu, params.a, params.x
    if not a < s_threshold(x):
        raise ConvergenceDomainError(
            f"p=1 series diverges for a={a} >= 2pi/sqrt(1+x^2)={s_threshold(x):.6g}"
        )
    rg = rgamma(1.0 + nu)
    alg = hyp2f1(0.5, 1.0, 1.0 + nu, -x * x) / a
    res = _sum_residues(_p1_terms(nu, a, -x * x), alg - 0.5, policy, asymptotic=False)
    return EvalResult(
        rg * res.total, abs(rg) * res.error, res.terms_used, Method.EXPANSION,
        ConvergenceClass.CONDITIONALLY_CONVERGENT,
    )


def expand_T_p1(params: SumParams, policy: TruncationPolicy = TruncationPolicy()) -> EvalResult:
    """Convergent p=1 expansion of T, valid for a < 2 pi / (1+x).

    The boundary a(1+x) = 2 pi is accepted when nu > -1/2.
    """
    validate(params)
    if params.kind is not Kind.T or params.p != 1.0:
        raise DomainError("expand_T_p1 requires kind=T and p=1")
    nu, a, x = params.nu, params.a, params.x
    limit = t_threshold(x)
    if a > limit or (a == limit and nu <= -0.5):
        raise ConvergenceDomainError(f"p=1 series for T diverges for a={a} > 2pi/(1+x)={limit:.6g}")
    rg = rgamma(1.0 + nu)
    alg = hyp2f1(0.5, 1.0, 1.0 + nu, x * x) / a
    res = _sum_residues(_p1_terms(nu, a, x * x), alg - 0.5, policy, asymptotic=False)
    return EvalResult(
        rg * res.total, abs(rg) * res.error, res.terms_used, Method.EXPANSION,
        ConvergenceClass.CONDITIONALLY_CONVERGENT,
    )


def closed_form_S_half_p1(a: float, x: float) -> float:
    """S at nu=-1/2, p=1: pi^{-1/2} sum e^{-an} cos(anx) in closed form."""
    if a <= 0:
        raise DomainError(f"a must be > 0, got {a}")
    em1 = math.expm1(-a)
    s2 = math.sin(0.5 * a * x) ** 2
    ea = math.exp(-a)
    # numerator and denominator multiplied by e^{-2a}, written without cancellation
    num = ea * (-2.0 * s2 - em1)
    den = em1 * em1 + 4.0 * ea * s2
    return num / den / math.sqrt(math.pi)


def closed_form_T_half_p1(a: float, x: float) -> float:
    """T at nu=-1/2, p=1: pi^{-1/2} sum e^{-an} cosh(anx) as two geometric sums."""
    if a <= 0 or not 0 <= x < 1:
        raise DomainError("closed_form_T_half_p1 needs a > 0 and 0 <= x < 1")
    return 0.5 / math.sqrt(math.pi) * (1.0 / math.expm1(a * (1.0 - x)) + 1.0 / math.expm1(a * (1.0 + x)))


# ---------------------------------------------------------------------------
# p = 2
# ---------------------------------------------------------------------------

def p_nu_series(nu: float, x: float, chi: float, *, scaled: bool = False, max_terms: int = 20_000) -> float:
    """sum_r H_{4r}(sqrt chi) (-x^2/64)^r / ((1+nu)_r r!)  for 0 <= x < 1.

    With ``scaled=True`` the result is multiplied by e^{-chi}; the factor is
    applied inside the log-domain accumulation, which keeps the terms finite
    when chi is large.
    """
    total, _ = _p_nu_scaled(nu, x, chi, max_terms)
    if scaled:
        return total
    if total == 0.0:
        return 0.0
    return SignedLogValue(_sign(total), math.log(abs(total)) + chi).to_real()


def _p_nu_scaled(nu: float, x: float, chi: float, max_terms: int = 20_000):
    """e^{-chi} P_nu(x, chi) and the sum of the absolute values of its terms."""
    if not 0.0 <= x < 1.0:
        raise DomainError(f"P_nu series needs 0 <= x < 1, got x={x}")
    if chi <= 0:
        raise DomainError(f"chi must be > 0, got {chi}")
    if x == 0.0:
        return math.exp(-chi), math.exp(-chi)
    rec = _HermiteRecurrence(math.sqrt(chi))
    log_x = math.log(x * x / 64.0)
    poch = SignedLogValue(1, 0.0)
    acc = []
    abs_sum = 0.0
    quiet = 0
    for r in range(max_terms):
        if r > 0:
            for _ in range(4):
                rec.step()
            poch = poch * (nu + r)
        h = rec.value()
        if h.sign == 0:
            continue
        if poch.sign == 0:
            break
        lm = h.log_mag + r * log_x - poch.log_mag - math.lgamma(r + 1.0) - chi
        sign = h.sign * poch.sign * (-1) ** r
        val = SignedLogValue(sign, lm).to_real()
        acc.append(val)
        abs_sum += abs(val)
        total = math.fsum(acc)
        if abs(val) <= EPS * 0.01 * max(abs(total), 1e-300) * (1.0 - x * x) and r > 2:
            quiet += 1
            if quiet >= 4:
                return math.fsum(acc), abs_sum
        else:
            quiet = 0
    raise NonConvergence(f"P_nu series not converged after {max_terms} terms (x={x}, chi={chi})")


def p2_algebraic_part(nu: float, a: float, x: float) -> float:
    """(1/Gamma(1+nu)) [ (1/2) sqrt(pi/a) 2F1(1/4, 3/4; 1+nu; -x^2) - 1/2 ]."""
    return rgamma(1.0 + nu) * (0.5 * math.sqrt(math.pi / a) * hyp2f1(0.25, 0.75, 1.0 + nu, -x * x) - 0.5)


def _half_p2_dual(a: float, x: float, tol: float, base: float, trig) -> tuple:
    """sqrt(pi/a)(1+x^2)^{-1/4} sum_n exp[-pi^2 n^2/(a(1+x^2))] trig(pi^2 n^2 x/(a(1+x^2)) - phi/2)."""
    phi = math.atan(x)
    q = 1.0 + x * x
    pref = math.sqrt(math.pi / a) * q ** -0.25
    acc = []
    n = 0
    while True:
        n += 1
        arg = math.pi ** 2 * n * n / (a * q)
        env = pref * math.exp(-arg)
        if env <= tol * max(abs(base + math.fsum(acc)), 1e-300):
            return math.fsum(acc), env, n - 1
        acc.append(env * trig(arg * x - 0.5 * phi))


def expand_p2(
    params: SumParams,
    policy: TruncationPolicy = TruncationPolicy(),
    *,
    route: str = "auto",
) -> EvalResult:
    """Exponentially small (Poisson-Jacobi type) form of S at p = 2.

    route="auto" uses the trigonometric dual sum at nu=-1/2 and the
    Hermite-polynomial P_nu series otherwise (x < 1 only);
    "general" or "half" force one of them.
    """
    validate(params)
    if params.kind is not Kind.S or not (is_even_integer(params.p) and round(params.p) == 2):
        raise DomainError("expand_p2 requires kind=S and p=2")
    nu, a, x = params.nu, params.a, params.x
    half = nu == -0.5
    if route == "auto":
        route = "half" if half else "general"
    if route == "half" and not half:
        raise DomainError("the trigonometric route exists only for nu=-1/2")
    conv = ConvergenceClass.EXPONENTIALLY_SMALL
    rg = rgamma(1.0 + nu)
    alg = p2_algebraic_part(nu, a, x)
    if route == "half":
        dual, env, n_used = _half_p2_dual(a, x, policy.tol, alg, math.cos)
        value = alg + rg * dual
        err = abs(rg) * env + 4 * EPS * (abs(alg) + 1.0)
        return EvalResult(value, err, n_used, Method.EXPANSION, conv)
    if route != "general":
        raise ValueError(f"unknown route {route!r}")
    if not x < 1.0:
        raise DomainError(f"the P_nu series for general nu needs x < 1, got x={x}")
    pref = math.sqrt(math.pi / a) * rg
    q = 1.0 + x * x
    acc = [alg]
    roundoff = abs(alg) * EPS
    n = 0
    while True:
        n += 1
        chi = math.pi ** 2 * n * n / a
        env = abs(pref) * math.exp(-chi / q) * (1.0 + chi) ** (abs(nu) + 1.0)
        current = abs(math.fsum(acc))
        if env <= policy.tol * max(current, 1e-300):
            break
        if n > policy.max_terms:
            raise NonConvergence("p=2 dual series did not converge")
        val, abs_terms = _p_nu_scaled(nu, x, chi)
        acc.append(pref * val)
        roundoff += abs(pref) * abs_terms * EPS
    return EvalResult(math.fsum(acc), env + 4 * roundoff, n - 1, Method.EXPANSION, conv)


def closed_form_sin_p2(a: float, x: float, tol: float = 1e-15) -> EvalResult:
    """pi^{-1/2} sum e^{-an^2} sin(an^2 x) via its Poisson-Jacobi type transform."""
    if a <= 0 or x < 0:
        raise DomainError("closed_form_sin_p2 needs a > 0 and x >= 0")
    alg = _sin_p2_algebraic(a, x)
    small, env, n_used = _half_p2_dual(a, x, tol, alg * math.sqrt(math.pi), math.sin)
    value = alg - small / math.sqrt(math.pi)
    err = env / math.sqrt(math.pi) + 4 * EPS * abs(alg)
    return EvalResult(value, err, n_used, Method.CLOSED_FORM, ConvergenceClass.EXPONENTIALLY_SMALL)


def _sin_p2_algebraic(a: float, x: float) -> float:
    phi = math.atan(x)
    return 0.5 / math.sqrt(a) * math.sin(0.5 * phi) * (1.0 + x * x) ** -0.25


# ---------------------------------------------------------------------------
# S^mu at p = 2
# ---------------------------------------------------------------------------

def smu_p2_algebraic_part(mu: float, nu: float, a: float, x: float) -> float:
    """(x/2)^mu/Gamma(1+nu) Gamma(mu+1/2)/(2 sqrt a) 2F1(mu/2+1/4, mu/2+3/4; 1+nu; -x^2).

    At mu = 0 the k=0 residue limit -1/(2 Gamma(1+nu)) is included, so the
    result coincides with the algebraic part of S.
    """
    if mu == 0.0:
        return p2_algebraic_part(nu, a, x)
    g = signed_log_gamma(mu + 0.5).to_real()
    lead = (0.5 * x) ** mu * rgamma(1.0 + nu) * g / (2.0 * math.sqrt(a)) * hyp2f1(
        0.5 * mu + 0.25, 0.5 * mu + 0.75, 1.0 + nu, -x * x
    )
    return lead


def smu_p2_terms(mu: float, nu: float, a: float, x: float) -> Iterator[ExpansionTermLog]:
    """Residue terms -(sin pi mu/pi)(x/2)^mu/Gamma(1+nu) (1/k!) (a/4pi^2)^{mu+k}
    zeta(1+2mu+2k) Gamma(1+2mu+2k) 2F1(-k/2, 1/2-k/2; 1+nu; -x^2), k = 0, 1, ...

    Yielded with ExpansionTermLog.k = k+1.
    """
    smu = math.sin(math.pi * mu) if not is_integer(mu) else 0.0
    rg = rgamma(1.0 + nu)
    log_r = math.log(a) - 2.0 * _LOG_2PI
    k = -1
    while True:
        k += 1
        if smu == 0.0 or rg == 0.0:
            yield ExpansionTermLog(k + 1, SignedLogValue.zero())
            continue
        s = 1.0 + 2.0 * mu + 2.0 * k
        zv = zeta(s)
        if zv == 0.0:
            yield ExpansionTermLog(k + 1, SignedLogValue.zero())
            continue
        g = signed_log_gamma(s)
        if k == 0:
            f, f_abs = 1.0, 1.0
        else:
            f, f_abs = _poly_2f1(-0.5 * k, 0.5 - 0.5 * k, 1.0 + nu, -x * x)
        common = (
            mu * math.log(0.5 * x)
            + math.log(abs(rg))
            + math.log(abs(smu))
            - _LOG_PI
            - math.lgamma(k + 1.0)
            + (mu + k) * log_r
            + math.log(abs(zv))
            + g.log_mag
        )
        sign = -_sign(smu) * _sign(rg) * _sign(zv) * g.sign * _sign(f)
        if f == 0.0:
            yield ExpansionTermLog(k + 1, SignedLogValue.zero(), common + _log_abs(f_abs))
            continue
        yield ExpansionTermLog(k + 1, SignedLogValue(sign, common + math.log(abs(f))), common + math.log(f_abs))


def _smu_exp_small_estimate(mu: float, nu: float, a: float, x: float) -> float:
    # first dual term e^{-chi/(1+x^2)} times a power of chi fitted to oracle gaps, with margin 4
    q = 1.0 + x * x
    w = math.pi ** 2 / (a * q)
    return (
        4.0 * (0.5 * x) ** mu * abs(rgamma(1.0 + nu)) * math.sqrt(math.pi / a)
        * max(1.0, w) ** max(0.0, mu - 0.5 * nu) * math.exp(-w)
    )


def expand_smu_p2(params: SumParams, policy: TruncationPolicy = TruncationPolicy()) -> EvalResult:
    """Small-a expansion of S^mu at p=2."""
    validate(params)
    if params.kind is not Kind.SMU or not (is_even_integer(params.p) and round(params.p) == 2):
        raise DomainError("expand_smu_p2 requires kind=Smu and p=2")
    mu, nu, a, x = params.mu_value, params.nu, params.a, params.x
    if is_integer(mu + 0.5) and mu < 0:
        raise DoublePoleError(f"mu={mu} produces a double pole; not implemented")
    if is_integer(mu) and mu < 0:
        raise DomainError(f"negative integer mu={mu} is not supported")
    if mu == 0.0:
        return expand_p2(params.with_(kind=Kind.S, mu=None), policy)
    alg = smu_p2_algebraic_part(mu, nu, a, x)
    if is_integer(mu):
        conv = ConvergenceClass.EXPONENTIALLY_SMALL
        if round(mu) == 1 and nu == 0.5:
            small, env, n_used = _half_p2_dual(a, x, policy.tol, alg * math.sqrt(math.pi), math.sin)
            value = alg - small / math.sqrt(math.pi)
            err = env / math.sqrt(math.pi) + 4 * EPS * abs(alg)
            return EvalResult(value, err, n_used, Method.EXPANSION, conv)
        err = _smu_exp_small_estimate(mu, nu, a, x) + 8 * EPS * abs(alg)
        return EvalResult(alg, err, 0, Method.EXPANSION, conv, certified=False)
    res = _sum_residues(smu_p2_terms(mu, nu, a, x), alg, policy, asymptotic=True)
    err = res.error + _smu_exp_small_estimate(mu, nu, a, x)
    return EvalResult(res.total, err, res.terms_used, Method.EXPANSION, ConvergenceClass.ASYMPTOTIC, certified=False)


# ---------------------------------------------------------------------------
# Dispatcher
# ---------------------------------------------------------------------------

def expand(params: SumParams, policy: TruncationPolicy = TruncationPolicy()) -> EvalResult:
    """Pick the expansion that applies to ``params``."""
    validate(params)
    p = params.p
    if params.kind is Kind.SMU:
        if params.mu_value == 0.0:
            return expand(params.with_(kind=Kind.S, mu=None), policy)
        if is_even_integer(p) and round(p) == 2:
            return expand_smu_p2(params, policy)
        raise DomainError("S^mu expansion is implemented for p=2 only")
    if is_even_integer(p):
        if round(p) == 2 and params.kind is Kind.S:
            return expand_p2(params, policy)
        raise DomainError(f"no expansion implemented for kind={params.kind.value}, p={p}")
    if params.kind is Kind.T:
        if p == 1.0 and params.a <= t_threshold(params.x):
            return expand_T_p1(params, policy)
        return expand_T_residue(params, policy)
    if p == 1.0 and params.a < s_threshold(params.x):
        return expand_p1(params, policy)
    return expand_residue(params, policy)
