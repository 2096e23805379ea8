"""High-precision reference values computed with mpmath."""

import mpmath as mp


def p_nu_ksum(nu, x, chi, dps=40):
    """e^{-chi} P_nu(x, chi) as the alternating k-sum of 2F1(k/2+1/4, k/2+3/4; 1+nu; -x^2)."""
    with mp.workdps(dps):
        chi = mp.mpf(chi)
        z = -mp.mpf(x) ** 2
        total = mp.mpf(0)
        term_scale = mp.mpf(1)
        k = 0
        while True:
            t = term_scale * mp.hyp2f1(mp.mpf(k) / 2 + mp.mpf(1) / 4, mp.mpf(k) / 2 + mp.mpf(3) / 4, 1 + mp.mpf(nu), z)
            total += t
            if k > 2 * chi + 10 and abs(t) < mp.mpf(10) ** (-dps + 5) * max(abs(total), mp.mpf(10) ** -30):
                return float(total)
            k += 1
            term_scale *= -chi / k


def direct_sum(nu, p, a, x, mu=0, kind="S", dps=30):
    with mp.workdps(dps):
        nu, p, a, x, mu = map(mp.mpf, (nu, p, a, x, mu))
        total = mp.mpf(0)
        n = 1
        while True:
            t = a * mp.mpf(n) ** p
            z = t * x
            if kind == "T":
                s = mp.e ** (-t) * mp.besseli(nu, z) / (z / 2) ** nu
            else:
                s = mp.e ** (-t) * mp.besselj(nu, z) / (z / 2) ** nu * (z / 2) ** mu
            total += s
            if n > 10 and t > 80 and abs(s) < mp.mpf(10) ** (-dps + 2) * abs(total):
                return float(total)
            n += 1
