"""Error of the asymptotic expansion against a tight direct sum as a shrinks.

Shows where the achieved error stops following the truncation estimate and
settles on the double-precision floor.

    python3 scripts/roundoff_floor.py
"""

from dataclasses import dataclass, field

from besselsum.core import SumParams, TruncationPolicy
from besselsum.directsum import sum_direct
from besselsum.expansions import expand_residue


@dataclass
class FloorConfig:
    nu: float = 1.0
    p: float = 1.5
    x: float = 0.5
    a_values: list = field(default_factory=lambda: [0.3, 0.1, 0.03, 0.01, 0.003])
    tols: list = field(default_factory=lambda: [1e-6, 1e-9, 1e-12])
    oracle_tol: float = 1e-15


def main(cfg: FloorConfig = FloorConfig()):
    print(f"{'a':>8} {'tol':>8} {'terms':>6} {'estimate':>10} {'achieved':>10} {'|S|*eps':>10}")
    for a in cfg.a_values:
        p = SumParams(cfg.nu, cfg.p, a, cfg.x)
        ref = sum_direct(p, TruncationPolicy(tol=cfg.oracle_tol)).value
        for tol in cfg.tols:
            r = expand_residue(p, TruncationPolicy(tol=tol))
            err = abs(r.value - ref)
            print(f"{a:>8.3g} {tol:>8.0e} {r.terms_used:>6} {r.error_estimate:>10.2e} {err:>10.2e} {abs(ref) * 2.2e-16:>10.2e}")


if __name__ == "__main__":
    main()
