"""Large-k ratio tables for the terminating 2F1 polynomials and the remainder constant.

    python3 scripts/polynomial_ratios.py
"""

from dataclasses import dataclass, field

from besselsum.asympt import fitted_constant, neg_checks, pos_checks, remainder_bound_profile


@dataclass
class RatioConfig:
    nus: list = field(default_factory=lambda: [-0.5, 0.0, 1.0])
    xs_neg: list = field(default_factory=lambda: [0.5, 1.0, 2.0])
    xs_pos: list = field(default_factory=lambda: [0.3, 0.5, 0.8])
    ks: list = field(default_factory=lambda: [10, 20, 40, 80, 100, 160])
    remainder_N: int = 10
    t_max: float = 40.0


def main(cfg: RatioConfig = RatioConfig()):
    print("negative argument: exact / estimate")
    for nu in cfg.nus:
        for x in cfg.xs_neg:
            cells = [f"{c.ratio:.5f}{'*' if c.node else ' '}" for c in neg_checks(nu, x, cfg.ks)]
            print(f"  nu={nu:5.2f} x={x:4.2f}  " + "  ".join(cells))
    print("  (* marks points near a zero of the oscillatory factor)")
    print("positive argument: exact / estimate")
    for nu in cfg.nus:
        for x in cfg.xs_pos:
            print(f"  nu={nu:5.2f} x={x:4.2f}  " + "  ".join(f"{c.ratio:.5f}" for c in pos_checks(nu, x, cfg.ks)))
    for tm in (cfg.t_max / 2, cfg.t_max):
        grid = [0.25 * i for i in range(int(tm / 0.25) + 1)]
        k = fitted_constant(remainder_bound_profile(cfg.remainder_N, 0.0, 1.0, grid))
        print(f"remainder constant on t in [0, {tm:g}]: {k:.4f}")


if __name__ == "__main__":
    main()
