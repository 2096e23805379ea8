"""Direct-summation term counts and timings as a -> 0, with the fitted cost exponent.

    python3 scripts/cost_law.py --p 1 --x 1
"""

import argparse
import json
from dataclasses import asdict, dataclass, field

from besselsum.cli import run_bench
from besselsum.core import TruncationPolicy


@dataclass
class CostConfig:
    nu: float = 0.0
    p: float = 1.0
    x: float = 1.0
    kind: str = "S"
    a_values: list = field(default_factory=lambda: [1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4])
    tol: float = 1e-12


def main():
    ap = argparse.ArgumentParser()
    cfg = CostConfig()
    for k in ("nu", "p", "x"):
        ap.add_argument(f"--{k}", type=float, default=getattr(cfg, k))
    ns = ap.parse_args()
    cfg = CostConfig(nu=ns.nu, p=ns.p, x=ns.x)
    out = run_bench(cfg.nu, cfg.p, cfg.x, cfg.a_values, cfg.kind, TruncationPolicy(tol=cfg.tol))
    print(f"config {json.dumps(asdict(cfg))}")
    print(f"{'a':>10} {'method':>10} {'terms':>10} {'seconds':>10}")
    for r in out["records"]:
        print(f"{r['a']:>10.1e} {r['method']:>10} {r['terms_used']:>10} {r['wall_time']:>10.4f}")
    s = out["summary"]
    print(f"fitted exponent {s['direct_cost_exponent']:.4f} (expected {s['expected_exponent']:.4f})")
    if s["speedup"] is not None:
        print(f"speedup at a={s['smallest_a']:.0e}: {s['speedup']:.0f}x")


if __name__ == "__main__":
    main()
