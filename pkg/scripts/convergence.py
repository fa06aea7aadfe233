"""Squared error of CBC rules against N for each interleaving strategy.

    python3 scripts/convergence.py --base 2 --m-max 14 > convergence.csv

Columns: strategy, m, N, e2, upper, N*e2.  The last column levels off if the
error decays like 1/N, the rate the construction guarantees.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass

from hybridqmc import SpaceParams, cbc_construct, wce_sq_group
from hybridqmc.bounds import upper_bound_sq
from hybridqmc.cbc import STRATEGIES, CbcStrategy, fmt


@dataclass(frozen=True)
class ConvergenceConfig:
    base: int = 2
    m_max: int = 12
    s1: int = 4
    s2: int = 4
    alpha: float = 2.0
    decay: float = 2.0
    workers: int = 1

    def params(self) -> SpaceParams:
        g = [j ** -self.decay for j in range(1, max(self.s1, self.s2) + 1)]
        return SpaceParams(self.base, self.alpha, self.alpha, g[: self.s1], g[: self.s2])


def run(cfg: ConvergenceConfig, out) -> None:
    params = cfg.params()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["strategy", "m", "N", "e2", "upper", "N_e2"])
    for strat in STRATEGIES:
        for m in range(1, cfg.m_max + 1):
            t0 = time.perf_counter()
            rule, _ = cbc_construct(params, m, CbcStrategy(strat), workers=cfg.workers)
            e2 = wce_sq_group(rule, params)
            n = rule.n_points
            w.writerow([strat, m, n, fmt(e2), fmt(upper_bound_sq(params, cfg.s1, cfg.s2, n)),
                        fmt(n * e2)])
            print(f"{strat} m={m} {time.perf_counter() - t0:.2f}s", file=sys.stderr)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(ConvergenceConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    args = ap.parse_args()
    run(ConvergenceConfig(**vars(args)), sys.stdout)


if __name__ == "__main__":
    main()
