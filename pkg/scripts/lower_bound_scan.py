"""Scan CBC rules for cases where the error falls below the lower-bound formula.

    python3 scripts/lower_bound_scan.py

The formula drops off-diagonal kernel terms, which needs a nonnegative kernel.
The Korobov factor 1 + gamma * tau(z) is negative near z = 1/2 once
gamma > 6 / pi**2 (alpha = 2), so large leading Korobov weights can break it.
"""

from __future__ import annotations

from dataclasses import dataclass

from hybridqmc import SpaceParams, cbc_construct, error_report


@dataclass(frozen=True)
class ScanConfig:
    base: int = 2
    m_max: int = 8
    s: int = 3
    gammas: tuple = (0.25, 0.5, 0.6, 0.8, 1.0, 2.0)


def main(cfg: ScanConfig = ScanConfig()) -> None:
    print("gamma_1,m,N,e2,lower,below")
    for g in cfg.gammas:
        w = [g * j**-2 for j in range(1, cfg.s + 1)]
        params = SpaceParams(cfg.base, 2.0, 2.0, w, w)
        for m in range(1, cfg.m_max + 1):
            rule, _ = cbc_construct(params, m)
            rep = error_report(rule, params)
            print(f"{g},{m},{rep.n_points},{rep.e2:.6g},{rep.lower_bound_sq:.6g},"
                  f"{int(not rep.lower_ok)}")


if __name__ == "__main__":
    main()
