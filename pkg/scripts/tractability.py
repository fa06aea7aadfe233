"""Tractability verdicts and N_min(eps) growth for a few weight families.

    python3 scripts/tractability.py

For each family prints the verdict and, for growing dimension s, the
smallest power of b whose CBC guarantee reaches eps**2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from hybridqmc import SpaceParams, WeightFamily, classify_tractability, nmin_upper


@dataclass(frozen=True)
class TractabilityConfig:
    families: tuple = ("power:1,2", "power:1,1", "power:1,0.5", "const:1")
    dims: tuple = (1, 2, 4, 8, 16, 32)
    eps: float = 0.1
    base: int = 2
    alpha: float = 2.0


def main(cfg: TractabilityConfig = TractabilityConfig()) -> None:
    for spec in cfg.families:
        fam = WeightFamily.parse(spec)
        verdict = classify_tractability(fam, fam)
        print(f"{spec}: {verdict.label}")
        for s in cfg.dims:
            w = fam.weights(s)
            n = nmin_upper(SpaceParams(cfg.base, cfg.alpha, cfg.alpha, w, w), cfg.eps)
            print(f"  s1=s2={s:<3d} log2 N_min = {math.log2(n):6.1f}")


if __name__ == "__main__":
    main()
