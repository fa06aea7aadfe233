"""Error envelopes and the tractability classifier."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kernels import SpaceParams, mu, zeta


def lower_bound_sq(params: SpaceParams, n: int) -> float:
    """-1 + (1/N) prod(1 + gamma1 mu(alpha1)) prod(1 + 2 gamma2 zeta(alpha2)).

    Derived from dropping off-diagonal kernel terms, which is only valid when
    the kernel is nonnegative.  The Korobov factor 1 + gamma * tau can go
    negative (tau_2(1/2) = -pi**2/6), so rules with large Korobov weights may
    sit below this value.
    """
    if n < 1:
        raise ValueError("N must be >= 1")
    m1 = mu(params.alpha1, params.base)
    z2 = zeta(params.alpha2)
    p = math.prod(1.0 + g * m1 for g in params.weights1)
    p *= math.prod(1.0 + 2.0 * g * z2 for g in params.weights2)
    return -1.0 + p / n


def cbc_bound_product(params: SpaceParams, d1: int, d2: int) -> float:
    m1 = mu(params.alpha1, params.base)
    z2 = zeta(params.alpha2)
    p = math.prod(1.0 + 2.0 * g * m1 for g in params.gamma1[:d1])
    return p * math.prod(1.0 + 4.0 * g * z2 for g in params.gamma2[:d2])


def upper_bound_sq(params: SpaceParams, d1: int, d2: int, n: int) -> float:
    """(2/N) prod_{j<=d1}(1 + 2 gamma1_j mu) prod_{j<=d2}(1 + 4 gamma2_j zeta).

    ``d1 = 0`` or ``d2 = 0`` is accepted (empty product) so the first CBC step,
    where only g_1 is fixed, also has an envelope.
    """
    if not (0 <= d1 <= params.s1 and 0 <= d2 <= params.s2 and d1 + d2 >= 1):
        raise ValueError(f"dimensions ({d1}, {d2}) out of range for s=({params.s1}, {params.s2})")
    if n < 1:
        raise ValueError("N must be >= 1")
    return 2.0 / n * cbc_bound_product(params, d1, d2)


def nmin_upper(params: SpaceParams, epsilon: float) -> int:
    """Smallest b**m (m >= 1) whose CBC guarantee reaches eps**2."""
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    c = 2.0 * cbc_bound_product(params, params.s1, params.s2)
    target = epsilon**2
    b = int(params.base)
    m = 1
    while c / b**m > target:
        m += 1
    return b**m


def nmin_exp_bound(params: SpaceParams, epsilon: float) -> int:
    """Looser bound b * ceil(C / eps**2) with C = 2 exp(2 mu sum gamma1 + 4 zeta sum gamma2)."""
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    c = 2.0 * math.exp(2.0 * mu(params.alpha1, params.base) * sum(params.weights1)
                       + 4.0 * zeta(params.alpha2) * sum(params.weights2))
    return int(params.base) * math.ceil(c / epsilon**2)


class UnclassifiableWeights(ValueError):
    """Raised for weight families whose asymptotics are unknown."""


@dataclass(frozen=True)
class WeightFamily:
    """``explicit`` list, ``power`` gamma_j = c j**-a, or ``const`` gamma_j = c."""

    kind: str
    c: float = 1.0
    a: float = 0.0
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in ("explicit", "power", "const"):
            raise ValueError(f"unknown weight family {self.kind!r}")
        if self.kind == "const":
            object.__setattr__(self, "a", 0.0)
        if self.kind == "explicit":
            vals = tuple(float(v) for v in self.values)
            if any(v < 0 for v in vals) or any(x < y for x, y in zip(vals, vals[1:])):
                raise ValueError("explicit weights must be non-negative and non-increasing")
            object.__setattr__(self, "values", vals)
        else:
            if self.c < 0:
                raise ValueError("weight scale c must be non-negative")
            if self.a < 0:
                raise ValueError("power exponent a must be >= 0 for non-increasing weights")

    @classmethod
    def parse(cls, spec: str) -> WeightFamily:
        """``explicit:0.5,0.25`` | ``power:c,a`` | ``const:c``."""
        kind, _, rest = spec.strip().partition(":")
        nums = [float(t) for t in rest.split(",") if t.strip()]
        if kind == "explicit":
            return cls("explicit", values=tuple(nums))
        if kind == "power" and len(nums) == 2:
            return cls("power", c=nums[0], a=nums[1])
        if kind == "const" and len(nums) == 1:
            return cls("const", c=nums[0])
        raise ValueError(f"bad weight family spec {spec!r}")

    def __str__(self):
        if self.kind == "explicit":
            return "explicit:" + ",".join(repr(v) for v in self.values)
        if self.kind == "power":
            return f"power:{self.c!r},{self.a!r}"
        return f"const:{self.c!r}"

    def weights(self, s: int) -> tuple:
        if self.kind == "explicit":
            if s > len(self.values):
                raise ValueError(f"explicit family has only {len(self.values)} weights, need {s}")
            return self.values[:s]
        return tuple(self.c * j ** -self.a for j in range(1, s + 1))


@dataclass(frozen=True)
class TractabilityVerdict:
    strong_poly: bool
    poly: bool
    weak: bool
    witness: str

    def __post_init__(self):
        if (self.strong_poly and not self.poly) or (self.poly and not self.weak):
            raise AssertionError("verdict violates strong => polynomial => weak")

    @property
    def label(self) -> str:
        if self.strong_poly:
            return "strong"
        if self.poly:
            return "polynomial"
        if self.weak:
            return "weak"
        return "intractable (weak fails)"

    def report(self) -> str:
        return (f"strong_poly={str(self.strong_poly).lower()}\n"
                f"poly={str(self.poly).lower()}\n"
                f"weak={str(self.weak).lower()}\n"
                f"witness: {self.witness}\n")


def _growth(fam: WeightFamily) -> tuple:
    """(partial sums bounded, sum/log s bounded, sum/s -> 0, description)."""
    if fam.kind == "explicit":
        raise UnclassifiableWeights(
            "explicit weight lists fix only finitely many weights; limits as s -> inf are undefined")
    if fam.c == 0:
        return True, True, True, "zero weights"
    a = fam.a
    if a > 1:
        return True, True, True, f"sum c*j^-{a:g} converges"
    if a == 1:
        return False, True, True, "sum c/j grows like c*log s"
    if a > 0:
        return False, False, True, f"sum grows like s^{1 - a:g}"
    return False, False, False, "constant weights: sum/s -> c > 0"


def classify_tractability(fam1: WeightFamily, fam2: WeightFamily) -> TractabilityVerdict:
    """Evaluate the three conditions with both dimensions growing."""
    g1, g2 = _growth(fam1), _growth(fam2)
    strong = g1[0] and g2[0]
    poly = g1[1] and g2[1]
    weak = g1[2] and g2[2]
    witness = f"walsh part: {g1[3]}; korobov part: {g2[3]}"
    return TractabilityVerdict(strong, poly, weak, witness)
