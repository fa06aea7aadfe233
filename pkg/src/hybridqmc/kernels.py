"""Walsh/trigonometric building blocks and the one-dimensional kernel sums.

Point coordinates on the Walsh side are b-adic rationals ``v / b**m`` kept as
integers, so every Walsh evaluation is exact digit arithmetic.  The two
kernel sums

    omega_alpha(z) = sum_{k >= 1} b**(-alpha * psi_b(k)) * wal_k(z)
    tau_alpha(y)   = sum_{l != 0} e(l * y) / |l|**alpha

are evaluated in closed form; brute-force versions are provided as oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .algebra import PrimeBase

DEFAULT_TOL = 1e-10
MAX_SERIES_TERMS = 10**8


@dataclass(frozen=True)
class BaseFraction:
    """The b-adic rational ``numerator / b**precision`` in [0, 1)."""

    base: PrimeBase
    numerator: int
    precision: int

    def __post_init__(self):
        object.__setattr__(self, "base", PrimeBase(self.base))
        if self.precision < 0:
            raise ValueError("precision must be >= 0")
        if not 0 <= self.numerator < self.base**self.precision:
            raise ValueError(
                f"numerator {self.numerator} outside [0, {self.base}**{self.precision})")

    @property
    def digits(self) -> tuple:
        """xi_1, ..., xi_m (most significant first)."""
        b, v = self.base, self.numerator
        out = []
        for _ in range(self.precision):
            v, r = divmod(v, b)
            out.append(r)
        return tuple(reversed(out))

    @classmethod
    def from_digits(cls, base, digits: Sequence[int]) -> BaseFraction:
        base = PrimeBase(base)
        v = 0
        for d in digits:
            if not 0 <= d < base:
                raise ValueError("digit out of range")
            v = v * base + d
        return cls(base, v, len(digits))

    def extend(self, precision: int) -> BaseFraction:
        """Same number written with more (trailing zero) digits."""
        if precision < self.precision:
            raise ValueError("cannot reduce precision")
        return BaseFraction(self.base, self.numerator * self.base ** (precision - self.precision),
                            precision)

    def __float__(self):
        return self.numerator / self.base**self.precision

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.base**self.precision)


@dataclass(frozen=True)
class SpaceParams:
    """Parameters of the hybrid Walsh x Korobov space.

    Weights may be zero (degenerate factor equal to one); they must be
    non-increasing within each part.
    """

    base: PrimeBase
    alpha1: float
    alpha2: float
    gamma1: tuple = ()
    gamma2: tuple = ()
    s1: int = field(default=None)
    s2: int = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "base", PrimeBase(self.base))
        g1 = tuple(float(g) for g in self.gamma1)
        g2 = tuple(float(g) for g in self.gamma2)
        object.__setattr__(self, "gamma1", g1)
        object.__setattr__(self, "gamma2", g2)
        if self.s1 is None:
            object.__setattr__(self, "s1", len(g1))
        if self.s2 is None:
            object.__setattr__(self, "s2", len(g2))
        if not (self.alpha1 > 1 and self.alpha2 > 1):
            raise ValueError("alpha1 and alpha2 must exceed 1")
        if self.s1 < 0 or self.s2 < 0 or self.s1 + self.s2 < 1:
            raise ValueError("need s1, s2 >= 0 and s1 + s2 >= 1")
        if len(g1) < self.s1 or len(g2) < self.s2:
            raise ValueError("weight sequences shorter than the dimensions")
        for name, g in (("gamma1", g1), ("gamma2", g2)):
            if any(not math.isfinite(x) or x < 0 for x in g):
                raise ValueError(f"{name} must be finite and non-negative")
            if any(x < y for x, y in zip(g, g[1:])):
                raise ValueError(f"{name} must be non-increasing")

    @property
    def weights1(self) -> tuple:
        return self.gamma1[: self.s1]

    @property
    def weights2(self) -> tuple:
        return self.gamma2[: self.s2]


def psi_b(k: int, b) -> int:
    """floor(log_b k) by repeated integer division."""
    if k < 1:
        raise ValueError("psi_b is defined for k >= 1")
    a = 0
    while k >= b:
        k //= b
        a += 1
    return a


def wal_exponent(k: int, x: BaseFraction) -> int:
    """t in [0, b) such that wal_k(x) = e(t / b)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    b = x.base
    xi = x.digits
    t = 0
    i = 0
    while k:
        k, kappa = divmod(k, b)
        if kappa:
            if i >= len(xi):
                raise ValueError("precision of x too small for the digits of k")
            t += xi[i] * kappa
        i += 1
    return t % b


def wal(k: int, x: BaseFraction) -> complex:
    t = wal_exponent(k, x)
    return complex(np.exp(2j * np.pi * t / x.base))


def digit_sub(x: BaseFraction, y: BaseFraction) -> BaseFraction:
    """Digitwise subtraction modulo b (the operation x (-) y)."""
    if x.base != y.base or x.precision != y.precision:
        raise ValueError("digit_sub needs equal base and precision")
    b = x.base
    return BaseFraction.from_digits(b, [(p - q) % b for p, q in zip(x.digits, y.digits)])


def mu(alpha: float, b) -> float:
    """Sum over all k >= 0 of b**(-alpha*psi_b(k)) minus the k = 0 term."""
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    ba = float(b) ** alpha
    return ba * (b - 1) / (ba - b)


def _first_nonzero_position(z: BaseFraction) -> int:
    # i0 such that xi_{i0} is the leading nonzero digit; z must be nonzero
    return z.precision - psi_b(z.numerator, z.base)


def walsh_kernel_sum(z: BaseFraction, alpha: float) -> float:
    """Closed form of omega_alpha(z).

    Grouping k by psi_b(k) = a, the block sums of wal_k(z) are
    b**a (b - 1) for a < i0 - 1, -b**a for a = i0 - 1 and zero beyond.
    """
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    b = z.base
    if z.numerator == 0:
        return mu(alpha, b)
    i0 = _first_nonzero_position(z)
    r = float(b) ** (1.0 - alpha)
    head = (b - 1) * (1.0 - r ** (i0 - 1)) / (1.0 - r)
    return head - r ** (i0 - 1)


def walsh_kernel_table(b, m: int, alpha: float) -> np.ndarray:
    """omega_alpha(v / b**m) for every numerator v in [0, b**m)."""
    b = PrimeBase(b)
    n = b**m
    v = np.arange(n, dtype=np.int64)
    psi = np.zeros(n, dtype=np.int64)
    w = v.copy()
    for _ in range(m):
        w //= b
        psi += w > 0
    i0 = m - psi
    r = float(b) ** (1.0 - alpha)
    out = (b - 1) * (1.0 - r ** (i0 - 1)) / (1.0 - r) - r ** (i0 - 1)
    out[0] = mu(alpha, b)
    return out


class BruteForceSum(NamedTuple):
    value: float
    imag: float
    tail_bound: float


def walsh_kernel_sum_bruteforce(z: BaseFraction, alpha: float, blocks: int) -> BruteForceSum:
    """Direct summation of omega over 1 <= k < b**blocks, with the tail bound."""
    if blocks < 1:
        raise ValueError("blocks must be >= 1")
    b = int(z.base)
    if z.precision < blocks:
        z = z.extend(blocks)
    xi = np.array(z.digits[:blocks], dtype=np.int64)
    k = np.arange(1, b**blocks, dtype=np.int64)
    t = np.zeros_like(k)
    kk = k.copy()
    psi = np.zeros_like(k)
    for i in range(blocks):
        kappa = kk % b
        kk //= b
        t += kappa * xi[i]
        psi += (kk > 0)
    t %= b
    weights = float(b) ** (-alpha * psi.astype(float))
    angle = 2.0 * np.pi * t / b
    re = math.fsum(weights * np.cos(angle))
    im = math.fsum(weights * np.sin(angle))
    r = float(b) ** (1.0 - alpha)
    tail = (b - 1) * r**blocks / (1.0 - r)
    return BruteForceSum(re, im, tail)


# Bernoulli numbers B_0..B_12 (B_1 = -1/2 convention).
_BERNOULLI = [Fraction(1), Fraction(-1, 2), Fraction(1, 6), Fraction(0), Fraction(-1, 30),
              Fraction(0), Fraction(1, 42), Fraction(0), Fraction(-1, 30), Fraction(0),
              Fraction(5, 66), Fraction(0), Fraction(-691, 2730)]
BERNOULLI_ORDERS = (2, 4, 6, 8, 10, 12)


def bernoulli_poly_coeffs(n: int) -> list[Fraction]:
    """Coefficients of B_n(x), constant term first."""
    if n > 12:
        raise ValueError("only orders up to 12 are tabulated")
    return [math.comb(n, j) * _BERNOULLI[n - j] for j in range(n + 1)]


def _even_order(alpha: float):
    if float(alpha).is_integer() and int(alpha) in BERNOULLI_ORDERS:
        return int(alpha)
    return None


def _bernoulli_tau(z, n: int):
    coeffs = [float(c) for c in bernoulli_poly_coeffs(n)]
    poly = np.polynomial.polynomial.polyval(z, coeffs)
    sign = -1.0 if (n // 2) % 2 == 0 else 1.0
    return sign * (2 * math.pi) ** n * poly / math.factorial(n)


def korobov_kernel_series(z: float, alpha: float, terms: int) -> float:
    """2 * sum_{l=1}^{terms} cos(2 pi l z) / l**alpha."""
    total = []
    chunk = 1 << 20
    for start in range(1, terms + 1, chunk):
        l = np.arange(start, min(start + chunk, terms + 1), dtype=float)
        total.append(math.fsum(np.cos(2 * math.pi * l * z) / l**alpha))
    return 2.0 * math.fsum(total)


def korobov_kernel_sum(z: float, alpha: float, tol: float = DEFAULT_TOL) -> float:
    """tau_alpha(z); Bernoulli closed form for even alpha <= 12, series otherwise."""
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    if isinstance(z, Fraction):
        z = z - math.floor(z)
        z = float(min(z, 1 - z))
    else:
        z = float(z) - math.floor(z)
    n = _even_order(alpha)
    if n is not None:
        return float(_bernoulli_tau(z, n))
    terms = math.ceil((2.0 / (tol * (alpha - 1))) ** (1.0 / (alpha - 1)))
    if terms > MAX_SERIES_TERMS:
        raise ValueError(
            f"series for alpha={alpha} needs {terms} terms at tol={tol}; loosen the tolerance")
    return korobov_kernel_series(z, alpha, terms)


def korobov_kernel_table(n: int, alpha: float) -> np.ndarray:
    """tau_alpha(v / n) for v in [0, n).

    Even alpha uses the Bernoulli form at min(v, n - v) / n so the table is
    exactly symmetric.  Other alpha fold the frequencies modulo n into
    Hurwitz zeta values and sum them with a real DFT.
    """
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    v = np.arange(n, dtype=np.int64)
    order = _even_order(alpha)
    if order is not None:
        return _bernoulli_tau(np.minimum(v, n - v) / n, order)
    from scipy.special import zeta as hurwitz

    r = v[1:] / n
    c = np.empty(n)
    c[0] = 2.0 * zeta(alpha)
    c[1:] = hurwitz(alpha, r) + hurwitz(alpha, 1.0 - r)
    c *= float(n) ** (-alpha)
    # c is symmetric, so the DFT is real
    out = np.fft.fft(c).real
    return 0.5 * (out + out[(-v) % n])


def zeta(alpha: float) -> float:
    """Riemann zeta for alpha > 1: partial sum plus Euler-Maclaurin tail."""
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    L = 64
    s = math.fsum(l ** -alpha for l in range(1, L))
    tail = (L ** (1 - alpha) / (alpha - 1) + 0.5 * L ** -alpha
            + alpha * L ** (-alpha - 1) / 12
            - alpha * (alpha + 1) * (alpha + 2) * L ** (-alpha - 3) / 720
            + alpha * (alpha + 1) * (alpha + 2) * (alpha + 3) * (alpha + 4)
            * L ** (-alpha - 5) / 30240)
    return s + tail
