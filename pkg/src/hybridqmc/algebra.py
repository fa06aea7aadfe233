"""Arithmetic over the prime field F_b and the polynomial ring F_b[x].

Polynomials are immutable coefficient tuples, index ``i`` holding the
coefficient of ``x**i``; the zero polynomial is the empty tuple.  Orderings
over polynomials use the base-b integer encoding ``sum(c_i * b**i)``.

Besides the scalar operations this module holds a few vectorised helpers
(multiplication matrices, power tables) used by the CBC search, where the
same linear map is applied to all ``b**m`` residues at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product


import numpy as np

NEG_INF = float("-inf")
"""Degree of the zero polynomial."""

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


class PrimeBase(int):
    """An ``int`` that is known to be prime."""

    def __new__(cls, b):
        if isinstance(b, PrimeBase):
            return b
        if isinstance(b, bool) or int(b) != b:
            raise TypeError(f"base must be an integer, got {b!r}")
        b = int(b)
        if not _is_prime(b):
            raise ValueError(f"base must be prime, got {b}")
        return super().__new__(cls, b)

    def __repr__(self):
        return f"PrimeBase({int(self)})"


@dataclass(frozen=True)
class PolyGF:
    """Polynomial over F_b; ``coeffs[i]`` is the coefficient of ``x**i``."""

    base: PrimeBase
    coeffs: tuple = ()

    def __post_init__(self):
        base = PrimeBase(self.base)
        cs = [int(c) for c in self.coeffs]
        if any(not 0 <= c < base for c in cs):
            raise ValueError(f"coefficients must lie in [0, {base})")
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_int(cls, base, code: int) -> PolyGF:
        """Inverse of :meth:`to_int` (base-b digits, constant term first)."""
        base = PrimeBase(base)
        if code < 0:
            raise ValueError("encoding must be non-negative")
        cs = []
        while code:
            code, r = divmod(code, base)
            cs.append(r)
        return cls(base, tuple(cs))

    @classmethod
    def from_digits(cls, base, text: str) -> PolyGF:
        """Parse the text format: most significant coefficient first, e.g. ``"111"``."""
        base = PrimeBase(base)
        text = text.strip().lower()
        if not text:
            raise ValueError("empty polynomial string")
        cs = []
        for ch in reversed(text):
            d = _DIGITS.find(ch)
            if d < 0 or d >= base:
                raise ValueError(f"invalid digit {ch!r} for base {base}")
            cs.append(d)
        return cls(base, tuple(cs))

    @classmethod
    def x_power(cls, base, k: int) -> PolyGF:
        return cls(base, (0,) * k + (1,))

    # -- representation -----------------------------------------------------
    def to_int(self) -> int:
        v = 0
        for c in reversed(self.coeffs):
            v = v * self.base + c
        return v

    def to_digits(self) -> str:
        if not self.coeffs:
            return "0"
        if self.base > len(_DIGITS):
            raise ValueError("digit-string format supports bases up to 36")
        return "".join(_DIGITS[c] for c in reversed(self.coeffs))

    def __str__(self):
        return self.to_digits()

    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: PolyGF):
        if not isinstance(other, PolyGF):
            return NotImplemented
        if other.base != self.base:
            raise ValueError(f"base mismatch: {self.base} vs {other.base}")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        b = self.base
        return PolyGF(b, tuple((self.coeff(i) + other.coeff(i)) % b for i in range(n)))

    def __neg__(self):
        b = self.base
        return PolyGF(b, tuple((-c) % b for c in self.coeffs))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return PolyGF(self.base)
        b = self.base
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, c in enumerate(other.coeffs):
                    out[i + j] += a * c
        return PolyGF(b, tuple(v % b for v in out))

    def __divmod__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        b = self.base
        rem = list(self.coeffs)
        dv = other.coeffs
        inv_lead = pow(dv[-1], -1, b)
        q = [0] * max(len(rem) - len(dv) + 1, 0)
        for shift in range(len(rem) - len(dv), -1, -1):
            c = rem[shift + len(dv) - 1] * inv_lead % b
            if c:
                q[shift] = c
                for j, d in enumerate(dv):
                    rem[shift + j] = (rem[shift + j] - c * d) % b
        return PolyGF(b, tuple(q)), PolyGF(b, tuple(rem))

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]


def poly_mul_mod(a: PolyGF, c: PolyGF, f: PolyGF) -> PolyGF:
    """Return ``(a * c) mod f``."""
    if not (a.base == c.base == f.base):
        raise ValueError("polynomials must share the same base")
    if f.is_zero():
        raise ZeroDivisionError("modulus must be nonzero")
    return (a * c) % f


def poly_pow_mod(a: PolyGF, e: int, f: PolyGF) -> PolyGF:
    result = PolyGF(a.base, (1,)) % f
    a = a % f
    while e:
        if e & 1:
            result = poly_mul_mod(result, a, f)
        a = poly_mul_mod(a, a, f)
        e >>= 1
    return result


def _monic_polys(base: PrimeBase, degree: int):
    for low in product(range(base), repeat=degree):
        yield PolyGF(base, low[::-1] + (1,))


def is_irreducible(f: PolyGF) -> bool:
    """Exhaustive trial division by monic polynomials of degree <= deg(f)/2."""
    if f.is_zero() or f.deg < 1:
        raise ValueError("irreducibility is only defined for deg(f) >= 1")
    n = f.deg
    for d in range(1, n // 2 + 1):
        for h in _monic_polys(f.base, d):
            if (f % h).is_zero():
                return False
    return True


@lru_cache(maxsize=None)
def find_irreducible(b, m: int) -> PolyGF:
    """Smallest monic irreducible polynomial of degree ``m`` by integer encoding."""
    b = PrimeBase(b)
    if m < 1:
        raise ValueError("degree must be >= 1")
    lead = b**m
    for low in range(b**m):
        f = PolyGF.from_int(b, lead + low)
        if is_irreducible(f):
            return f
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


@dataclass(frozen=True)
class LaurentDigits:
    """First ``precision`` coefficients t_1..t_m of an expansion in x^{-1}."""

    base: PrimeBase
    digits: tuple

    def __post_init__(self):
        if any(not 0 <= t < self.base for t in self.digits):
            raise ValueError("Laurent digits must lie in [0, b)")

    @property
    def precision(self) -> int:
        return len(self.digits)

    @property
    def numerator(self) -> int:
        """Integer v with nu_m = v / b**m."""
        v = 0
        for t in self.digits:
            v = v * self.base + t
        return v


def laurent_expand(r: PolyGF, f: PolyGF, m: int) -> LaurentDigits:
    """Digits t_1..t_m of ``r/f = sum_{l>=1} t_l x^{-l}`` by long division."""
    if r.base != f.base:
        raise ValueError("base mismatch")
    if f.is_zero() or f.deg < 1:
        raise ValueError("denominator must have degree >= 1")
    if not r.deg < f.deg:
        raise ValueError("numerator degree must be below denominator degree")
    if m < 1:
        raise ValueError("precision must be >= 1")
    b = f.base
    n = f.deg
    fc = f.coeffs
    inv_lead = pow(fc[-1], -1, b)
    # remainder kept as a length-n coefficient list; each step multiplies by x
    rem = [r.coeff(i) for i in range(n)]
    out = []
    for _ in range(m):
        rem = [0] + rem  # rem * x, degree <= n
        t = rem[n] * inv_lead % b
        if t:
            rem = [(rem[i] - t * fc[i]) % b for i in range(n + 1)]
        out.append(t)
        rem = rem[:n]
    return LaurentDigits(b, tuple(out))


def euler_totient_prime_power(b, m: int) -> int:
    """phi(b**m) = b**m - b**(m-1)."""
    b = PrimeBase(b)
    if m < 1:
        raise ValueError("m must be >= 1")
    return b**m - b ** (m - 1)


# -- vectorised helpers over G_{b,m} -------------------------------------------


def digit_matrix(b: int, m: int, values=None) -> np.ndarray:
    """Base-b digits (least significant first) of ``values`` as an (n, m) array."""
    if values is None:
        values = np.arange(b**m, dtype=np.int64)
    values = np.asarray(values, dtype=np.int64)
    powers = b ** np.arange(m, dtype=np.int64)
    return (values[:, None] // powers[None, :]) % b


def encode_digits(b: int, digits: np.ndarray) -> np.ndarray:
    """Inverse of :func:`digit_matrix`."""
    m = digits.shape[1]
    powers = b ** np.arange(m, dtype=np.int64)
    return digits @ powers


def multiplication_matrix(c: PolyGF, f: PolyGF) -> np.ndarray:
    """Matrix M over F_b with ``digits(h*c mod f) = digits(h) @ M mod b``."""
    m = f.deg
    rows = [poly_mul_mod(PolyGF.x_power(f.base, i), c, f) for i in range(m)]
    return np.array([[r.coeff(j) for j in range(m)] for r in rows], dtype=np.int64)


def laurent_matrix(g: PolyGF, f: PolyGF) -> np.ndarray:
    """Matrix C with ``numerator(nu_m(h*g/f)) = encode(digits(h) @ C mod b)``.

    Column ``l`` of the product is the digit t_{l+1}; the returned matrix already
    reverses columns so that :func:`encode_digits` yields the b-adic numerator.
    """
    m = f.deg
    t = laurent_expand(g % f, f, 2 * m).digits
    # nu_m(x^i g / f) has digits t_{i+1} .. t_{i+m}
    hankel = np.array([t[i:i + m] for i in range(m)], dtype=np.int64)
    return hankel[:, ::-1]


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def primitive_element(f: PolyGF) -> PolyGF:
    """Smallest-encoding generator of the multiplicative group of F_b[x]/(f)."""
    b, m = f.base, f.deg
    order = b**m - 1
    qs = _prime_factors(order)
    one = PolyGF(b, (1,))
    for code in range(1, b**m):
        g = PolyGF.from_int(b, code)
        if all(poly_pow_mod(g, order // q, f) != one for q in qs):
            return g
    raise ValueError(f"{f.to_digits()} is not irreducible")


def power_table(f: PolyGF) -> tuple[PolyGF, np.ndarray]:
    """Primitive element ``gen`` and encodings of gen**t for t in [0, b**m - 1)."""
    b, m = f.base, f.deg
    gen = primitive_element(f)
    order = b**m - 1
    table = np.zeros((1, m), dtype=np.int64)
    table[0, 0] = 1
    # doubling: powers [k, 2k) are powers [0, k) times gen**k
    while table.shape[0] < order:
        k = table.shape[0]
        mk = multiplication_matrix(poly_pow_mod(gen, k, f), f)
        table = np.vstack([table, (table @ mk) % b])
    return gen, encode_digits(b, table[:order])


@lru_cache(maxsize=None)
def _primitive_root_mod_square(b: int) -> int:
    """Smallest r generating the units modulo b**2 (hence modulo every b**k), b odd."""
    n = b * b
    phi = b * (b - 1)
    qs = _prime_factors(phi)
    for r in range(2, n):
        if r % b and all(pow(r, phi // q, n) != 1 for q in qs):
            return r
    raise AssertionError("odd prime powers have primitive roots")


def unit_group_table(b, k: int) -> np.ndarray:
    """Units modulo b**k laid out on their cyclic coordinates.

    Returns E of shape (e, L) with E[i, s] * E[i', s'] = E[(i+i') % e, (s+s') % L]
    modulo b**k: a single row of powers of a primitive root for odd b, and
    rows (+1, -1) times powers of 5 for b = 2.  Reducing the coordinates of a
    unit modulo the shape of a smaller k gives its residue modulo b**k.
    """
    b = PrimeBase(b)
    n = b**k
    if k < 1:
        raise ValueError("k must be >= 1")
    if b == 2:
        if k == 1:
            return np.ones((1, 1), dtype=np.int64)
        length = 1 if k == 2 else 2 ** (k - 2)
        gen = 5
        sign = (1, n - 1)
    else:
        length = n - n // b
        gen = _primitive_root_mod_square(int(b))
        sign = (1,)
    powers = np.empty(length, dtype=np.int64)
    acc = 1
    for s in range(length):
        powers[s] = acc
        acc = acc * gen % n
    return np.array([[p * sg % n for p in powers] for sg in sign], dtype=np.int64)
