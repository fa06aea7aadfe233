"""Hybrid node sets: polynomial lattice points next to rank-1 lattice points.

Row ``n`` of both parts is indexed by the same integer; on the polynomial
side ``n`` is read as the polynomial whose coefficients are its base-b digits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .algebra import (PolyGF, PrimeBase, digit_matrix, encode_digits, is_irreducible,
                      laurent_expand, laurent_matrix, poly_mul_mod)
from .kernels import BaseFraction


class RuleError(ValueError):
    """A generating vector violates the rule invariants."""


@dataclass(frozen=True)
class HybridRule:
    base: PrimeBase
    m: int
    f: PolyGF
    g: tuple = ()
    z: tuple = ()

    def __post_init__(self):
        b = PrimeBase(self.base)
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "g", tuple(self.g))
        object.__setattr__(self, "z", tuple(int(v) for v in self.z))
        if self.m < 1:
            raise RuleError("m must be >= 1")
        if self.f.base != b or self.f.deg != self.m:
            raise RuleError(f"modulus must have degree m={self.m} over F_{b}")
        if not is_irreducible(self.f):
            raise RuleError(f"modulus {self.f.to_digits()} is not irreducible")
        for gj in self.g:
            if gj.base != b or not gj.deg < self.m:
                raise RuleError(f"generator {gj.to_digits()} not in G_(b,m)")
        n = self.n_points
        for zj in self.z:
            if not 1 <= zj < n or zj % b == 0:
                raise RuleError(f"lattice generator {zj} is not a unit modulo {n}")

    @property
    def n_points(self) -> int:
        return self.base**self.m

    @property
    def d1(self) -> int:
        return len(self.g)

    @property
    def d2(self) -> int:
        return len(self.z)


@dataclass(frozen=True, eq=False)
class HybridPointSet:
    """Exact hybrid points.

    ``walsh`` holds numerators v of v / b**m (shape N x d1); ``trig`` holds
    numerators v of v / N (shape N x d2).  Both grids use the same N = b**m
    unless the set was built by hand with ``walsh_precision``.
    """

    base: PrimeBase
    walsh: np.ndarray
    trig: np.ndarray
    walsh_precision: int
    trig_denominator: int

    def __post_init__(self):
        if self.walsh.shape[0] != self.trig.shape[0]:
            raise ValueError("both parts need the same number of rows")
        if self.walsh.ndim != 2 or self.trig.ndim != 2:
            raise ValueError("point arrays must be two-dimensional")

    @property
    def n_points(self) -> int:
        return self.walsh.shape[0]

    @property
    def d1(self) -> int:
        return self.walsh.shape[1]

    @property
    def d2(self) -> int:
        return self.trig.shape[1]

    def walsh_row(self, n: int) -> tuple:
        return tuple(BaseFraction(self.base, int(v), self.walsh_precision) for v in self.walsh[n])

    def trig_row(self, n: int) -> tuple:
        return tuple(Fraction(int(v), self.trig_denominator) for v in self.trig[n])

    def row(self, n: int) -> tuple:
        return self.walsh_row(n), self.trig_row(n)


def iter_polynomial_lattice_points(f: PolyGF, g: Sequence[PolyGF], m: int) -> Iterator[tuple]:
    """Yield rows nu_m(h g_j / f) for h enumerated by integer encoding."""
    if f.deg != m:
        raise RuleError("deg(f) must equal m")
    for code in range(f.base**m):
        h = PolyGF.from_int(f.base, code)
        yield tuple(BaseFraction(f.base, laurent_expand(poly_mul_mod(h, gj, f), f, m).numerator, m)
                    for gj in g)


def polynomial_lattice_points(f: PolyGF, g: Sequence[PolyGF], m: int) -> list[tuple]:
    return list(iter_polynomial_lattice_points(f, g, m))


def iter_lattice_points(z: Sequence[int], n: int) -> Iterator[tuple]:
    if n < 1:
        raise ValueError("N must be >= 1")
    for k in range(n):
        yield tuple(Fraction(k * zj % n, n) for zj in z)


def lattice_points(z: Sequence[int], n: int) -> list[tuple]:
    return list(iter_lattice_points(z, n))


def walsh_column(f: PolyGF, g: PolyGF) -> np.ndarray:
    """Numerators of nu_m(h g / f) for all h, via the linear generator matrix."""
    b, m = f.base, f.deg
    c = laurent_matrix(g, f)
    return encode_digits(b, (digit_matrix(b, m) @ c) % b)


def lattice_column(z: int, n: int) -> np.ndarray:
    return np.arange(n, dtype=np.int64) * z % n


def assemble(rule: HybridRule) -> HybridPointSet:
    n = rule.n_points
    walsh = np.zeros((n, rule.d1), dtype=np.int64)
    for j, row in enumerate(iter_polynomial_lattice_points(rule.f, rule.g, rule.m)):
        walsh[j] = [x.numerator for x in row]
    trig = np.zeros((n, rule.d2), dtype=np.int64)
    for j, zj in enumerate(rule.z):
        trig[:, j] = lattice_column(zj, n)
    return HybridPointSet(rule.base, walsh, trig, rule.m, n)


# -- rule file -------------------------------------------------------------------


def parse_key_values(text: str) -> dict:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are ignored."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in out:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def format_rule(rule: HybridRule) -> str:
    return "".join([
        f"b={int(rule.base)}\n",
        f"m={rule.m}\n",
        f"f={rule.f.to_digits()}\n",
        f"g={','.join(gj.to_digits() for gj in rule.g)}\n",
        f"z={','.join(str(zj) for zj in rule.z)}\n",
    ])


def parse_rule(text: str) -> HybridRule:
    kv = parse_key_values(text)
    missing = {"b", "m", "f", "g", "z"} - kv.keys()
    if missing:
        raise RuleError(f"rule file lacks keys: {sorted(missing)}")
    b = PrimeBase(int(kv["b"]))
    g = tuple(PolyGF.from_digits(b, s) for s in kv["g"].split(",") if s.strip())
    z = tuple(int(s) for s in kv["z"].split(",") if s.strip())
    return HybridRule(b, int(kv["m"]), PolyGF.from_digits(b, kv["f"]), g, z)


def write_rule(rule: HybridRule, path) -> None:
    Path(path).write_text(format_rule(rule), newline="\n")


def read_rule(path) -> HybridRule:
    return parse_rule(Path(path).read_text())
