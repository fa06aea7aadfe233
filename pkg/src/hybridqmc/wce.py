"""Squared worst-case error of hybrid QMC rules.

Two independent routes:

* :func:`wce_sq_naive` sums the kernel over all N**2 pairs of points.
* :func:`wce_sq_group` uses the group structure of each part.  The Walsh
  factor depends on the digitwise difference u = n (-) n' and the Korobov
  factor on v = n - n' mod N.  These are different groups, so the double sum
  does not reduce to one sum over a common index.  Writing n' = n (-) u, one
  gets v = u - sum_i c_i b**(i+1) with borrow bits c_i = [n_i < u_i], hence

      e^2 + 1 = N**-2 * sum_u A(u) * C(u),
      C(u)    = sum_n B(n - (n (-) u)) = b * (S_{m-2} ... S_0 B)(u),
      (S_i X)(u) = (b - u_i) X(u) + u_i X(u - b**(i+1)),

  where A and B are the per-part kernel products at index u resp. v.  Each
  S_i costs O(N), so the whole evaluation is O(N (m + d1 + d2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import digit_matrix
from .kernels import (DEFAULT_TOL, BaseFraction, SpaceParams, digit_sub, korobov_kernel_sum,
                      korobov_kernel_table, walsh_kernel_sum, walsh_kernel_table)
from .pointset import HybridPointSet, HybridRule, lattice_column, walsh_column

NAIVE_MAX_POINTS = 256


def kernel_eval(p, q, params: SpaceParams, tol: float = DEFAULT_TOL) -> float:
    """Hybrid kernel K(p, q) for points ``(walsh_coords, trig_coords)``."""
    (xp, yp), (xq, yq) = p, q
    if len(xp) != len(xq) or len(yp) != len(yq):
        raise ValueError("points have different dimensions")
    if len(xp) > len(params.gamma1) or len(yp) > len(params.gamma2):
        raise ValueError("more coordinates than weights")
    k = 1.0
    for j, (a, c) in enumerate(zip(xp, xq)):
        k *= 1.0 + params.gamma1[j] * walsh_kernel_sum(digit_sub(a, c), params.alpha1)
    for j, (a, c) in enumerate(zip(yp, yq)):
        k *= 1.0 + params.gamma2[j] * korobov_kernel_sum(Fraction(a) - Fraction(c),
                                                         params.alpha2, tol)
    return k


def _digit_diff_codes(col: np.ndarray, b: int, m: int) -> np.ndarray:
    """(N, N) array of numerators of x_n (-) x_n' for one Walsh column."""
    dig = digit_matrix(b, m, col)
    diff = (dig[:, None, :] - dig[None, :, :]) % b
    return diff @ (b ** np.arange(m, dtype=np.int64))


def wce_sq_naive(points: HybridPointSet, params: SpaceParams, tol: float = DEFAULT_TOL) -> float:
    """-1 + N**-2 * sum over all pairs of K(p_n, p_n')."""
    n = points.n_points
    if n == 0:
        raise ValueError("empty point set")
    if points.d1 > len(params.gamma1) or points.d2 > len(params.gamma2):
        raise ValueError("point set has more coordinates than weights")
    if n > NAIVE_MAX_POINTS:
        raise ValueError(f"naive double sum limited to N <= {NAIVE_MAX_POINTS}")
    b, m = int(points.base), points.walsh_precision
    total = np.ones((n, n))
    for j in range(points.d1):
        codes = _digit_diff_codes(points.walsh[:, j], b, m)
        values = {int(v): walsh_kernel_sum(BaseFraction(b, int(v), m), params.alpha1)
                  for v in np.unique(codes)}
        lut = np.array([values.get(v, 0.0) for v in range(b**m)])
        total *= 1.0 + params.gamma1[j] * lut[codes]
    den = points.trig_denominator
    for j in range(points.d2):
        col = points.trig[:, j]
        codes = (col[:, None] - col[None, :]) % den
        values = {int(v): korobov_kernel_sum(Fraction(int(v), den), params.alpha2, tol)
                  for v in np.unique(codes)}
        lut = np.array([values.get(v, 0.0) for v in range(den)])
        total *= 1.0 + params.gamma2[j] * lut[codes]
    return math.fsum(total.ravel()) / n**2 - 1.0


def carry_fold(values: np.ndarray, b: int, m: int, digits: np.ndarray = None) -> np.ndarray:
    """C(u) = sum_n X(n - (n (-) u) mod N) for X given on Z_N."""
    if digits is None:
        digits = digit_matrix(b, m)
    out = np.asarray(values, dtype=float)
    for i in range(m - 1):
        ui = digits[:, i]
        out = (b - ui) * out + ui * np.roll(out, b ** (i + 1))
    return b * out


def carry_fold_adjoint(values: np.ndarray, b: int, m: int, digits: np.ndarray = None) -> np.ndarray:
    """D(v) = sum over (n, u) with n - (n (-) u) = v of Y(u); adjoint of :func:`carry_fold`."""
    if digits is None:
        digits = digit_matrix(b, m)
    out = np.asarray(values, dtype=float)
    for i in range(m - 2, -1, -1):
        vi = digits[:, i]
        out = (b - vi) * out + vi * np.roll(out, -(b ** (i + 1)))
    return b * out


def walsh_products(rule: HybridRule, params: SpaceParams) -> np.ndarray:
    """A(u) = prod_j (1 + gamma_j omega(x_u^(j))) indexed by digit-group element u."""
    table = walsh_kernel_table(rule.base, rule.m, params.alpha1)
    a = np.ones(rule.n_points)
    for j, gj in enumerate(rule.g):
        a *= 1.0 + params.gamma1[j] * table[walsh_column(rule.f, gj)]
    return a


def korobov_products(rule: HybridRule, params: SpaceParams) -> np.ndarray:
    """B(v) = prod_j (1 + gamma_j tau({v z_j / N})) indexed by v in Z_N."""
    n = rule.n_points
    table = korobov_kernel_table(n, params.alpha2)
    out = np.ones(n)
    for j, zj in enumerate(rule.z):
        out *= 1.0 + params.gamma2[j] * table[lattice_column(zj, n)]
    return out


def _check_dims(rule: HybridRule, params: SpaceParams):
    if rule.base != params.base:
        raise ValueError("rule and parameters use different bases")
    if rule.d1 > len(params.gamma1) or rule.d2 > len(params.gamma2):
        raise ValueError("rule has more coordinates than weights")


def wce_sq_group(rule: HybridRule, params: SpaceParams) -> float:
    """Exact squared worst-case error in O(N (m + d1 + d2))."""
    _check_dims(rule, params)
    b, m, n = int(rule.base), rule.m, rule.n_points
    fold = carry_fold(korobov_products(rule, params), b, m)
    return math.fsum(walsh_products(rule, params) * fold) / n**2 - 1.0


def initial_products(params: SpaceParams, d1: int, d2: int) -> tuple:
    """prod(1 + gamma mu(alpha1)) and prod(1 + 2 gamma zeta(alpha2)) over the prefixes."""
    from .kernels import mu, zeta

    p1 = math.prod(1.0 + g * mu(params.alpha1, params.base) for g in params.gamma1[:d1])
    p2 = math.prod(1.0 + 2.0 * g * zeta(params.alpha2) for g in params.gamma2[:d2])
    return p1, p2


@dataclass(frozen=True)
class ErrorReport:
    e2: float
    n_points: int
    d1: int
    d2: int
    lower_bound_sq: float
    upper_bound_sq: float

    @property
    def e2_reported(self) -> float:
        """e2 with tiny negative rounding clamped to zero."""
        return max(self.e2, 0.0) if self.e2 > -1e-12 else self.e2

    @property
    def lower_ok(self) -> bool:
        return self.lower_bound_sq <= self.e2 + 1e-9

    @property
    def upper_ok(self) -> bool:
        return self.e2 <= self.upper_bound_sq + 1e-9


def error_report(rule: HybridRule, params: SpaceParams) -> ErrorReport:
    from .bounds import lower_bound_sq, upper_bound_sq

    sub = SpaceParams(params.base, params.alpha1, params.alpha2, params.gamma1, params.gamma2,
                      rule.d1, rule.d2)
    return ErrorReport(
        e2=wce_sq_group(rule, params),
        n_points=rule.n_points,
        d1=rule.d1,
        d2=rule.d2,
        lower_bound_sq=lower_bound_sq(sub, rule.n_points),
        upper_bound_sq=upper_bound_sq(sub, rule.d1, rule.d2, rule.n_points),
    )
