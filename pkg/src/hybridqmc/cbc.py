"""Component-by-component construction of hybrid generating vectors.

Each step appends one coordinate, either a polynomial generator g in G_{b,m}
or a lattice generator z in Z_N, and picks the candidate with the smallest
squared worst-case error.  Per-row products of the fixed coordinates are
cached together with the carry fold of the other part (see :mod:`wce`), so a
candidate costs O(N).

Candidate errors are evaluated in fixed-size chunks; ``workers > 1`` only
spreads those chunks over threads, so results do not depend on it.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra import (PolyGF, digit_matrix, find_irreducible, is_irreducible, power_table,
                      unit_group_table)
from .bounds import upper_bound_sq
from .kernels import SpaceParams, korobov_kernel_table, walsh_kernel_table
from .pointset import HybridRule, lattice_column, walsh_column
from .wce import carry_fold, carry_fold_adjoint

STRATEGIES = ("alternate", "walsh_first", "korobov_first")
_CHUNK_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class CbcStrategy:
    """Interleaving order: a named strategy or an explicit 'W'/'K' schedule."""

    order: str = "alternate"

    def schedule(self, s1: int, s2: int) -> str:
        if self.order == "alternate":
            head = "WK" * min(s1, s2)
            return head + "W" * (s1 - min(s1, s2)) + "K" * (s2 - min(s1, s2))
        if self.order == "walsh_first":
            return "WK" + "W" * (s1 - 1) + "K" * (s2 - 1)
        if self.order == "korobov_first":
            return "WK" + "K" * (s2 - 1) + "W" * (s1 - 1)
        sched = self.order.upper()
        if set(sched) - {"W", "K"}:
            raise ValueError(f"unknown strategy {self.order!r}")
        if sched.count("W") != s1 or sched.count("K") != s2:
            raise ValueError(f"schedule {self.order!r} needs {s1} 'W' and {s2} 'K' symbols")
        if not sched.startswith("WK"):
            raise ValueError("schedule must begin with 'WK' (g_1 = 1, then z_1)")
        return sched


@dataclass(frozen=True)
class CbcRecord:
    step: int
    d1: int
    d2: int
    kind: str
    choice: str
    e2: float
    bound: float


TRACE_COLUMNS = ("step", "d1", "d2", "kind", "choice", "e2", "bound")


def fmt(x: float) -> str:
    return f"{x:.17g}"


@dataclass
class CbcTrace:
    records: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for r in self.records:
            w.writerow([r.step, r.d1, r.d2, r.kind, r.choice, fmt(r.e2), fmt(r.bound)])
        return buf.getvalue()


class PrefixCache:
    """Per-row products of the coordinates chosen so far, plus lookup tables."""

    def __init__(self, params: SpaceParams, m: int, f: PolyGF, *, exclude_zero_poly=False,
                 workers=1, tie_rtol=1e-12):
        self.params = params
        self.b = int(params.base)
        self.m = m
        self.n = self.b**m
        self.f = f
        self.digits = digit_matrix(self.b, m)
        self.walsh_prod = np.ones(self.n)
        self.korobov_prod = np.ones(self.n)
        self.g: list = []
        self.z: list = []
        self.omega = walsh_kernel_table(self.b, m, params.alpha1)
        self.tau = korobov_kernel_table(self.n, params.alpha2)
        self.exclude_zero_poly = exclude_zero_poly
        self.workers = workers
        self.tie_rtol = tie_rtol
        self._logs = None

    @property
    def d1(self):
        return len(self.g)

    @property
    def d2(self):
        return len(self.z)

    def log_tables(self):
        if self._logs is None:
            _, powers = power_table(self.f)
            # omega at nu_m(u / f) for u = gen**t, t in [0, N-1)
            nu_one = walsh_column(self.f, PolyGF(self.f.base, (1,)))
            om = self.omega[nu_one[powers]]
            log = np.zeros(self.n, dtype=np.int64)
            log[powers] = np.arange(len(powers))
            self._logs = powers, log, np.concatenate([om, om])
        return self._logs

    def error(self, weighted: np.ndarray) -> float:
        return math.fsum(weighted) / self.n**2 - 1.0

    def rebuild(self, rule: HybridRule) -> None:
        """Load the prefix of an existing rule."""
        for gj in rule.g:
            self.push_walsh(gj)
        for zj in rule.z:
            self.push_korobov(zj)

    def push_walsh(self, g: PolyGF) -> np.ndarray:
        gamma = self.params.gamma1[self.d1]
        factor = 1.0 + gamma * self.omega[walsh_column(self.f, g)]
        self.walsh_prod = self.walsh_prod * factor
        self.g.append(g)
        return factor

    def push_korobov(self, z: int) -> np.ndarray:
        gamma = self.params.gamma2[self.d2]
        factor = 1.0 + gamma * self.tau[lattice_column(z, self.n)]
        self.korobov_prod = self.korobov_prod * factor
        self.z.append(int(z))
        return factor

    def current_error(self) -> float:
        fold = carry_fold(self.korobov_prod, self.b, self.m, self.digits)
        return self.error(self.walsh_prod * fold)

    def _map_chunks(self, fn, count: int):
        size = max(1, _CHUNK_ELEMENTS // self.n)
        chunks = [(lo, min(lo + size, count)) for lo in range(0, count, size)]
        if self.workers > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(self.workers) as ex:
                parts = list(ex.map(lambda c: fn(*c), chunks))
        else:
            parts = [fn(*c) for c in chunks]
        return np.concatenate(parts) if parts else np.zeros(0)

    def _argmin(self, scores: np.ndarray) -> int:
        """Index of the minimum; near-ties go to the lowest index."""
        best = scores.min()
        slack = self.tie_rtol * max(1.0, abs(best))
        return int(np.flatnonzero(scores <= best + slack)[0])


def cbc_step_walsh(cache: PrefixCache, params: SpaceParams, d1: int):
    """Best g_{d1+1} over G_{b,m}; returns (polynomial, e2)."""
    if d1 != cache.d1:
        raise ValueError(f"cache holds {cache.d1} Walsh coordinates, not {d1}")
    if d1 >= params.s1:
        raise ValueError("all Walsh coordinates already chosen")
    gamma = params.gamma1[d1]
    n = cache.n
    fold = carry_fold(cache.korobov_prod, cache.b, cache.m, cache.digits)
    w = cache.walsh_prod * fold
    powers, log, om2 = cache.log_tables()
    wlog = w[powers]
    w0 = w[0] * cache.omega[0]
    order = len(powers)

    def scan(lo, hi):
        return np.array([w0 + np.dot(wlog, om2[k:k + order]) for k in range(lo, hi)])

    by_log = cache._map_chunks(scan, order)
    # candidate scores indexed by encoding
    total = w.sum()
    scores = np.empty(n)
    scores[0] = total + gamma * cache.omega[0] * total
    scores[powers] = total + gamma * by_log
    scores = scores / n**2 - 1.0
    start = 1 if cache.exclude_zero_poly else 0
    code = start + cache._argmin(scores[start:])
    g = PolyGF.from_int(cache.b, code)
    col = cache.omega[walsh_column(cache.f, g)]
    e2 = cache.error(w * (1.0 + gamma * col))
    return g, e2


def _unit_level_sums(cache: PrefixCache, q: np.ndarray, j: int) -> np.ndarray:
    """R[i', s'] = sum_{i,s} q(b^j E[i,s]) tau(b^j E[i+i', s+s']) over units mod b^(m-j)."""
    b = cache.b
    table = unit_group_table(b, cache.m - j) * b**j
    e, length = table.shape
    qv = q[table]
    tv = cache.tau[table]
    tv2 = np.concatenate([tv, tv], axis=1)

    def scan(lo, hi):
        out = np.empty((hi - lo, e))
        for r, sp in enumerate(range(lo, hi)):
            for ip in range(e):
                out[r, ip] = sum(np.dot(qv[i], tv2[(i + ip) % e, sp:sp + length])
                                 for i in range(e))
        return out

    return cache._map_chunks(scan, length).T


def cbc_step_korobov(cache: PrefixCache, params: SpaceParams, d2: int):
    """Best z_{d2+1} over the units modulo N; returns (z, e2)."""
    if d2 != cache.d2:
        raise ValueError(f"cache holds {cache.d2} lattice coordinates, not {d2}")
    if d2 >= params.s2:
        raise ValueError("all lattice coordinates already chosen")
    gamma = params.gamma2[d2]
    b, m, n = cache.b, cache.m, cache.n
    fold = carry_fold_adjoint(cache.walsh_prod, b, m, cache.digits)
    q = cache.korobov_prod * fold
    # v = b^j * w with w a unit mod b^(m-j); v*z mod N only sees z mod b^(m-j)
    top = unit_group_table(b, m)
    e0, l0 = top.shape
    sums = np.full(top.shape, q[0] * cache.tau[0])
    ii, ss = np.meshgrid(np.arange(e0), np.arange(l0), indexing="ij")
    for j in range(m):
        level = _unit_level_sums(cache, q, j)
        e, length = level.shape
        sums += level[ii % e, ss % length]
    units = top.ravel()
    order = np.argsort(units, kind="stable")
    units = units[order]
    scores = (q.sum() + gamma * sums.ravel()[order]) / n**2 - 1.0
    z = int(units[cache._argmin(scores)])
    e2 = cache.error(q * (1.0 + gamma * cache.tau[lattice_column(z, n)]))
    return z, e2


def cbc_construct(params: SpaceParams, m: int, strategy: CbcStrategy = None, f: PolyGF = None,
                  *, exclude_zero_poly=False, workers=1, tie_rtol=1e-12):
    """Run the construction for all s1 + s2 coordinates; returns (rule, trace)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if params.s1 < 1 or params.s2 < 1:
        raise ValueError("construction needs s1 >= 1 and s2 >= 1")
    strategy = strategy or CbcStrategy()
    b = params.base
    if f is None:
        f = find_irreducible(b, m)
    elif f.base != b or f.deg != m or not is_irreducible(f):
        raise ValueError(f"modulus must be irreducible of degree {m} over F_{b}")
    cache = PrefixCache(params, m, f, exclude_zero_poly=exclude_zero_poly, workers=workers,
                        tie_rtol=tie_rtol)
    n = cache.n
    trace = CbcTrace()

    one = PolyGF(b, (1,))
    cache.push_walsh(one)
    trace.records.append(CbcRecord(1, 1, 0, "W", one.to_digits(), cache.current_error(),
                                   upper_bound_sq(params, 1, 0, n)))
    for step, kind in enumerate(strategy.schedule(params.s1, params.s2)[1:], start=2):
        if kind == "W":
            g, e2 = cbc_step_walsh(cache, params, cache.d1)
            cache.push_walsh(g)
            choice = g.to_digits()
        else:
            z, e2 = cbc_step_korobov(cache, params, cache.d2)
            cache.push_korobov(z)
            choice = str(z)
        trace.records.append(CbcRecord(step, cache.d1, cache.d2, kind, choice, e2,
                                       upper_bound_sq(params, cache.d1, cache.d2, n)))
    rule = HybridRule(b, m, f, tuple(cache.g), tuple(cache.z))
    return rule, trace
