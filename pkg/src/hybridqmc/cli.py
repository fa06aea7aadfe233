"""Command-line front end.

Subcommands: construct, error, table, verify, classify.  Settings come from an
optional ``key=value`` config file (``--config``) and are overridden by flags
of the same name.  Exit status: 0 success, 1 invalid input, 2 computation or
property failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import random
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .algebra import PolyGF, find_irreducible
from .bounds import UnclassifiableWeights, WeightFamily, classify_tractability
from .cbc import STRATEGIES, CbcStrategy, cbc_construct, fmt
from .kernels import (DEFAULT_TOL, BaseFraction, SpaceParams, korobov_kernel_series,
                      korobov_kernel_table, mu, psi_b, wal, walsh_kernel_sum,
                      walsh_kernel_sum_bruteforce)
from .pointset import HybridRule, assemble, format_rule, parse_key_values, read_rule, write_rule
from .wce import NAIVE_MAX_POINTS, error_report, wce_sq_group, wce_sq_naive

EXIT_OK, EXIT_INVALID, EXIT_FAILED, EXIT_IO = 0, 1, 2, 3
TABLE_COLUMNS = ("m", "N", "e2", "lower", "upper", "ratio")


class UsageError(ValueError):
    pass


class PropertyFailure(RuntimeError):
    pass


@dataclass
class RunConfig:
    base: int = 2
    m: str = ""
    s1: int = 2
    s2: int = 2
    alpha1: float = 2.0
    alpha2: float = 2.0
    gamma1: str = "power:1,2"
    gamma2: str = "power:1,2"
    strategy: str = "alternate"
    tol: float = DEFAULT_TOL
    workers: int = 1
    exclude_zero_poly: bool = False
    seed: int = 0
    naive: bool = True
    rule: str = ""
    out: str = ""
    trace: str = ""
    explicit: set = field(default_factory=set, repr=False)

    def m_values(self) -> list[int]:
        """Single ``m`` or inclusive range ``lo:hi``."""
        text = self.m.strip()
        if not text:
            raise UsageError("m is required")
        try:
            if ":" in text:
                lo, hi = (int(t) for t in text.split(":"))
                if lo > hi:
                    raise UsageError(f"empty m-range {text!r}")
                vals = list(range(lo, hi + 1))
            else:
                vals = [int(text)]
        except ValueError as exc:
            raise UsageError(f"bad m value {text!r}") from exc
        if vals[0] < 1:
            raise UsageError("m must be >= 1")
        return vals

    def single_m(self) -> int:
        vals = self.m_values()
        if ":" in self.m:
            raise UsageError("this command takes a single m, not an m-range")
        return vals[0]

    def families(self) -> tuple[WeightFamily, WeightFamily]:
        return WeightFamily.parse(self.gamma1), WeightFamily.parse(self.gamma2)

    def params(self, s1: int = None, s2: int = None) -> SpaceParams:
        s1 = self.s1 if s1 is None else s1
        s2 = self.s2 if s2 is None else s2
        fam1, fam2 = self.families()
        return SpaceParams(self.base, self.alpha1, self.alpha2, fam1.weights(s1),
                           fam2.weights(s2))

    def cbc_strategy(self) -> CbcStrategy:
        return CbcStrategy(self.strategy)


_CONFIG_TYPES = {f.name: f.type for f in fields(RunConfig) if f.name != "explicit"}
_ALIASES = {"b": "base"}


def _coerce(key: str, value: str):
    kind = _CONFIG_TYPES[key]
    if kind == "bool":
        low = value.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"{key}: expected a boolean, got {value!r}")
    try:
        return {"int": int, "float": float, "str": str}[kind](value)
    except ValueError as exc:
        raise UsageError(f"{key}: cannot parse {value!r}") from exc


def load_config(text: str) -> dict:
    out = {}
    for key, value in parse_key_values(text).items():
        name = _ALIASES.get(key, key).replace("-", "_")
        if name not in _CONFIG_TYPES:
            raise UsageError(f"unknown config key {key!r}")
        out[name] = _coerce(name, value)
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise OSError(f"cannot read config {args.config}: {exc.strerror}") from exc
        try:
            values.update(load_config(text))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    for name in _CONFIG_TYPES:
        v = getattr(args, name, None)
        if v is not None:
            values[name] = v if isinstance(v, (bool, int, float)) else _coerce(name, v)
    cfg = RunConfig(**values)
    cfg.explicit = set(values)
    if cfg.workers < 1:
        raise UsageError("workers must be >= 1")
    if cfg.strategy not in STRATEGIES and set(cfg.strategy.upper()) - {"W", "K"}:
        raise UsageError(f"unknown strategy {cfg.strategy!r}")
    return cfg


def _write_text(path: str, text: str) -> None:
    Path(path).write_text(text, newline="\n")


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _report_row(m: int, rep) -> list:
    ratio = rep.upper_bound_sq / rep.e2 if rep.e2 > 0 else math.inf
    return [m, rep.n_points, fmt(rep.e2), fmt(rep.lower_bound_sq), fmt(rep.upper_bound_sq),
            fmt(ratio)]


# -- subcommands -----------------------------------------------------------------


def cmd_construct(cfg: RunConfig, out=sys.stdout) -> int:
    m = cfg.single_m()
    params = cfg.params()
    rule, trace = cbc_construct(params, m, cfg.cbc_strategy(),
                                exclude_zero_poly=cfg.exclude_zero_poly, workers=cfg.workers)
    if cfg.out:
        write_rule(rule, cfg.out)
    else:
        out.write(format_rule(rule))
    if cfg.trace:
        _write_text(cfg.trace, trace.to_csv())
    return EXIT_OK


def _load_rule_for(cfg: RunConfig) -> tuple[HybridRule, SpaceParams]:
    if not cfg.rule:
        raise UsageError("--rule is required")
    rule = read_rule(cfg.rule)
    if "base" in cfg.explicit and rule.base != cfg.base:
        raise UsageError(f"rule uses base {rule.base}, config says {cfg.base}")
    if cfg.m and cfg.single_m() != rule.m:
        raise UsageError(f"rule has m={rule.m}, config says m={cfg.m}")
    for key, have in (("s1", rule.d1), ("s2", rule.d2)):
        if key in cfg.explicit and getattr(cfg, key) != have:
            raise UsageError(f"rule has {key}={have}, config says {getattr(cfg, key)}")
    if rule.d1 + rule.d2 < 1:
        raise UsageError("rule has no coordinates")
    fam1, fam2 = cfg.families()
    params = SpaceParams(rule.base, cfg.alpha1, cfg.alpha2, fam1.weights(rule.d1),
                         fam2.weights(rule.d2))
    return rule, params


def cmd_error(cfg: RunConfig, out=sys.stdout) -> int:
    rule, params = _load_rule_for(cfg)
    rep = error_report(rule, params)
    verdict = "ok" if rep.lower_ok and rep.upper_ok else (
        "below lower bound" if not rep.lower_ok else "above upper bound")
    out.write(f"N={rep.n_points} d1={rep.d1} d2={rep.d2}\n")
    out.write(f"e2={fmt(rep.e2_reported)}\n")
    out.write(f"lower={fmt(rep.lower_bound_sq)}\n")
    out.write(f"upper={fmt(rep.upper_bound_sq)}\n")
    out.write(f"sandwich: {verdict}\n")
    if cfg.out:
        _write_text(cfg.out, _csv([_report_row(rule.m, rep)], TABLE_COLUMNS))
    return EXIT_OK


def cmd_table(cfg: RunConfig, out=sys.stdout) -> int:
    params = cfg.params()
    rows = []
    for m in cfg.m_values():
        rule, _ = cbc_construct(params, m, cfg.cbc_strategy(),
                                exclude_zero_poly=cfg.exclude_zero_poly, workers=cfg.workers)
        rows.append(_report_row(m, error_report(rule, params)))
    text = _csv(rows, TABLE_COLUMNS)
    if cfg.out:
        _write_text(cfg.out, text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_classify(cfg: RunConfig, out=sys.stdout) -> int:
    fam1, fam2 = cfg.families()
    try:
        verdict = classify_tractability(fam1, fam2)
    except UnclassifiableWeights as exc:
        raise UsageError(f"cannot classify: {exc}") from exc
    out.write(f"verdict: {verdict.label}\n")
    out.write(verdict.report())
    return EXIT_OK


# -- verify ----------------------------------------------------------------------


def _random_rule(rng: random.Random, b: int, m: int, d1: int, d2: int) -> HybridRule:
    f = find_irreducible(b, m)
    n = b**m
    g = tuple(PolyGF.from_int(b, rng.randrange(n)) for _ in range(d1))
    units = [z for z in range(1, n) if z % b]
    z = tuple(rng.choice(units) for _ in range(d2))
    return HybridRule(b, m, f, g, z)


def suite_naive_vs_group(cfg, params, rule, rng, hooks):
    rules = [rule] + [_random_rule(rng, rule.base, rule.m, rule.d1, rule.d2) for _ in range(5)]
    for r in rules:
        a, c = wce_sq_naive(assemble(r), params, cfg.tol), wce_sq_group(r, params)
        if abs(a - c) > 1e-10:
            raise PropertyFailure(f"g={[x.to_digits() for x in r.g]} z={list(r.z)}: "
                                  f"naive {fmt(a)} vs group {fmt(c)}")
    return f"{len(rules)} rules"


def suite_closed_form(cfg, params, rule, rng, hooks):
    b = int(params.base)
    blocks = max(2, int(14 * math.log(2) / math.log(b)))
    for _ in range(20):
        prec = rng.randint(1, blocks)
        z = BaseFraction(b, rng.randrange(b**prec), prec)
        exact = walsh_kernel_sum(z, params.alpha1)
        brute = walsh_kernel_sum_bruteforce(z, params.alpha1, blocks)
        if abs(exact - brute.value) > brute.tail_bound + 1e-12:
            raise PropertyFailure(f"walsh z={z.numerator}/{b}^{prec}: closed {fmt(exact)} "
                                  f"vs truncated {fmt(brute.value)}")
    n = 64
    table = korobov_kernel_table(n, params.alpha2)
    terms = 20000
    tail = 2.0 / ((params.alpha2 - 1) * terms ** (params.alpha2 - 1))
    for v in range(n):
        series = korobov_kernel_series(v / n, params.alpha2, terms)
        if abs(table[v] - series) > tail + 1e-9:
            raise PropertyFailure(f"korobov z={v}/{n}: table {fmt(table[v])} vs series "
                                  f"{fmt(series)}")
    return f"walsh blocks={blocks}, korobov {n} grid points"


def suite_mu_omega(cfg, params, rule, rng, hooks):
    b, alpha = int(params.base), params.alpha1
    mu_value = hooks.get("mu", mu)(alpha, b)
    zero = walsh_kernel_sum(BaseFraction(b, 0, 1), alpha)
    if abs(mu_value - zero) > 1e-12 * max(1.0, abs(zero)):
        raise PropertyFailure(f"mu({alpha:g}) = {fmt(mu_value)} but omega(0) = {fmt(zero)}")
    # each block of frequencies b^a <= k < b^(a+1) sums to zero at z != 0
    m = 3
    for v in range(1, b**m):
        z = BaseFraction(b, v, m)
        for a in range(m + 2):
            za = z.extend(max(m, a + 1))
            s = sum(wal(k, za) for k in range(b**a, b ** (a + 1)))
            first = next(i for i, d in enumerate(z.digits, 1) if d)
            expect = (b - 1) * b**a if a + 1 < first else (-(b**a) if a + 1 == first else 0)
            if abs(s - expect) > 1e-9 * b**a:
                raise PropertyFailure(f"block {a} at z={v}/{b}^{m}: sum {s} expected {expect}")
    return f"mu = omega(0) = {fmt(zero)}"


def suite_character_sums(cfg, params, rule, rng, hooks):
    b = int(params.base)
    for m in range(1, 3):
        n = b**m
        grid = [BaseFraction(b, g, m).extend(2 * m) for g in range(n)]
        for k in range(b ** (2 * m)):
            total = sum(wal(k, x) for x in grid)
            expect = n if k % n == 0 else 0
            if abs(total - expect) > 1e-9:
                raise PropertyFailure(f"b={b} m={m} k={k}: character sum {total} != {expect}")
        for alpha in (1.5, 2.0, 3.0):
            aligned = sum(b ** (-alpha * psi_b(k, b)) for k in range(n, n * b**6, n))
            # remaining tail of sum over l >= b^6 of b^(-alpha(m + psi(l)))
            tail = b ** (-alpha * m) * (b - 1) * sum(b ** ((1 - alpha) * a) for a in range(6, 200))
            expect = mu(alpha, b) / b ** (alpha * m)
            if abs(aligned + tail - expect) > 1e-10:
                raise PropertyFailure(f"b={b} m={m} alpha={alpha}: aligned sum "
                                      f"{fmt(aligned + tail)} vs {fmt(expect)}")
    return "full-period and aligned-frequency sums"


def suite_sandwich(cfg, params, rule, rng, hooks):
    rep = error_report(rule, params)
    if not rep.upper_ok:
        raise PropertyFailure(f"e2 {fmt(rep.e2)} above upper {fmt(rep.upper_bound_sq)}")
    if not rep.lower_ok:
        raise PropertyFailure(f"e2 {fmt(rep.e2)} below lower {fmt(rep.lower_bound_sq)}")
    return f"{fmt(rep.lower_bound_sq)} <= {fmt(rep.e2)} <= {fmt(rep.upper_bound_sq)}"


SUITES = (
    ("naive-vs-group", suite_naive_vs_group),
    ("closed-form-vs-series", suite_closed_form),
    ("mu/omega consistency", suite_mu_omega),
    ("character sums", suite_character_sums),
    ("bound sandwich", suite_sandwich),
)

FAULTS = {"mu": lambda alpha, b: mu(alpha, b) * (1.0 + 1e-3)}


def cmd_verify(cfg: RunConfig, out=sys.stdout, fault: str = None) -> int:
    if not cfg.m:
        cfg = replace(cfg, m="4")
    m = cfg.single_m()
    if cfg.naive and cfg.base**m > NAIVE_MAX_POINTS:
        raise UsageError(f"naive oracle needs N <= {NAIVE_MAX_POINTS}; N = {cfg.base**m} "
                         "(pass --no-naive or lower m)")
    params = cfg.params()
    rule, _ = cbc_construct(params, m, cfg.cbc_strategy(),
                            exclude_zero_poly=cfg.exclude_zero_poly, workers=cfg.workers)
    hooks = {fault: FAULTS[fault]} if fault else {}
    failed = []
    for name, suite in SUITES:
        if name == "naive-vs-group" and not cfg.naive:
            out.write(f"SKIP {name}\n")
            continue
        try:
            detail = suite(cfg, params, rule, random.Random(cfg.seed), hooks)
        except PropertyFailure as exc:
            out.write(f"FAIL {name}: {exc}\n")
            failed.append(name)
        else:
            out.write(f"PASS {name}: {detail}\n")
    return EXIT_FAILED if failed else EXIT_OK


# -- argument parsing ------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value settings file; flags override it")
    common.add_argument("-b", "--base", type=int)
    common.add_argument("--m", help="precision m, or an inclusive range lo:hi for 'table'")
    common.add_argument("--s1", type=int, help="number of Walsh coordinates")
    common.add_argument("--s2", type=int, help="number of Korobov coordinates")
    common.add_argument("--alpha1", type=float)
    common.add_argument("--alpha2", type=float)
    common.add_argument("--gamma1", help="explicit:v1,v2,... | power:c,a | const:c")
    common.add_argument("--gamma2", help="explicit:v1,v2,... | power:c,a | const:c")
    common.add_argument("--strategy", help=f"{' | '.join(STRATEGIES)} | explicit W/K schedule")
    common.add_argument("--tol", type=float, help="Korobov series tolerance for the naive sum")
    common.add_argument("--workers", type=int, help="threads for candidate scans")
    common.add_argument("--exclude-zero-poly", dest="exclude_zero_poly", action="store_const",
                        const=True, help="drop g = 0 from the Walsh candidates")
    common.add_argument("--seed", type=int)
    common.add_argument("--rule", help="rule file to read")
    common.add_argument("--out", help="output file (rule for construct, CSV otherwise)")
    common.add_argument("--trace", help="CBC trace CSV (construct)")

    parser = _Parser(prog="hybridqmc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("construct", parents=[common], help="build a rule by CBC")
    sub.add_parser("error", parents=[common], help="report e2 and bounds for a rule file")
    sub.add_parser("table", parents=[common], help="CSV of e2 and bounds over an m-range")
    p = sub.add_parser("verify", parents=[common], help="run the oracle suites")
    p.add_argument("--no-naive", dest="naive", action="store_const", const=False)
    p.add_argument("--fault", choices=sorted(FAULTS), help=argparse.SUPPRESS)
    sub.add_parser("classify", parents=[common], help="tractability verdict for weight families")
    return parser


COMMANDS = {"construct": cmd_construct, "error": cmd_error, "table": cmd_table,
            "classify": cmd_classify}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "verify":
            return cmd_verify(cfg, out, getattr(args, "fault", None))
        return COMMANDS[args.command](cfg, out)
    except OSError as exc:
        print(f"hybridqmc: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, ValueError) as exc:
        print(f"hybridqmc: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (PropertyFailure, ArithmeticError) as exc:
        print(f"hybridqmc: computation failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
