"""Hybrid quasi-Monte Carlo rules: polynomial lattice points for the Walsh part,
rank-1 lattice points for the Korobov part, built component by component."""

from .algebra import PolyGF, PrimeBase, find_irreducible, is_irreducible, laurent_expand
from .bounds import (TractabilityVerdict, WeightFamily, classify_tractability, lower_bound_sq,
                     nmin_upper, upper_bound_sq)
from .cbc import CbcStrategy, CbcTrace, cbc_construct
from .kernels import BaseFraction, SpaceParams, korobov_kernel_sum, mu, walsh_kernel_sum, zeta
from .pointset import HybridPointSet, HybridRule, RuleError, assemble, read_rule, write_rule
from .wce import ErrorReport, error_report, wce_sq_group, wce_sq_naive

__all__ = [
    "BaseFraction", "CbcStrategy", "CbcTrace", "ErrorReport", "HybridPointSet", "HybridRule",
    "PolyGF", "PrimeBase", "RuleError", "SpaceParams", "TractabilityVerdict", "WeightFamily",
    "assemble", "cbc_construct", "classify_tractability", "error_report", "find_irreducible",
    "is_irreducible", "korobov_kernel_sum", "laurent_expand", "lower_bound_sq", "mu",
    "nmin_upper", "read_rule", "upper_bound_sq", "walsh_kernel_sum", "wce_sq_group",
    "wce_sq_naive", "write_rule", "zeta",
]
