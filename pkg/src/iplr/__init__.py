"""Interlaced polynomial lattice rules: construction, criteria and oracles."""

__version__ = "0.1.0"

from .criteria import (
    CriterionKind,
    CriterionValue,
    eval_b1,
    eval_b2,
    evaluate,
    optimize_lambda,
    oracle_b,
    oracle_wce,
    theoretical_bound,
)
from .descriptor import RuleDescriptor
from .estimator import InterlacedLatticeRule
from .gfpoly import Poly, find_irreducible, is_irreducible
from .integrand import PolyProductIntegrand
from .interlace import InterlacedRule, generate_interlaced_points
from .lattice import PolyLatticeRule, generate_lattice_points
from .search import (
    SearchConfig,
    SearchResult,
    cbc_construct,
    construct,
    exhaustive_construct,
    fast_cbc_construct,
    korobov_construct,
)
from .walsh import Weights

__all__ = [
    "CriterionKind",
    "CriterionValue",
    "InterlacedLatticeRule",
    "InterlacedRule",
    "Poly",
    "PolyLatticeRule",
    "PolyProductIntegrand",
    "RuleDescriptor",
    "SearchConfig",
    "SearchResult",
    "Weights",
    "cbc_construct",
    "construct",
    "eval_b1",
    "eval_b2",
    "evaluate",
    "exhaustive_construct",
    "fast_cbc_construct",
    "find_irreducible",
    "generate_interlaced_points",
    "generate_lattice_points",
    "is_irreducible",
    "korobov_construct",
    "optimize_lambda",
    "oracle_b",
    "oracle_wce",
    "theoretical_bound",
]
