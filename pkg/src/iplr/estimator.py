"""scikit-learn style wrapper around rule construction."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .criteria import evaluate
from .interlace import generate_interlaced_points
from .search import ALGORITHMS, SearchConfig, construct
from .validation import check_criterion, check_params, check_weights


class InterlacedLatticeRule(BaseEstimator):
    """Construct an interlaced polynomial lattice rule on ``fit``.

    ``fit`` ignores its data arguments (the rule depends only on the
    hyper-parameters) and sets ``rule_``, ``generating_vector_``,
    ``criterion_value_`` and ``trace_``.
    """

    def __init__(self, b=2, m=8, s=2, d=2, alpha=2, criterion="b1",
                 algorithm="fast-cbc", weights=None):
        self.b = b
        self.m = m
        self.s = s
        self.d = d
        self.alpha = alpha
        self.criterion = criterion
        self.algorithm = algorithm
        self.weights = weights

    def _config(self) -> SearchConfig:
        b, m, s, d = check_params(self.b, self.m, self.s, self.d)
        kind = check_criterion(self.criterion, self.alpha, d)
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {sorted(ALGORITHMS)}")
        return SearchConfig(b, m, s, d, kind, check_weights(self.weights, s))

    def fit(self, X=None, y=None):
        config = self._config()
        result = construct(config, self.algorithm)
        self.config_ = config
        self.rule_ = result.rule
        self.generating_vector_ = result.generating_vector
        self.criterion_value_ = result.value.value
        self.trace_ = np.array([cv.value for cv in result.criterion_trace])
        self.result_ = result
        return self

    def points(self) -> np.ndarray:
        """Interlaced points as an ``(N, s)`` float array."""
        check_is_fitted(self, "rule_")
        return generate_interlaced_points(self.rule_).as_float()

    def integrate(self, f) -> float:
        """Equal-weight rule applied to a vectorised ``f: (N, s) -> (N,)``."""
        values = np.asarray(f(self.points()), dtype=float)
        if values.shape != (self.rule_.n_points,):
            raise ValueError("integrand must return one value per point")
        return float(values.mean())

    def score(self, X=None, y=None) -> float:
        """Negated criterion value, so larger is better."""
        check_is_fitted(self, "rule_")
        return -evaluate(self.rule_, self.config_.weights, self.config_.criterion).value
