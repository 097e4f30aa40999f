"""Argument checks shared by the estimator and the command line."""

from __future__ import annotations

from numbers import Integral, Real
from typing import Sequence

import numpy as np

from .criteria import CriterionKind
from .gfpoly import check_base
from .walsh import Weights


def check_int(value, name: str, minimum: int | None = None, maximum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ValueError(f"{name} must be <= {maximum}, got {value}")
    return value


def check_criterion(criterion, alpha, d: int) -> CriterionKind:
    """Normalise ``"b1"``/``"b2"`` (or a CriterionKind) and validate it against ``d``."""
    if isinstance(criterion, CriterionKind):
        kind = criterion
    elif isinstance(criterion, str) and criterion.upper() in ("B1", "B2"):
        alpha = None if alpha is None else check_int(alpha, "alpha", 1)
        if criterion.upper() == "B1":
            kind = CriterionKind.b1(d if alpha is None else alpha)
        else:
            kind = CriterionKind.b2(alpha)
    else:
        raise ValueError(f"criterion must be 'b1' or 'b2', got {criterion!r}")
    kind.validate(d)
    return kind


def check_weights(weights, s: int) -> Weights:
    """Accept a Weights object, a sequence of product weights or ``None`` (gamma_j = j**-2)."""
    if weights is None:
        return Weights.product([(j + 1) ** -2.0 for j in range(s)])
    if isinstance(weights, Weights):
        w = weights
    elif isinstance(weights, dict):
        w = Weights.from_json(weights)
    elif isinstance(weights, Sequence) or isinstance(weights, np.ndarray):
        vals = list(weights)
        if any(isinstance(v, bool) or not isinstance(v, Real) for v in vals):
            raise TypeError("product weights must be real numbers")
        w = Weights.product(vals)
    else:
        raise TypeError(f"cannot interpret weights of type {type(weights).__name__}")
    if w.s != s:
        raise ValueError(f"weights have dimension {w.s}, expected s = {s}")
    return w


def check_params(b, m, s, d) -> tuple[int, int, int, int]:
    b = check_int(b, "b", 2)
    check_base(b)
    return b, check_int(m, "m", 1), check_int(s, "s", 1), check_int(d, "d", 2)
