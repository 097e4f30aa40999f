"""Smooth test integrands with closed-form integrals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np


@dataclass(frozen=True)
class PolyProductIntegrand:
    """``f(x) = prod_j (1 + c_j (x_j**2 - 1/3))`` on ``[0,1]^s``; integral 1.

    ``|c_j| <= 1`` keeps ``f`` positive.
    """

    coefficients: tuple[float, ...]
    family: str = "poly-product"

    def __post_init__(self):
        c = tuple(float(v) for v in self.coefficients)
        if not c:
            raise ValueError("need at least one coefficient")
        if any(not abs(v) <= 1 for v in c):
            raise ValueError("coefficients must satisfy |c_j| <= 1")
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def harmonic(cls, s: int, power: float = 1.0) -> "PolyProductIntegrand":
        return cls(tuple((j + 1) ** -power for j in range(s)))

    @property
    def s(self) -> int:
        return len(self.coefficients)

    @property
    def exact(self) -> float:
        return 1.0

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.s:
            raise ValueError(f"points have {x.shape[1]} columns, integrand has s = {self.s}")
        c = np.asarray(self.coefficients)
        return np.prod(1.0 + c * (x * x - 1.0 / 3.0), axis=1)

    def to_json(self) -> dict:
        return {"family": self.family, "s": self.s, "coefficients": list(self.coefficients)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "PolyProductIntegrand":
        unknown = set(obj) - {"family", "s", "coefficients"}
        if unknown:
            raise ValueError(f"unknown integrand fields: {sorted(unknown)}")
        if obj.get("family", "poly-product") != "poly-product":
            raise ValueError(f"unknown integrand family {obj.get('family')!r}")
        c = obj["coefficients"]
        if "s" in obj and obj["s"] != len(c):
            raise ValueError("s does not match the number of coefficients")
        return cls(tuple(c))


def qmc_estimate(f, points: np.ndarray) -> float:
    """Equal-weight average of ``f`` over the rows of ``points``."""
    return float(np.mean(f(points)))


def fit_slope(x: Sequence[float], y: Sequence[float], base: float = 2.0) -> float:
    """Least-squares slope of ``log_base(y)`` against ``x``; nan if any ``y <= 0``."""
    y = np.asarray(y, dtype=float)
    if len(y) < 2 or np.any(~(y > 0)):
        return float("nan")
    return float(np.polyfit(np.asarray(x, dtype=float), np.log(y) / np.log(base), 1)[0])
