"""Walsh functions, smoothness weights and the weight family gamma.

Coordinates are handled as exact integer numerators ``x_num`` over
``b**digits``; digit ``i`` (1-based, most significant first) of ``x`` is
``(x_num // b**(digits - i)) % b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

MAX_GENERAL_DIM = 20


def _digits_lsb(k: int, b: int) -> list[int]:
    out = []
    while k:
        k, r = divmod(k, b)
        out.append(r)
    return out


def wal_exponent(k: int, x_num: int, digits: int, b: int) -> int:
    """Exponent ``e`` with ``wal_k(x) = omega_b**e``.

    Digits of ``x`` beyond position ``digits`` are zero.
    """
    if not 0 <= x_num < b**digits:
        raise ValueError("numerator out of range")
    e = 0
    for i, kappa in enumerate(_digits_lsb(k, b)):
        if i >= digits:
            break
        if kappa:
            e += kappa * ((x_num // b ** (digits - 1 - i)) % b)
    return e % b


def wal_exponents(k: int, x_num: np.ndarray, digits: int, b: int) -> np.ndarray:
    """Vectorised :func:`wal_exponent` over an array of numerators."""
    x_num = np.asarray(x_num, dtype=np.int64)
    e = np.zeros(x_num.shape, dtype=np.int64)
    for i, kappa in enumerate(_digits_lsb(k, b)):
        if i >= digits:
            break
        if kappa:
            e += kappa * ((x_num // b ** (digits - 1 - i)) % b)
    return e % b


def num_digits(k: int, b: int) -> int:
    """Number of base-b digits of ``k`` (0 for ``k == 0``); equals mu_1(k)."""
    n = 0
    while k:
        k //= b
        n += 1
    return n


def mu(k: int, alpha: int, b: int) -> int:
    """Smoothness weight: sum of the positions of the ``alpha`` leading nonzero digits."""
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    positions = [i + 1 for i, c in enumerate(_digits_lsb(k, b)) if c]
    positions.reverse()
    return sum(positions[:alpha])


def r_alpha(k: int | Sequence[int], alpha: int, b: int) -> float:
    """``b**(-mu_alpha(k))``, or the product over components of a vector."""
    if isinstance(k, (int, np.integer)):
        return float(b) ** (-mu(int(k), alpha, b))
    return math.prod(r_alpha(int(kj), alpha, b) for kj in k)


def r_tilde1(k: int, alpha: int, d: int, b: int) -> float:
    if k == 0:
        return 1.0
    return float(b) ** (-min(alpha, d) * num_digits(k, b) - alpha / 2)


def r_tilde2(k: int, j: int, d: int, b: int) -> float:
    """Position-dependent weight for global component index ``j`` (1-based)."""
    if k == 0:
        return 1.0
    return float(b) ** (-d * num_digits(k, b) - j + d * math.ceil(j / d))


def level(z_num: int, digits: int, b: int) -> int:
    """Position of the first nonzero digit of ``z``, or 0 when ``z == 0``.

    For ``z > 0`` this is ``-floor(log_b z)``.
    """
    if z_num == 0:
        return 0
    return digits - num_digits(z_num, b) + 1


def levels(z_num: np.ndarray, digits: int, b: int) -> np.ndarray:
    """Vectorised :func:`level`."""
    z = np.asarray(z_num, dtype=np.int64)
    nd = np.zeros(z.shape, dtype=np.int64)
    for i in range(digits):
        nd += z >= b**i
    return np.where(z == 0, 0, digits - nd + 1)


def _check_min(alpha: int, d: int) -> int:
    mn = min(alpha, d)
    if mn < 2:
        raise ValueError("interlacing/smoothness must exceed 1")
    return mn


def phi1_level(xi: int, alpha: int, d: int, b: int) -> float:
    """phi_1 as a function of the leading-digit level ``xi`` (0 means z = 0)."""
    mn = _check_min(alpha, d)
    pw = 0.0 if xi == 0 else float(b) ** (-(mn - 1) * xi)
    return (b - 1 - pw * (b**mn - 1)) / (float(b) ** ((alpha + 2) / 2) * (b ** (mn - 1) - 1))


def phi2_level(xi: int, d: int, b: int) -> float:
    if d < 2:
        raise ValueError("interlacing/smoothness must exceed 1")
    pw = 0.0 if xi == 0 else float(b) ** (-(d - 1) * xi)
    return b ** (d - 1) * (b - 1 - pw * (b**d - 1)) / (b ** (d - 1) - 1)


def phi1(z_num: int, digits: int, alpha: int, d: int, b: int) -> float:
    return phi1_level(level(z_num, digits, b), alpha, d, b)


def phi2(z_num: int, digits: int, d: int, b: int) -> float:
    return phi2_level(level(z_num, digits, b), d, b)


def phi1_table(m: int, alpha: int, d: int, b: int) -> np.ndarray:
    """phi_1 indexed by level 0..m."""
    return np.array([phi1_level(xi, alpha, d, b) for xi in range(m + 1)])


def phi2_table(m: int, d: int, b: int) -> np.ndarray:
    return np.array([phi2_level(xi, d, b) for xi in range(m + 1)])


def subset_mask(v: int | Iterable[int]) -> int:
    """Bitmask of a subset of {1..s}; bit ``j-1`` marks coordinate ``j``."""
    if isinstance(v, (int, np.integer)):
        if v < 0:
            raise ValueError("negative subset mask")
        return int(v)
    mask = 0
    for j in v:
        if j < 1:
            raise ValueError("coordinates are 1-based")
        mask |= 1 << (j - 1)
    return mask


@dataclass(frozen=True)
class Weights:
    """Coordinate weights gamma_v, product-form or an explicit subset table.

    ``table`` is a dense array over bitmasks (entry 0 unused; gamma_empty
    is kept separately).
    """

    kind: str
    s: int
    gammas: tuple[float, ...] = ()
    table: tuple[float, ...] = ()
    gamma_empty: float = 1.0

    def __post_init__(self):
        if self.kind not in ("product", "general"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.s < 1:
            raise ValueError("dimension must be positive")
        if not self.gamma_empty > 0:
            raise ValueError("gamma_empty must be positive")
        if self.kind == "product":
            if len(self.gammas) != self.s:
                raise ValueError("need one product weight per coordinate")
            if any(not g >= 0 for g in self.gammas):
                raise ValueError("weights must be non-negative")
        else:
            if self.s > MAX_GENERAL_DIM:
                raise ValueError(f"general weights limited to s <= {MAX_GENERAL_DIM}")
            if len(self.table) != 2**self.s:
                raise ValueError("general weight table must have 2**s entries")
            if any(not g >= 0 for g in self.table):
                raise ValueError("weights must be non-negative")

    @classmethod
    def product(cls, gammas: Sequence[float], gamma_empty: float = 1.0) -> "Weights":
        return cls("product", len(gammas), gammas=tuple(float(g) for g in gammas),
                   gamma_empty=float(gamma_empty))

    @classmethod
    def general(cls, table: Mapping[int, float], s: int, gamma_empty: float = 1.0) -> "Weights":
        dense = [0.0] * (2**s)
        for key, val in table.items():
            mask = subset_mask(key)
            if mask == 0:
                raise ValueError("gamma of the empty set goes in gamma_empty")
            if mask >= 2**s:
                raise ValueError(f"subset {key} not contained in 1..{s}")
            dense[mask] = float(val)
        return cls("general", s, table=tuple(dense), gamma_empty=float(gamma_empty))

    def gamma(self, v: int | Iterable[int]) -> float:
        mask = subset_mask(v)
        if mask >= 2**self.s:
            raise ValueError("subset exceeds dimension")
        if mask == 0:
            return self.gamma_empty
        if self.kind == "general":
            return self.table[mask]
        out = 1.0
        j = 0
        while mask:
            if mask & 1:
                out *= self.gammas[j]
            mask >>= 1
            j += 1
        return out

    def gamma_tilde(self, v: int | Iterable[int], alpha: int, d: int, b: int) -> float:
        mask = subset_mask(v)
        return self.gamma(mask) * float(b) ** (alpha * (2 * d - 1) * bin(mask).count("1") / 2)

    def dense(self) -> np.ndarray:
        """gamma over all 2**s bitmasks (entry 0 = gamma_empty)."""
        if self.kind == "general":
            arr = np.array(self.table, dtype=float)
            arr[0] = self.gamma_empty
            return arr
        if self.s > MAX_GENERAL_DIM:
            raise ValueError("product weights too large to materialise")
        arr = np.ones(1)
        for g in self.gammas:
            arr = np.concatenate([arr, arr * g])
        arr[0] = self.gamma_empty
        return arr

    def is_zero(self) -> bool:
        if self.kind == "product":
            return all(g == 0 for g in self.gammas)
        return all(g == 0 for g in self.table[1:])

    def scaled(self, power: float) -> "Weights":
        """Weights gamma_v**power (gamma_empty unchanged)."""
        if self.kind == "product":
            return Weights.product([g**power for g in self.gammas], self.gamma_empty)
        return Weights("general", self.s, table=tuple(g**power for g in self.table),
                       gamma_empty=self.gamma_empty)

    def to_json(self) -> dict:
        if self.kind == "product":
            return {"kind": "product", "gammas": list(self.gammas), "gamma_empty": self.gamma_empty}
        return {
            "kind": "general",
            "s": self.s,
            "table": {str(mask): g for mask, g in enumerate(self.table) if mask and g},
            "gamma_empty": self.gamma_empty,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Weights":
        kind = obj.get("kind")
        if kind == "product":
            unknown = set(obj) - {"kind", "gammas", "gamma_empty"}
            if unknown:
                raise ValueError(f"unknown weight fields: {sorted(unknown)}")
            return cls.product(obj["gammas"], obj.get("gamma_empty", 1.0))
        if kind == "general":
            unknown = set(obj) - {"kind", "s", "table", "gamma_empty"}
            if unknown:
                raise ValueError(f"unknown weight fields: {sorted(unknown)}")
            table = {int(k): float(v) for k, v in obj["table"].items()}
            s = obj.get("s")
            if s is None:
                s = max((k.bit_length() for k in table), default=1)
            return cls.general(table, int(s), obj.get("gamma_empty", 1.0))
        raise ValueError(f"unknown weight kind {kind!r}")
