"""Digit interlacing of points and indices.

Lattice coordinates carry exactly ``m`` digits, so interlacing ``d`` of
them yields a coordinate with exactly ``d*m`` digits (numerator over
``b**(d*m)``); no truncation of infinite expansions is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .lattice import PointSet, PolyLatticeRule, generate_lattice_points


def interlace_int(k: Sequence[int], d: int, b: int) -> int:
    """Weave the digits of ``d`` integers: digit ``a`` of ``k[r]`` goes to position ``a*d + r``."""
    if len(k) != d:
        raise ValueError(f"expected {d} integers, got {len(k)}")
    out = 0
    for r, kr in enumerate(k):
        if kr < 0:
            raise ValueError("indices must be non-negative")
        a = 0
        while kr:
            kr, digit = divmod(kr, b)
            out += digit * b ** (a * d + r)
            a += 1
    return out


def deinterlace_int(l: int, d: int, b: int) -> tuple[int, ...]:
    if l < 0:
        raise ValueError("index must be non-negative")
    comps = [0] * d
    pos = 0
    while l:
        l, digit = divmod(l, b)
        a, r = divmod(pos, d)
        comps[r] += digit * b**a
        pos += 1
    return tuple(comps)


def interlace_int_array(k: np.ndarray, d: int, b: int) -> np.ndarray:
    """Vectorised :func:`interlace_int` over rows of an ``(T, d)`` integer array."""
    k = np.asarray(k, dtype=np.int64)
    out = np.zeros(k.shape[0], dtype=np.int64)
    for r in range(d):
        v = k[:, r].copy()
        a = 0
        while np.any(v):
            out += (v % b) * b ** (a * d + r)
            v //= b
            a += 1
    return out


def interlace_vector(k: Sequence[int], d: int, b: int) -> tuple[int, ...]:
    """Blockwise :func:`interlace_int` of a ``d*s`` vector."""
    if len(k) % d:
        raise ValueError("vector length must be a multiple of d")
    return tuple(interlace_int(k[i:i + d], d, b) for i in range(0, len(k), d))


def interlace_point(z: Sequence[int], d: int, b: int, m: int) -> int:
    """Interlace ``d`` m-digit numerators into one (d*m)-digit numerator.

    Digit ``a`` (1-based from the top) of ``z[r-1]`` lands at position
    ``r + (a-1)*d`` of the output.
    """
    if len(z) != d:
        raise ValueError(f"expected {d} coordinates, got {len(z)}")
    out = 0
    for r, zr in enumerate(z, start=1):
        if not 0 <= zr < b**m:
            raise ValueError("numerator out of range")
        for a in range(1, m + 1):
            digit = (zr // b ** (m - a)) % b
            out += digit * b ** (d * m - (r + (a - 1) * d))
    return out


def interlace_columns(z: np.ndarray, d: int, b: int, m: int) -> np.ndarray:
    """Vectorised :func:`interlace_point` over rows of an ``(N, d)`` array."""
    z = np.asarray(z, dtype=np.int64)
    if b ** (d * m) >= 2**63:
        raise OverflowError("interlaced numerators exceed 64-bit range")
    out = np.zeros(z.shape[0], dtype=np.int64)
    for r in range(1, d + 1):
        zr = z[:, r - 1]
        for a in range(1, m + 1):
            digit = (zr // b ** (m - a)) % b
            out += digit * b ** (d * m - (r + (a - 1) * d))
    return out


@dataclass(frozen=True)
class InterlacedRule:
    d: int
    s: int
    base: PolyLatticeRule

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("interlacing factor must be at least 2")
        if self.base.s_total != self.d * self.s:
            raise ValueError(f"underlying rule has {self.base.s_total} components, need d*s = {self.d * self.s}")

    @property
    def b(self) -> int:
        return self.base.b

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def n_points(self) -> int:
        return self.base.n_points


@dataclass(frozen=True, eq=False)
class InterlacedPointSet(PointSet):
    d: int = 2


def generate_interlaced_points(irule: InterlacedRule) -> InterlacedPointSet:
    b, m, d = irule.b, irule.m, irule.d
    z = generate_lattice_points(irule.base).numerators
    cols = np.stack(
        [interlace_columns(z[:, j * d:(j + 1) * d], d, b, m) for j in range(irule.s)], axis=1
    )
    return InterlacedPointSet(b, m, cols, d * m, d)
