"""Classical polynomial lattice point sets and their dual lattices.

Points are exact: coordinate ``(n, j)`` is stored as the integer numerator
of ``v_m(n(x) q_j(x) / p(x))`` over the denominator ``b**m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gfpoly import (
    Poly,
    check_base,
    laurent_digits,
    poly_add,
    poly_from_int,
    poly_mul_mod,
    poly_to_int,
)
from .walsh import wal_exponents


@dataclass(frozen=True)
class PolyLatticeRule:
    b: int
    m: int
    p: Poly
    q: tuple[Poly, ...]

    def __post_init__(self):
        check_base(self.b)
        if self.p.base != self.b or any(qj.base != self.b for qj in self.q):
            raise ValueError("all polynomials must share the rule's base")
        if self.p.degree != self.m:
            raise ValueError(f"modulus degree {self.p.degree} != m = {self.m}")
        for qj in self.q:
            if qj.degree >= self.m:
                raise ValueError("generating vector components need degree < m")
        object.__setattr__(self, "q", tuple(self.q))

    @classmethod
    def from_ints(cls, b: int, m: int, p: int, q: Sequence[int]) -> "PolyLatticeRule":
        return cls(b, m, poly_from_int(p, b), tuple(poly_from_int(int(c), b) for c in q))

    @property
    def s_total(self) -> int:
        return len(self.q)

    @property
    def n_points(self) -> int:
        return self.b**self.m


@dataclass(frozen=True, eq=False)
class PointSet:
    """``N x s`` table of numerators over ``b**digits``."""

    b: int
    m: int
    numerators: np.ndarray
    digits: int

    def __post_init__(self):
        arr = np.asarray(self.numerators, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "numerators", arr)

    @property
    def denominator(self) -> int:
        return self.b**self.digits

    @property
    def n_points(self) -> int:
        return self.numerators.shape[0]

    @property
    def dim(self) -> int:
        return self.numerators.shape[1]

    def as_float(self) -> np.ndarray:
        return self.numerators / float(self.denominator)


# --- table machinery -------------------------------------------------------
# Both n -> n*q mod p and r -> v_m(r/p) are F_b-linear in the digits of the
# argument, so the full tables are spans of m basis vectors.


def _to_digits(values: np.ndarray, b: int, width: int) -> np.ndarray:
    """(len, width) digit array, least significant first."""
    values = np.asarray(values, dtype=np.int64)
    out = np.empty(values.shape + (width,), dtype=np.int64)
    v = values.copy()
    for i in range(width):
        out[..., i] = v % b
        v //= b
    return out


def _from_digits(digits: np.ndarray, b: int) -> np.ndarray:
    width = digits.shape[-1]
    weights = b ** np.arange(width, dtype=np.int64)
    return digits @ weights


def span_table(basis: np.ndarray, b: int) -> np.ndarray:
    """All F_b-combinations ``sum_i c_i basis[i]`` indexed by ``n = sum_i c_i b**i``.

    ``basis`` has shape (m, ...) holding digit vectors in the last axis;
    the result has shape (b**m, ...).
    """
    basis = np.asarray(basis, dtype=np.int64)
    table = np.zeros((1,) + basis.shape[1:], dtype=np.int64)
    for vec in basis:
        blocks = [(table + c * vec) % b for c in range(b)]
        table = np.concatenate(blocks, axis=0)
    return table


def _span_xor(basis: Sequence[int]) -> np.ndarray:
    """Base-2 specialisation of :func:`span_table` on integer encodings."""
    table = np.zeros(1, dtype=np.int64)
    for vec in basis:
        table = np.concatenate([table, table ^ vec])
    return table


def mulmod_table(q: Poly, p: Poly) -> np.ndarray:
    """Encodings of ``n(x) q(x) mod p(x)`` for every ``n < b**deg(p)``."""
    b = p.base
    m = int(p.degree)
    x = Poly(b, (0, 1))
    basis = []
    cur = poly_mul_mod(q, Poly(b, (1,)), p)
    for _ in range(m):
        basis.append(poly_to_int(cur))
        cur = poly_mul_mod(cur, x, p)
    if b == 2:
        return _span_xor(basis)
    digit_basis = _to_digits(np.array(basis), b, m)
    return _from_digits(span_table(digit_basis, b), b)


def laurent_table(p: Poly) -> np.ndarray:
    """Numerators of ``v_m(r(x)/p(x))`` over ``b**m`` for every residue ``r``."""
    b = p.base
    m = int(p.degree)
    one = Poly(b, (1,))
    basis = []
    for i in range(m):
        xi = Poly(b, (0,) * i + (1,))
        # digits t_1..t_m, stored least significant first: t_m .. t_1
        basis.append(list(reversed(laurent_digits(xi, one, p, m).digits)))
    table = span_table(np.array(basis, dtype=np.int64).reshape(m, m), b)
    return _from_digits(table, b)


def generate_lattice_points(rule: PolyLatticeRule, method: str = "table") -> PointSet:
    """Point set of a polynomial lattice rule.

    ``method="direct"`` runs one Laurent long division per coordinate and
    serves as the reference for the default table-driven path.
    """
    b, m = rule.b, rule.m
    N = b**m
    cols = np.zeros((N, rule.s_total), dtype=np.int64)
    if method == "table":
        lt = laurent_table(rule.p)
        for j, qj in enumerate(rule.q):
            cols[:, j] = lt[mulmod_table(qj, rule.p)]
    elif method == "direct":
        for n in range(N):
            npoly = poly_from_int(n, b)
            for j, qj in enumerate(rule.q):
                cols[n, j] = laurent_digits(npoly, qj, rule.p, m).numerator
    else:
        raise ValueError(f"unknown method {method!r}")
    return PointSet(b, m, cols, m)


def truncate(k: int, m: int, b: int) -> Poly:
    """``tr_m(k)``: the first ``m`` base-b digits of ``k`` as a polynomial."""
    return poly_from_int(k % b**m, b)


def dual_contains(rule: PolyLatticeRule, k: Sequence[int]) -> bool:
    """Membership of ``k`` in the dual polynomial lattice of ``rule``."""
    if len(k) != rule.s_total:
        raise ValueError(f"index has {len(k)} components, rule has {rule.s_total}")
    acc = Poly(rule.b)
    for kj, qj in zip(k, rule.q):
        if kj < 0:
            raise ValueError("indices must be non-negative")
        acc = poly_add(acc, poly_mul_mod(truncate(int(kj), rule.m, rule.b), qj, rule.p))
    return acc.is_zero()


def character_sum(points: PointSet, k: Sequence[int]) -> int:
    """Exact value of ``(1/N) sum_n wal_k(x_n)`` for a digital net.

    The Walsh exponents are tallied per residue class mod b: the sum is 1
    when every exponent is zero and 0 when the classes are hit equally.
    """
    if len(k) != points.dim:
        raise ValueError(f"index has {len(k)} components, points have {points.dim}")
    b = points.b
    e = np.zeros(points.n_points, dtype=np.int64)
    for j, kj in enumerate(k):
        if kj:
            e += wal_exponents(int(kj), points.numerators[:, j], points.digits, b)
    counts = np.bincount(e % b, minlength=b)
    if counts[0] == points.n_points:
        return 1
    if np.all(counts == counts[0]):
        return 0
    raise ArithmeticError("not a digital net character sum")
