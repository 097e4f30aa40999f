"""Quality criteria for interlaced polynomial lattice rules.

Two computable upper bounds on the worst-case error are provided:

* ``B1`` valid for any ``min(alpha, d) >= 2``; coordinates of a block are
  treated alike and the subset weights are inflated by
  ``b**(alpha*(2d-1)|v|/2)``.
* ``B2`` valid for ``2 <= d <= alpha``; block position ``l`` carries an
  extra factor ``b**-l`` and the weights are used as given.

Both have an ``O(N * s * d)`` per-point formula (``eval_b1``/``eval_b2``)
and a truncated dual-lattice enumeration (``oracle_b``) used to check it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .interlace import InterlacedRule, interlace_int_array
from .lattice import generate_lattice_points, mulmod_table
from .walsh import (
    Weights,
    levels,
    phi1_table,
    phi2_table,
)

ORACLE_MAX_COMPONENTS = 8
ORACLE_MAX_M = 4
ORACLE_MAX_EXTRA_DIGITS = 4
ORACLE_MAX_TUPLES = 2**22


@dataclass(frozen=True)
class CriterionKind:
    """``B1`` (needs ``alpha``) or ``B2`` (``alpha`` optional, only checks d <= alpha)."""

    name: str
    alpha: int | None = None

    def __post_init__(self):
        if self.name not in ("B1", "B2"):
            raise ValueError(f"unknown criterion {self.name!r}")
        if self.name == "B1" and self.alpha is None:
            raise ValueError("B1 requires alpha")
        if self.alpha is not None and self.alpha < 1:
            raise ValueError("alpha must be positive")

    @classmethod
    def b1(cls, alpha: int) -> "CriterionKind":
        return cls("B1", int(alpha))

    @classmethod
    def b2(cls, alpha: int | None = None) -> "CriterionKind":
        return cls("B2", None if alpha is None else int(alpha))

    def validate(self, d: int) -> None:
        if self.name == "B1":
            if min(self.alpha, d) < 2:
                raise ValueError("interlacing/smoothness must exceed 1")
        else:
            if d < 2:
                raise ValueError("interlacing/smoothness must exceed 1")
            if self.alpha is not None and d > self.alpha:
                raise ValueError("B2 requires d <= alpha")

    def to_json(self) -> dict:
        out = {"name": self.name}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "CriterionKind":
        unknown = set(obj) - {"name", "alpha"}
        if unknown:
            raise ValueError(f"unknown criterion fields: {sorted(unknown)}")
        return cls(obj["name"], obj.get("alpha"))


@dataclass(frozen=True)
class CriterionValue:
    value: float
    kind: CriterionKind
    lam: float | None = None
    tail_bound: float | None = None

    def __post_init__(self):
        if not self.value >= 0:
            raise ValueError(f"criterion value must be non-negative, got {self.value}")
        if self.tail_bound is not None and not self.tail_bound >= 0:
            raise ValueError("tail bound must be non-negative")

    def to_json(self) -> dict:
        out = {"value": self.value, "kind": self.kind.to_json()}
        if self.lam is not None:
            out["lambda"] = self.lam
        if self.tail_bound is not None:
            out["tail_bound"] = self.tail_bound
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "CriterionValue":
        unknown = set(obj) - {"value", "kind", "lambda", "tail_bound"}
        if unknown:
            raise ValueError(f"unknown criterion-value fields: {sorted(unknown)}")
        return cls(float(obj["value"]), CriterionKind.from_json(obj["kind"]),
                   obj.get("lambda"), obj.get("tail_bound"))


# --- per-point kernels -------------------------------------------------------


def kernel_tables(kind: CriterionKind, d: int, b: int, m: int) -> np.ndarray:
    """``1 + kernel`` by block position ``l = 1..d`` (rows) and digit level (columns).

    Row ``l - 1`` holds ``1 + phi_1`` for B1 and ``1 + phi_2 / b**l`` for B2.
    """
    kind.validate(d)
    if kind.name == "B1":
        row = 1.0 + phi1_table(m, kind.alpha, d, b)
        return np.tile(row, (d, 1))
    phi = phi2_table(m, d, b)
    return np.stack([1.0 + phi / float(b) ** l for l in range(1, d + 1)])


def subset_weights(weights: Weights, kind: CriterionKind, d: int, b: int) -> np.ndarray | tuple:
    """Weights entering the criterion: gamma-tilde for B1, gamma for B2.

    Product weights come back as a per-coordinate tuple, general weights as
    a dense array over bitmasks.
    """
    infl = 1.0
    if kind.name == "B1":
        infl = float(b) ** (kind.alpha * (2 * d - 1) / 2)
    if weights.kind == "product":
        if sum(math.log2(g * infl) for g in weights.gammas if g * infl > 1) > 1000:
            raise OverflowError("inflated weights exceed double range")
        return tuple(g * infl for g in weights.gammas)
    dense = weights.dense().copy()
    sizes = np.array([bin(v).count("1") for v in range(dense.size)])
    return dense * infl**sizes


def block_criterion(h: np.ndarray, wts, d: int) -> np.ndarray:
    """Average over points of the subset-weighted block products.

    ``h[..., n, t]`` is ``1 + kernel`` of component ``t + 1`` at point ``n``;
    the number of columns ``tau`` may stop inside a block, in which case the
    last block only uses its first ``tau - (j0-1)*d`` factors.
    """
    tau = h.shape[-1]
    j0 = -(-tau // d)
    betas = [np.prod(h[..., j * d:min((j + 1) * d, tau)], axis=-1) - 1.0 for j in range(j0)]
    if isinstance(wts, tuple):
        A = np.ones(h.shape[:-1])
        for j in range(j0 - 1):
            A = A * (1.0 + wts[j] * betas[j])
        vals = A - 1.0 + wts[j0 - 1] * A * betas[j0 - 1]
    else:
        P = [np.ones(h.shape[:-1])]
        for j in range(j0 - 1):
            P = P + [pv * betas[j] for pv in P]
        top = 1 << (j0 - 1)
        X = sum(wts[v] * P[v] for v in range(1, top)) if top > 1 else 0.0
        Y = sum(wts[v | top] * P[v] for v in range(top))
        vals = X + Y * betas[j0 - 1]
    return np.mean(vals, axis=-1)


def _prefix(irule: InterlacedRule, prefix_tau: int | None) -> int:
    ds = irule.d * irule.s
    tau = ds if prefix_tau is None else int(prefix_tau)
    if not 1 <= tau <= ds:
        raise ValueError(f"prefix_tau must lie in 1..{ds}")
    return tau


def _check_weights(weights: Weights, s: int) -> None:
    if weights.s != s:
        raise ValueError(f"weights have dimension {weights.s}, rule has s = {s}")


def _eval(irule: InterlacedRule, weights: Weights, kind: CriterionKind, prefix_tau) -> CriterionValue:
    _check_weights(weights, irule.s)
    tau = _prefix(irule, prefix_tau)
    b, m, d = irule.b, irule.m, irule.d
    z = generate_lattice_points(irule.base).numerators[:, :tau]
    tables = kernel_tables(kind, d, b, m)
    lv = levels(z, m, b)
    pos = np.arange(tau) % d
    h = tables[pos[None, :], lv]
    val = float(block_criterion(h, subset_weights(weights, kind, d, b), d))
    return CriterionValue(max(val, 0.0), kind)


def eval_b1(irule: InterlacedRule, weights: Weights, alpha: int, prefix_tau: int | None = None) -> CriterionValue:
    return _eval(irule, weights, CriterionKind.b1(alpha), prefix_tau)


def eval_b2(irule: InterlacedRule, weights: Weights, prefix_tau: int | None = None,
            alpha: int | None = None) -> CriterionValue:
    return _eval(irule, weights, CriterionKind.b2(alpha), prefix_tau)


def evaluate(irule: InterlacedRule, weights: Weights, kind: CriterionKind,
             prefix_tau: int | None = None) -> CriterionValue:
    return _eval(irule, weights, kind, prefix_tau)


# --- dual-space oracles -------------------------------------------------------


def _group_add_table(b: int, m: int) -> np.ndarray:
    """``T[c1, c2]``: encoding of the digitwise sum mod b of two residues."""
    M = b**m
    c = np.arange(M)
    if b == 2:
        return c[:, None] ^ c[None, :]
    out = np.zeros((M, M), dtype=np.int64)
    for i in range(m):
        di = (c // b**i) % b
        out += ((di[:, None] + di[None, :]) % b) * b**i
    return out


def _convolve(a: np.ndarray, c: np.ndarray, add: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    for c1 in np.flatnonzero(a):
        np.add.at(out, add[c1], a[c1] * c)
    return out


def _guard(irule: InterlacedRule, K: int | None) -> int:
    ds = irule.d * irule.s
    K = irule.m + 3 if K is None else int(K)
    if ds > ORACLE_MAX_COMPONENTS or irule.m > ORACLE_MAX_M or K > irule.m + ORACLE_MAX_EXTRA_DIGITS or K < 1:
        raise ValueError("oracle restricted to desk scale")
    return K


def _num_digits_arr(k: np.ndarray, b: int) -> np.ndarray:
    nd = np.zeros(k.shape, dtype=np.int64)
    v = k.copy()
    while np.any(v):
        nd += v > 0
        v //= b
    return nd


def _dual_sum(block_dists, wts_dense: np.ndarray, add: np.ndarray) -> float:
    """sum over nonempty v of w_v * (convolution of the block distributions)[0]."""
    s = len(block_dists)
    M = add.shape[0]
    delta = np.zeros(M)
    delta[0] = 1.0
    convs = [delta]
    total = 0.0
    for v in range(1, 2**s):
        low = (v & -v).bit_length() - 1
        conv = _convolve(convs[v & (v - 1)], block_dists[low], add)
        convs.append(conv)
        total += wts_dense[v] * conv[0]
    return total


def _tail(trunc, full, wts_dense: np.ndarray) -> float:
    s = len(trunc)
    tail = 0.0
    for v in range(1, 2**s):
        if wts_dense[v] == 0:
            continue
        pf = pt = 1.0
        for j in range(s):
            if v >> j & 1:
                pf *= full[j]
                pt *= trunc[j]
        tail += wts_dense[v] * max(pf - pt, 0.0)
    return tail


def _dense_weights(weights: Weights, kind: CriterionKind, d: int, b: int) -> np.ndarray:
    w = subset_weights(weights, kind, d, b)
    if isinstance(w, tuple):
        arr = np.ones(1)
        for g in w:
            arr = np.concatenate([arr, arr * g])
        return arr
    return w


def oracle_b(irule: InterlacedRule, weights: Weights, kind: CriterionKind, K: int | None = None) -> CriterionValue:
    """Truncated dual-lattice sum defining B1/B2, all indices below ``b**K``.

    The tail bound covers every omitted index, ignoring the dual constraint.
    """
    _check_weights(weights, irule.s)
    kind.validate(irule.d)
    K = _guard(irule, K)
    b, m, d, s = irule.b, irule.m, irule.d, irule.s
    rule = irule.base
    M = b**m
    add = _group_add_table(b, m)
    k = np.arange(1, b**K, dtype=np.int64)
    mu1 = _num_digits_arr(k, b)
    block_dists, trunc, full = [], [], []
    for j in range(s):
        dist = np.zeros(M)
        dist[0] = 1.0
        t_prod = f_prod = 1.0
        for l in range(1, d + 1):
            g = j * d + l
            if kind.name == "B1":
                mn = min(kind.alpha, d)
                w = float(b) ** (-mn * mu1 - kind.alpha / 2)
                f = float(b) ** (-kind.alpha / 2) * (b - 1) / (b**mn - b)
            else:
                w = float(b) ** (-d * mu1 + (d - l))
                f = float(b) ** (d - l) * (b - 1) / (b**d - b)
            res = mulmod_table(rule.q[g - 1], rule.p)[k % M]
            comp = np.bincount(res, weights=w, minlength=M)
            comp[0] += 1.0  # k_g = 0
            dist = _convolve(dist, comp, add)
            t_prod *= 1.0 + w.sum()
            f_prod *= 1.0 + f
        dist[0] -= 1.0  # drop the all-zero block
        block_dists.append(dist)
        trunc.append(t_prod - 1.0)
        full.append(f_prod - 1.0)
    wd = _dense_weights(weights, kind, d, b)
    value = _dual_sum(block_dists, wd, add)
    return CriterionValue(max(float(value), 0.0), kind, tail_bound=float(_tail(trunc, full, wd)))


def mu_alpha_array(l: np.ndarray, alpha: int, b: int) -> np.ndarray:
    """Vectorised smoothness weight mu_alpha over an integer array."""
    l = np.asarray(l, dtype=np.int64)
    digits = []
    v = l.copy()
    while np.any(v):
        digits.append(v % b)
        v //= b
    total = np.zeros(l.shape, dtype=np.int64)
    count = np.zeros(l.shape, dtype=np.int64)
    for pos in range(len(digits) - 1, -1, -1):
        take = (digits[pos] != 0) & (count < alpha)
        total += take * (pos + 1)
        count += take
    return total


def _ralpha_tail(xi0: int, b: int) -> float:
    """Upper bound on sum of b**-mu_alpha(l) over l with at least ``xi0`` digits (alpha >= 2)."""
    t = 1.0 / b
    geo = t**xi0 / (1 - t)
    lin = t**xi0 * (xi0 - (xi0 - 1) * t) / (1 - t) ** 2 - geo  # sum (xi-1) t^xi
    return (b - 1) * (geo + (b - 1) / b * lin)


def oracle_wce(irule: InterlacedRule, weights: Weights, alpha: int, K: int | None = None) -> CriterionValue:
    """Truncated worst-case error: dual members ``k_u`` with components below ``b**K``,
    weighted by ``gamma_w(u) * r_alpha(E_d(k_u, 0))``."""
    _check_weights(weights, irule.s)
    if alpha < 2:
        raise ValueError("worst-case error oracle needs alpha >= 2")
    K = _guard(irule, K)
    b, m, d, s = irule.b, irule.m, irule.d, irule.s
    if b ** (K * d) > ORACLE_MAX_TUPLES:
        raise ValueError("oracle restricted to desk scale")
    rule = irule.base
    M = b**m
    add = _group_add_table(b, m)
    grid = np.indices((b**K,) * d).reshape(d, -1).T[1:]  # drop the zero tuple
    l = interlace_int_array(grid, d, b)
    w = float(b) ** (-mu_alpha_array(l, alpha, b).astype(float))
    tail_block = _ralpha_tail(K * d + 1, b)
    block_dists, trunc, full = [], [], []
    for j in range(s):
        res = np.zeros(grid.shape[0], dtype=np.int64)
        for r in range(d):
            col = mulmod_table(rule.q[j * d + r], rule.p)[grid[:, r] % M]
            res = add[res, col]
        block_dists.append(np.bincount(res, weights=w, minlength=M))
        trunc.append(w.sum())
        full.append(w.sum() + tail_block)
    wd = weights.dense()
    value = _dual_sum(block_dists, wd, add)
    return CriterionValue(max(float(value), 0.0), CriterionKind.b1(alpha), tail_bound=float(_tail(trunc, full, wd)))


# --- theoretical bounds ----------------------------------------------------------


def _log_expm1(x: float) -> float:
    if x <= 0:
        return -math.inf
    if x < 30:
        return math.log(math.expm1(x))
    return x + math.log1p(-math.exp(-x))


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def _logsumexp(terms) -> float:
    terms = [t for t in terms if t != -math.inf]
    if not terms:
        return -math.inf
    top = max(terms)
    return top + math.log(sum(math.exp(t - top) for t in terms))


def _bound_kernels(algorithm: str, kind: CriterionKind, b: int, d: int, lam: float, alpha: int):
    """Return ``a -> G_a``; for Korobov the core factor drops the first branch of the max."""
    mn = min(alpha, d)
    second = (b - 1) / (b ** (lam * mn) - b)
    if algorithm == "cbc":
        core = max(((b - 1) / (b**mn - b)) ** lam, second)
    else:
        core = second
    if kind.name == "B1":
        core *= float(b) ** (-alpha * lam / 2)
        return lambda a: (1.0 + core) ** a - 1.0
    return lambda a: math.prod(1.0 + float(b) ** (lam * (d - l)) * core for l in range(1, a + 1)) - 1.0


def dual_multiple_sum(lam: float, m: int, alpha: int, d: int, b: int) -> float:
    """Closed form of ``sum_{k >= 1} r_tilde1(b**m k)**lam`` (needs ``lam > 1/min(alpha,d)``)."""
    mn = min(alpha, d)
    if not lam * mn > 1:
        raise ValueError("lambda must exceed 1/min(alpha,d)")
    core = (b - 1) / (float(b) ** (lam * mn) - b) * float(b) ** (-alpha * lam / 2)
    return core * float(b) ** (-lam * mn * m)


def theoretical_bound(algorithm: str, kind: CriterionKind, params: Mapping, weights: Weights, lam: float,
                      prefix_tau: int | None = None, tilde_weights: bool = False) -> CriterionValue:
    """Right-hand side of the CBC/Korobov convergence bounds at a given ``lam``.

    ``params`` holds ``b, m, s, d, alpha``.  ``prefix_tau`` selects the CBC
    bound for the first ``tau`` components (default ``d*s``).  For Korobov
    with B2 the weights are plain gamma unless ``tilde_weights`` is set.
    """
    if algorithm not in ("cbc", "korobov"):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    b, m, s, d = (int(params[key]) for key in ("b", "m", "s", "d"))
    alpha = params.get("alpha", kind.alpha)
    if alpha is None:
        alpha = d
    alpha = int(alpha)
    kind.validate(d)
    if kind.name == "B2" and d > alpha:
        raise ValueError("B2 requires d <= alpha")
    _check_weights(weights, s)
    mn = min(alpha, d)
    if not (1.0 / mn < lam <= 1.0):
        raise ValueError("lambda must exceed 1/min(alpha,d)")
    ds = d * s

    inflate = kind.name == "B1" or (algorithm == "korobov" and tilde_weights)
    log_infl = alpha * (2 * d - 1) / 2 * math.log(b) if inflate else 0.0
    wlog = lambda mask_size, g: lam * (_log(g) + mask_size * log_infl)  # noqa: E731

    G = _bound_kernels(algorithm, kind, b, d, lam, alpha)
    if algorithm == "cbc":
        tau = ds if prefix_tau is None else int(prefix_tau)
        if not 1 <= tau <= ds:
            raise ValueError(f"prefix_tau must lie in 1..{ds}")
        j0 = -(-tau // d)
        d0 = tau - (j0 - 1) * d
        logGd, logGd0 = _log(G(d)), _log(G(d0))
        lead = 0.0
    else:
        j0, d0 = s + 1, 0
        logGd = _log(G(d))
        lead = math.log(ds)

    # bracket = sum_{0 != v in [j0-1]} w_v G_d^|v| + G_d0 * sum_{v in [j0-1]} w_{v+j0} G_d^|v|
    if weights.kind == "product":
        L = 0.0
        for j in range(j0 - 1):
            L += float(np.logaddexp(0.0, wlog(1, weights.gammas[j]) + logGd))
        terms = [_log_expm1(L)]
        if algorithm == "cbc":
            terms.append(logGd0 + wlog(1, weights.gammas[j0 - 1]) + L)
    else:
        dense = weights.dense()
        terms = []
        for v in range(1, 2 ** (j0 - 1)):
            size = bin(v).count("1")
            terms.append(wlog(size, dense[v]) + size * logGd)
        if algorithm == "cbc":
            top = 1 << (j0 - 1)
            for v in range(top):
                size = bin(v).count("1")
                terms.append(logGd0 + wlog(size + 1, dense[v | top]) + size * logGd)
    log_bracket = _logsumexp(terms)
    log_val = (lead + log_bracket - math.log(b**m - 1)) / lam
    value = math.exp(log_val) if log_val < 709 else math.inf
    return CriterionValue(value, kind, lam=lam)


def lambda_grid(alpha: int, d: int, points: int = 200) -> np.ndarray:
    return np.linspace(1.0 / min(alpha, d) + 1e-6, 1.0, points)


def optimize_lambda(bound_evaluator: Callable[[float], float | CriterionValue],
                    params: Mapping | int) -> tuple[float, float]:
    """Grid search for the tightest bound over ``(1/min(alpha,d), 1]``.

    ``params`` is either a mapping with ``alpha`` and ``d`` or ``min(alpha, d)``.
    Returns the first minimising grid point and its value.
    """
    if isinstance(params, Mapping):
        mn = min(int(params["alpha"]), int(params["d"]))
    else:
        mn = int(params)
    grid = lambda_grid(mn, mn)
    vals = []
    for lam in grid:
        v = bound_evaluator(float(lam))
        vals.append(v.value if isinstance(v, CriterionValue) else float(v))
    i = int(np.argmin(vals))
    return float(grid[i]), float(vals[i])
