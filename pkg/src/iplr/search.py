"""Construction of generating vectors: CBC (naive and fast), Korobov, exhaustive.

All searches score candidates ``q in R_m`` (nonzero polynomials of degree
< m, identified with encodings ``1..b**m - 1``).  Ties are broken towards
the smallest encoding; values within a relative ``TIE_RTOL`` of the
minimum (plus a rounding allowance proportional to the per-point term
magnitude) count as tied, so floating-point noise cannot reorder
mathematically equal candidates.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .criteria import CriterionKind, CriterionValue, block_criterion, kernel_tables, subset_weights
from .gfpoly import (
    Poly,
    check_base,
    find_irreducible,
    is_irreducible,
    poly_from_int,
    poly_mul_mod,
    poly_to_int,
    primitive_element,
)
from .interlace import InterlacedRule
from .lattice import PolyLatticeRule, span_table
from .walsh import Weights, levels

logger = logging.getLogger(__name__)

TIE_RTOL = 1e-12
# absolute tie/refinement slack per unit of the largest per-point term
TIE_ATOL = 1e-13
FFT_BAND = 1e-12
MAX_GENERAL_SEARCH_DIM = 12
EXHAUSTIVE_LIMIT = 10**6
_CHUNK_ELEMENTS = 2**22


class SearchGuardError(ValueError):
    """A search was asked to run beyond its size guard."""


@dataclass(frozen=True)
class SearchConfig:
    b: int
    m: int
    s: int
    d: int
    criterion: CriterionKind
    weights: Weights
    modulus: Poly | None = None

    def __post_init__(self):
        check_base(self.b)
        if self.m < 1 or self.s < 1:
            raise ValueError("m and s must be positive")
        if self.d < 2:
            raise ValueError("interlacing factor must be at least 2")
        self.criterion.validate(self.d)
        if self.weights.s != self.s:
            raise ValueError(f"weights have dimension {self.weights.s}, expected s = {self.s}")
        if self.weights.kind == "general" and self.s > MAX_GENERAL_SEARCH_DIM:
            raise ValueError(f"general weights are limited to s <= {MAX_GENERAL_SEARCH_DIM} in search")
        if self.modulus is None:
            object.__setattr__(self, "modulus", find_irreducible(self.m, self.b))
        p = self.modulus
        if p.base != self.b or p.degree != self.m:
            raise ValueError("modulus must have degree m over F_b")
        if not is_irreducible(p):
            raise ValueError("modulus must be irreducible")

    @property
    def ds(self) -> int:
        return self.d * self.s


@dataclass
class SearchResult:
    rule: InterlacedRule
    criterion_trace: list[CriterionValue]
    elapsed: float
    algorithm: str
    config: SearchConfig | None = field(default=None, repr=False)

    @property
    def value(self) -> CriterionValue:
        return self.criterion_trace[-1]

    @property
    def generating_vector(self) -> list[int]:
        return [poly_to_int(q) for q in self.rule.base.q]

    def trace_csv(self) -> str:
        lines = ["tau,value"]
        lines += [f"{tau},{cv.value!r}" for tau, cv in enumerate(self.criterion_trace, start=1)]
        return "\n".join(lines) + "\n"


class _Field:
    """Residue arithmetic mod ``p`` on integer encodings, vectorised over numpy arrays."""

    def __init__(self, p: Poly):
        self.p = p
        self.b = p.base
        self.m = int(p.degree)
        self.N = self.b**self.m
        self.p_int = poly_to_int(p)
        self.inv_lead = pow(p.lead(), self.b - 2, self.b)
        self.p_low = np.array(p.coeffs[: self.m], dtype=np.int64)
        self.level = levels(np.arange(self.N), self.m, self.b)
        self._table = None
        self._pow = None

    def _times_x(self, r):
        if self.b == 2:
            r = r << 1
            return np.where(r >> self.m & 1, r ^ self.p_int, r)
        b, m = self.b, self.m
        t = (r[..., m - 1] * self.inv_lead) % b
        shifted = np.concatenate([np.zeros_like(r[..., :1]), r[..., : m - 1]], axis=-1)
        return (shifted - t[..., None] * self.p_low) % b

    def _mul_rows_uncached(self, encs: np.ndarray) -> np.ndarray:
        encs = np.asarray(encs, dtype=np.int64)
        b, m = self.b, self.m
        if b == 2:
            basis = [encs]
            for _ in range(m - 1):
                basis.append(self._times_x(basis[-1]))
            table = np.zeros((1, len(encs)), dtype=np.int64)
            for vec in basis:
                table = np.concatenate([table, table ^ vec])
            return np.ascontiguousarray(table.T)
        digits = np.stack([(encs // b**i) % b for i in range(m)], axis=-1)
        basis = [digits]
        for _ in range(m - 1):
            basis.append(self._times_x(basis[-1]))
        table = span_table(np.stack(basis), b)  # (N, C, m)
        enc = table @ (b ** np.arange(m, dtype=np.int64))
        return np.ascontiguousarray(enc.T)

    def mul_rows(self, encs: Sequence[int] | np.ndarray) -> np.ndarray:
        """``out[c, n]`` = encoding of ``n(x) * encs[c](x) mod p``."""
        encs = np.asarray(encs, dtype=np.int64)
        if self.N * self.N <= _CHUNK_ELEMENTS:
            if self._table is None:
                self._table = self._mul_rows_uncached(np.arange(self.N))
            return self._table[encs]
        return self._mul_rows_uncached(encs)

    def mulmod(self, a: int, c: int) -> int:
        return poly_to_int(poly_mul_mod(poly_from_int(a, self.b), poly_from_int(c, self.b), self.p))

    def powers(self):
        """``(pow, log)`` tables for the smallest primitive element."""
        if self._pow is None:
            g = poly_to_int(primitive_element(self.p))
            L = self.N - 1
            times_g = self.mul_rows([g])[0].tolist()
            pw = [1] * L
            for e in range(1, L):
                pw[e] = times_g[pw[e - 1]]
            pw = np.array(pw, dtype=np.int64)
            lg = np.zeros(self.N, dtype=np.int64)
            lg[pw] = np.arange(L)
            self._pow = (pw, lg)
        return self._pow


def _select(values: np.ndarray, scale: float = 0.0) -> int:
    """Index of the minimum; ties go to the lowest index."""
    vmin = values.min()
    slack = max(TIE_RTOL * abs(vmin), TIE_ATOL * scale)
    return int(np.flatnonzero(values <= vmin + slack)[0])


class _CBCState:
    """Per-point accumulators for the prefix criterion.

    For the next component ``tau`` (block ``j0``, position ``d0``):
    ``B = mean(X + Y * (C * h(z_tau) - 1))`` where ``X`` collects completed
    blocks, ``Y`` the weights attached to block ``j0`` and ``C`` the partial
    product of block ``j0``.
    """

    def __init__(self, config: SearchConfig, fld: _Field):
        self.cfg = config
        self.fld = fld
        self.d = config.d
        N = fld.N
        self.kern = kernel_tables(config.criterion, config.d, config.b, config.m)
        self.wts = subset_weights(config.weights, config.criterion, config.d, config.b)
        self.product = isinstance(self.wts, tuple)
        self.J = 0  # completed blocks
        self.tau = 1  # component scored next
        self.C = np.ones(N)
        self.A = np.ones(N)
        self.P = [np.ones(N)]
        self._refresh()

    def _refresh(self):
        if self.J >= self.cfg.s:
            return
        if self.product:
            self.X = self.A - 1.0
            self.Y = self.wts[self.J] * self.A
        else:
            top = 1 << self.J
            self.X = sum(self.wts[v] * self.P[v] for v in range(1, top)) if top > 1 else np.zeros(self.fld.N)
            self.Y = sum(self.wts[v | top] * self.P[v] for v in range(top))

    @property
    def htab(self) -> np.ndarray:
        d0 = self.tau - self.J * self.d
        return self.kern[d0 - 1][self.fld.level]

    def values(self, encs: np.ndarray) -> np.ndarray:
        """Prefix criterion for each candidate encoding (direct evaluation)."""
        N = self.fld.N
        htab = self.htab
        out = []
        step = max(1, _CHUNK_ELEMENTS // N)
        for i in range(0, len(encs), step):
            res = self.fld.mul_rows(encs[i:i + step])
            terms = self.X + self.Y * (self.C * htab[res] - 1.0)
            out.append(terms.mean(axis=1))
        return np.concatenate(out) if out else np.zeros(0)

    def scale(self) -> float:
        """Bound on the per-point terms; sets the rounding allowance."""
        return float(np.abs(self.X - self.Y).mean() + np.abs(self.Y * self.C).mean() * np.abs(self.htab).max())

    def values_fft(self) -> np.ndarray:
        """All candidate values at once via a cyclic correlation over the multiplicative group."""
        pw, _ = self.fld.powers()
        N = self.fld.N
        htab = self.htab
        w = self.Y * self.C
        wi = w[pw]
        f = htab[pw]
        corr = np.fft.irfft(np.conj(np.fft.rfft(wi)) * np.fft.rfft(f), n=len(pw))
        base = np.mean(self.X - self.Y)
        vals_by_log = base + (w[0] * htab[0] + corr) / N
        vals = np.empty(N - 1)
        vals[pw - 1] = vals_by_log
        return vals

    def commit(self, res: np.ndarray) -> None:
        h = self.htab[res]
        d0 = self.tau - self.J * self.d
        if d0 < self.d:
            self.C = self.C * h
        else:
            beta = self.C * h - 1.0
            if self.product:
                self.A = self.A * (1.0 + self.wts[self.J] * beta)
            else:
                self.P = self.P + [pv * beta for pv in self.P]
            self.J += 1
            self.C = np.ones(self.fld.N)
            self._refresh()
        self.tau += 1


def _make_rule(config: SearchConfig, encs: Sequence[int]) -> InterlacedRule:
    base = PolyLatticeRule(config.b, config.m, config.modulus,
                           tuple(poly_from_int(int(e), config.b) for e in encs))
    return InterlacedRule(config.d, config.s, base)


def _run_cbc(config: SearchConfig, fast: bool) -> SearchResult:
    t0 = time.perf_counter()
    fld = _Field(config.modulus)
    st = _CBCState(config, fld)
    cand = np.arange(1, fld.N, dtype=np.int64)
    q = [1]
    first = st.values(np.array([1]))[0]
    trace = [CriterionValue(max(float(first), 0.0), config.criterion)]
    st.commit(fld.mul_rows([1])[0])
    for tau in range(2, config.ds + 1):
        scale = st.scale()
        if fast:
            approx = st.values_fft()
            band = 2 * FFT_BAND * scale + max(TIE_RTOL * abs(approx.min()), TIE_ATOL * scale)
            pool = cand[approx <= approx.min() + band]
        else:
            pool = cand
        vals = st.values(pool)
        i = _select(vals, scale)
        enc, val = int(pool[i]), float(vals[i])
        q.append(enc)
        trace.append(CriterionValue(max(val, 0.0), config.criterion))
        st.commit(fld.mul_rows([enc])[0])
        logger.debug("tau=%d q=%d value=%.6e", tau, enc, val)
    algo = "fast-cbc" if fast else "cbc"
    return SearchResult(_make_rule(config, q), trace, time.perf_counter() - t0, algo, config)


def cbc_construct(config: SearchConfig) -> SearchResult:
    """Greedy component-by-component search with ``q_1 = 1``; O(d s b^(2m))."""
    return _run_cbc(config, fast=False)


def fast_cbc_construct(config: SearchConfig) -> SearchResult:
    """CBC with all candidates of a step scored by one FFT correlation.

    Candidates whose FFT score lies within rounding distance of the best are
    re-scored directly, so selections and trace values coincide with
    :func:`cbc_construct`.
    """
    if config.weights.kind != "product":
        raise ValueError("fast path requires product weights")
    return _run_cbc(config, fast=True)


def _full_values(config: SearchConfig, fld: _Field, vectors: np.ndarray) -> np.ndarray:
    """Full-vector criterion for each row of ``vectors`` (encodings, shape (C, ds))."""
    kern = kernel_tables(config.criterion, config.d, config.b, config.m)
    wts = subset_weights(config.weights, config.criterion, config.d, config.b)
    ds, N = config.ds, fld.N
    out = []
    step = max(1, _CHUNK_ELEMENTS // (N * ds))
    for i in range(0, len(vectors), step):
        chunk = vectors[i:i + step]
        h = np.empty((len(chunk), N, ds))
        for j in range(ds):
            res = fld.mul_rows(chunk[:, j])
            h[:, :, j] = kern[j % config.d][fld.level[res]]
        out.append(block_criterion(h, wts, config.d))
    return np.concatenate(out)


def korobov_vector(q: int, ds: int, fld: _Field) -> list[int]:
    """Encodings of ``(1, q, q^2, ..., q^(ds-1)) mod p``."""
    out = [1]
    for _ in range(ds - 1):
        out.append(fld.mulmod(out[-1], q))
    return out


def korobov_construct(config: SearchConfig) -> SearchResult:
    t0 = time.perf_counter()
    fld = _Field(config.modulus)
    cand = np.arange(1, fld.N, dtype=np.int64)
    vectors = np.array([korobov_vector(int(c), config.ds, fld) for c in cand], dtype=np.int64)
    vals = _full_values(config, fld, vectors)
    i = _select(vals)
    trace = [CriterionValue(max(float(vals[i]), 0.0), config.criterion)]
    result = SearchResult(_make_rule(config, vectors[i]), trace, time.perf_counter() - t0, "korobov", config)
    result.korobov_q = int(cand[i])
    return result


def exhaustive_construct(config: SearchConfig) -> SearchResult:
    """Global minimum over ``{1} x R_m^(ds-1)``; lexicographically smallest on ties."""
    fld = _Field(config.modulus)
    count = (fld.N - 1) ** (config.ds - 1)
    if count > EXHAUSTIVE_LIMIT:
        raise SearchGuardError(f"exhaustive search over {count} vectors exceeds {EXHAUSTIVE_LIMIT}")
    t0 = time.perf_counter()
    combos = np.array(list(itertools.product(range(1, fld.N), repeat=config.ds - 1)), dtype=np.int64)
    vectors = np.concatenate([np.ones((len(combos), 1), dtype=np.int64), combos.reshape(len(combos), -1)], axis=1)
    vals = _full_values(config, fld, vectors)
    i = _select(vals)
    trace = [CriterionValue(max(float(vals[i]), 0.0), config.criterion)]
    return SearchResult(_make_rule(config, vectors[i]), trace, time.perf_counter() - t0, "exhaustive", config)


ALGORITHMS = {
    "cbc": cbc_construct,
    "fast-cbc": fast_cbc_construct,
    "korobov": korobov_construct,
    "exhaustive": exhaustive_construct,
}


def construct(config: SearchConfig, algorithm: str = "cbc") -> SearchResult:
    try:
        fn = ALGORITHMS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}") from None
    return fn(config)
