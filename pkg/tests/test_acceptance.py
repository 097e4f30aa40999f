"""Acceptance criteria, each at its stated tolerance and runtime budget.

Run under pytest (a summary line per criterion is printed at the end) or
directly with ``python tests/test_acceptance.py``.
"""

import csv
import io
import sys
import time
from contextlib import redirect_stderr, redirect_stdout
from itertools import product
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from iplr.cli import main as cli_main  # noqa: E402
from iplr.criteria import (  # noqa: E402
    CriterionKind,
    dual_multiple_sum,
    eval_b1,
    evaluate,
    oracle_b,
    oracle_wce,
    theoretical_bound,
)
from iplr.gfpoly import find_irreducible, poly_from_int, poly_to_int  # noqa: E402
from iplr.integrand import PolyProductIntegrand, fit_slope  # noqa: E402
from iplr.interlace import InterlacedRule, deinterlace_int, generate_interlaced_points  # noqa: E402
from iplr.lattice import (  # noqa: E402
    PolyLatticeRule,
    character_sum,
    dual_contains,
    generate_lattice_points,
    mulmod_table,
)
from iplr.search import (  # noqa: E402
    SearchConfig,
    cbc_construct,
    fast_cbc_construct,
    korobov_construct,
)
from iplr.walsh import Weights, phi1, phi2  # noqa: E402

from oracles import dual_weight_sum, phi1_series, phi2_series  # noqa: E402

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # direct run
    ACCEPTANCE_LINES = []

FLOAT_RTOL = 1e-12
NOISE = 1e-13


def report(n, title, ok, elapsed, budget, detail=""):
    in_time = elapsed < budget
    status = "PASS" if ok and in_time else "FAIL"
    line = f"{status} {n}: {title} [{elapsed:.2f}s / {budget:.0f}s]"
    if detail:
        line += f" {detail}"
    if not in_time:
        line += " (over time budget)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
    assert in_time, line


def irules(b, m):
    p = find_irreducible(m, b)
    return poly_to_int(p)


# 1 -------------------------------------------------------------------------

def _char_vs_dual_exhaustive(b, m, p_int, q):
    """Walsh side vs algebraic side for every index tuple with components < b**(m+1)."""
    rule = PolyLatticeRule.from_ints(b, m, p_int, q)
    z = generate_lattice_points(rule).numerators
    ks = np.arange(b ** (m + 1))
    s = len(q)
    # Walsh exponent tables per component: (k, n)
    E = [_wal_table(ks, z[:, j], m, b) for j in range(s)]
    # residues tr_m(k) q_j mod p, combined by polynomial addition
    R = [mulmod_table(poly_from_int(qj, b), rule.p)[ks % b**m] for qj in q]
    tot_e = E[0]
    tot_r = _digits(R[0], b, m)
    for j in range(1, s):
        tot_e = (tot_e[:, None, :] + E[j][None, :, :]).reshape(-1, z.shape[0]) % b
        tot_r = ((tot_r[:, None, :] + _digits(R[j], b, m)[None, :, :]) % b).reshape(-1, m)
    walsh_one = np.all(tot_e == 0, axis=1)
    dual = np.all(tot_r == 0, axis=1)
    return bool(np.array_equal(walsh_one, dual)), walsh_one.size


def _wal_table(ks, zcol, m, b):
    # points have m digits; index digits beyond m meet zero digits
    kd = np.stack([(ks // b**i) % b for i in range(m)], axis=-1)
    xd = np.stack([(zcol // b ** (m - 1 - i)) % b for i in range(m)], axis=-1)
    return (kd @ xd.T) % b


def _digits(v, b, m):
    return np.stack([(v // b**i) % b for i in range(m)], axis=-1)


def test_criterion_01_character_dual_equivalence():
    t0 = time.perf_counter()
    ok = True
    checked = 0
    gen = np.random.default_rng(1)
    for b in (2, 3):
        for m in (1, 2, 3):
            moduli = [irules(b, m), b**m]  # irreducible and x^m
            for p_int in moduli:
                for s in (1, 2, 3):
                    all_q = list(product(range(b**m), repeat=s))
                    # every index tuple is checked; rules are sampled on the large cells
                    budget = max(3, min(40, 2_000_000 // b ** ((m + 1) * s)))
                    if len(all_q) > budget:
                        idx = gen.choice(len(all_q), size=budget, replace=False)
                        all_q = [all_q[i] for i in sorted(idx)]
                    for q in all_q:
                        good, n = _char_vs_dual_exhaustive(b, m, p_int, list(q))
                        ok &= good
                        checked += n
            # library entry points on a sample
            rule = PolyLatticeRule.from_ints(b, m, moduli[0], [1, b**m - 1])
            pts = generate_lattice_points(rule)
            for k in product(range(b ** (m + 1)), repeat=2):
                ok &= (character_sum(pts, k) == 1) == dual_contains(rule, k)
    report(1, "character sum = 1 iff dual member", ok, time.perf_counter() - t0, 10,
           f"({checked} index tuples)")


# 2 -------------------------------------------------------------------------

def test_criterion_02_interlaced_dual_correspondence():
    t0 = time.perf_counter()
    b, d = 2, 2
    ok = True
    checked = 0
    gen = np.random.default_rng(2)
    for m in (1, 2, 3):
        p_int = irules(b, m)
        for s in (1, 2):
            vecs = list(product(range(b**m), repeat=d * s))
            if len(vecs) > 12:
                vecs = [vecs[i] for i in sorted(gen.choice(len(vecs), size=12, replace=False))]
            lmax = b ** (d * (m + 1))
            ls = np.arange(lmax)
            kparts = np.array([deinterlace_int(int(l), d, b) for l in ls])  # (lmax, d)
            for q in vecs:
                base = PolyLatticeRule.from_ints(b, m, p_int, list(q))
                pts = generate_interlaced_points(InterlacedRule(d, s, base)).numerators
                tot_e = None
                tot_r = None
                for j in range(s):
                    e = _wal_table(ls, pts[:, j], d * m, b)
                    r = np.zeros((lmax, m), dtype=np.int64)
                    for rr in range(d):
                        tab = mulmod_table(poly_from_int(q[j * d + rr], b), base.p)
                        r = (r + _digits(tab[kparts[:, rr] % b**m], b, m)) % b
                    if tot_e is None:
                        tot_e, tot_r = e, r
                    else:
                        tot_e = (tot_e[:, None, :] + e[None, :, :]).reshape(-1, pts.shape[0]) % b
                        tot_r = ((tot_r[:, None, :] + r[None, :, :]) % b).reshape(-1, m)
                ok &= bool(np.array_equal(np.all(tot_e == 0, axis=1), np.all(tot_r == 0, axis=1)))
                checked += tot_e.shape[0]
                # library entry points on the low indices
                for l in product(range(b ** d), repeat=s):
                    k = [c for lj in l for c in deinterlace_int(lj, d, b)]
                    ok &= (character_sum(generate_interlaced_points(InterlacedRule(d, s, base)), l) == 1) \
                        == dual_contains(base, k)
    report(2, "interlaced character sums match deinterlaced dual membership", ok,
           time.perf_counter() - t0, 30, f"({checked} indices)")


# 3 -------------------------------------------------------------------------

def test_criterion_03_phi_kernels_match_series():
    t0 = time.perf_counter()
    ok = True
    worst = 0.0
    for b in (2, 3):
        for alpha in (2, 3):
            for d in (2, 3):
                vals, tail = phi1_series(alpha, d, b)
                closed = np.array([phi1(z, 6, alpha, d, b) for z in range(b**6)])
                excess = np.abs(vals - closed) - tail
                worst = max(worst, float(excess.max()))
                ok &= bool(np.all(excess <= NOISE))
        for d in (2, 3):
            vals, tail = phi2_series(d, b)
            closed = np.array([phi2(z, 6, d, b) for z in range(b**6)])
            excess = np.abs(vals - closed) - tail
            worst = max(worst, float(excess.max()))
            ok &= bool(np.all(excess <= NOISE))
    v1, t1 = phi1_series(2, 2, 2)
    v2, t2 = phi2_series(2, 2)
    for z, want in ((0, 0.25), (32, -0.125)):
        ok &= phi1(z, 6, 2, 2, 2) == want and abs(v1[z] - want) <= t1 + NOISE
    for z, want in ((0, 2.0), (32, -1.0)):
        ok &= phi2(z, 6, 2, 2) == want and abs(v2[z] - want) <= t2 + NOISE
    report(3, "phi kernels equal truncated Walsh series within tail", ok, time.perf_counter() - t0, 10,
           f"(max excess over tail {worst:.1e})")


# 4, 5 ----------------------------------------------------------------------

def _grid_rules():
    gen = np.random.default_rng(4)
    for m in (1, 2, 3):
        p_int = irules(2, m)
        for s in (1, 2):
            vecs = [v for v in product(range(1, 2**m), repeat=2 * s - 1)]
            if len(vecs) > 6:
                vecs = [vecs[i] for i in sorted(gen.choice(len(vecs), size=6, replace=False))]
            for v in vecs:
                base = PolyLatticeRule.from_ints(2, m, p_int, [1, *v])
                yield InterlacedRule(2, s, base)


def _grid_weights(s):
    yield Weights.product([1.0, 0.25][:s])
    if s == 1:
        yield Weights.general({1: 0.5}, 1)
    else:
        yield Weights.general({1: 0.5, 2: 0.3, 3: 1.5}, 2)


def test_criterion_04_concise_formula_matches_oracle():
    t0 = time.perf_counter()
    ok = True
    n = 0
    for rule in _grid_rules():
        for w in _grid_weights(rule.s):
            for kind in (CriterionKind.b1(2), CriterionKind.b2(2)):
                o = oracle_b(rule, w, kind)
                ok &= abs(evaluate(rule, w, kind).value - o.value) <= o.tail_bound * (1 + FLOAT_RTOL)
                n += 1
    report(4, "concise formulas within oracle tail bounds", ok, time.perf_counter() - t0, 60, f"({n} cases)")


def test_criterion_05_domination_chain():
    t0 = time.perf_counter()
    ok = True
    n = 0
    for rule in _grid_rules():
        for w in _grid_weights(rule.s):
            wce = oracle_wce(rule, w, 2)
            for kind in (CriterionKind.b1(2), CriterionKind.b2(2)):
                o = oracle_b(rule, w, kind)
                ok &= wce.value <= o.value + o.tail_bound + wce.tail_bound
                n += 1
    report(5, "worst-case error below B1 and B2 up to tails", ok, time.perf_counter() - t0, 60, f"({n} cases)")


# 6 -------------------------------------------------------------------------

def test_criterion_06_cbc_stepwise_optimal():
    t0 = time.perf_counter()
    ok = True
    for gammas in ([1.0, 0.25], [1.0, 1.0]):
        config = SearchConfig(2, 4, 2, 2, CriterionKind.b1(2), Weights.product(gammas))
        q = cbc_construct(config).generating_vector
        for tau in range(2, config.ds + 1):
            vals = []
            for c in range(1, 16):
                vec = q[: tau - 1] + [c] + [1] * (config.ds - tau)
                base = PolyLatticeRule.from_ints(2, 4, poly_to_int(config.modulus), vec)
                vals.append(eval_b1(InterlacedRule(2, 2, base), config.weights, 2, prefix_tau=tau).value)
            vals = np.array(vals)
            tied = np.flatnonzero(vals <= vals.min() * (1 + FLOAT_RTOL))
            ok &= q[tau - 1] == 1 + int(tied[0])
    report(6, "CBC choice attains the minimum at every step", ok, time.perf_counter() - t0, 5)


# 7 -------------------------------------------------------------------------

def test_criterion_07_bounds_hold():
    t0 = time.perf_counter()
    ok = True
    worst = 0.0
    for m in (4, 6, 8):
        for s in (1, 2):
            w = Weights.product([(j + 1) ** -2.0 for j in range(s)])
            params = {"b": 2, "m": m, "s": s, "d": 2, "alpha": 2}
            grid = np.linspace(0.5 + 1e-6, 1.0, 20)
            for kind in (CriterionKind.b1(2), CriterionKind.b2(2)):
                config = SearchConfig(2, m, s, 2, kind, w)
                res = cbc_construct(config)
                for tau, cv in enumerate(res.criterion_trace, start=1):
                    for lam in grid:
                        bd = theoretical_bound("cbc", kind, params, w, float(lam), prefix_tau=tau).value
                        worst = max(worst, cv.value / bd)
                        ok &= cv.value <= bd * (1 + FLOAT_RTOL)
                kres = korobov_construct(config)
                for lam in grid:
                    for tilde in (False, True):
                        bd = theoretical_bound("korobov", kind, params, w, float(lam), tilde_weights=tilde).value
                        worst = max(worst, kres.value.value / bd)
                        ok &= kres.value.value <= bd * (1 + FLOAT_RTOL)
    report(7, "CBC and Korobov values below their convergence bounds", ok, time.perf_counter() - t0, 120,
           f"(max value/bound {worst:.3f})")


# 8 -------------------------------------------------------------------------

def test_criterion_08_smoothness_propagation():
    t0 = time.perf_counter()
    ok = True
    for m in (4, 6):
        w = Weights.product([1.0, 0.25])
        for alpha in (2, 3):
            res = cbc_construct(SearchConfig(2, m, 2, 3, CriterionKind.b1(alpha), w))
            lhs = eval_b1(res.rule, w.scaled(1.5), 3).value
            rhs = eval_b1(res.rule, w, 2).value ** 1.5
            ok &= lhs <= rhs * (1 + FLOAT_RTOL)
    report(8, "B1 at higher smoothness below the powered B1", ok, time.perf_counter() - t0, 60)


# 9 -------------------------------------------------------------------------

def test_criterion_09_fast_cbc_equivalence():
    t0 = time.perf_counter()
    ok = True
    worst = 0.0
    for m in range(1, 9):
        for s in (1, 2, 3):
            for d in (2, 3):
                w = Weights.product([(j + 1) ** -2.0 for j in range(s)])
                config = SearchConfig(2, m, s, d, CriterionKind.b1(d), w)
                a, f = cbc_construct(config), fast_cbc_construct(config)
                ok &= a.generating_vector == f.generating_vector
                for x, y in zip(a.criterion_trace, f.criterion_trace):
                    rel = abs(x.value - y.value) / max(abs(x.value), 1e-300)
                    worst = max(worst, rel)
                    ok &= rel <= 1e-10
    report(9, "fast CBC reproduces naive CBC", ok, time.perf_counter() - t0, 120, f"(max rel diff {worst:.1e})")


# 10 ------------------------------------------------------------------------

def _convergence(args):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli_main(["convergence", *args])
    rows = list(csv.DictReader(io.StringIO(out.getvalue())))
    return code, rows, err.getvalue()


def test_criterion_10_convergence_rate():
    t0 = time.perf_counter()
    results = []
    for alpha, mr, threshold in ((2, "6..14", -1.75), (3, "6..12", -2.5)):
        code, rows, msg = _convergence(["--s", "2", "--d", str(alpha), "--alpha", str(alpha),
                                        "--algorithm", "fast-cbc", "--m-range", mr])
        ms = [int(r["m"]) for r in rows]
        slope = fit_slope(ms, [float(r["value"]) for r in rows])
        bounds_ok = all(float(r["bound"]) >= float(r["value"]) for r in rows)
        results.append((alpha, slope, threshold, code == 0 and bounds_ok and slope <= threshold))
    ok = all(r[3] for r in results)
    detail = "; ".join(f"alpha=d={a}: slope {s:.3f} (need <= {t})" for a, s, t, _ in results)
    report(10, "B1 convergence slope", ok, time.perf_counter() - t0, 300, f"({detail})")


# 11 ------------------------------------------------------------------------

def test_criterion_11_integration_rate():
    t0 = time.perf_counter()
    ok = True
    parts = []
    for s in (2, 4):
        f = PolyProductIntegrand.harmonic(s)
        ms = list(range(6, 17))
        err_il, err_cl = [], []
        for m in ms:
            w = Weights.product([(j + 1) ** -2.0 for j in range(s)])
            res = fast_cbc_construct(SearchConfig(2, m, s, 2, CriterionKind.b1(2), w))
            x = generate_interlaced_points(res.rule).as_float()
            err_il.append(abs(f(x).mean() - f.exact))
            # classical reference: the same lattice, one component per block, not interlaced
            z = generate_lattice_points(res.rule.base).as_float()[:, ::2]
            err_cl.append(abs(f(z).mean() - f.exact))
        s_il, s_cl = fit_slope(ms, err_il), fit_slope(ms, err_cl)
        ok &= s_il <= -1.5 and s_il < s_cl
        parts.append(f"s={s}: {s_il:.3f} vs classical {s_cl:.3f}")
    report(11, "integration error slope", ok, time.perf_counter() - t0, 300, f"({'; '.join(parts)})")


# 12 ------------------------------------------------------------------------

def test_criterion_12_dual_multiple_closed_form():
    t0 = time.perf_counter()
    ok = True
    for b, K in ((2, 16), (3, 10)):
        for a in (2, 3):
            for lam in (0.6, 0.8, 1.0):
                for m in (0, 1, 2):
                    trunc, tail = dual_weight_sum(lam, m, a, a, b, K)
                    closed = dual_multiple_sum(lam, m, a, a, b)
                    ok &= abs(closed - trunc) <= tail * (1 + 1e-9) + NOISE
    report(12, "closed-form dual-multiple sum matches truncated sums", ok, time.perf_counter() - t0, 5)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
