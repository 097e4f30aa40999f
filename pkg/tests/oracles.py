"""Independent brute-force references used by the test-suite."""

import math

import numpy as np

# series truncation: every k < b**K
SERIES_K = {2: 16, 3: 10}


def digit_matrix(values, b, width):
    v = np.asarray(values, dtype=np.int64)
    return np.stack([(v // b**i) % b for i in range(width)], axis=-1)


def walsh_series(coef_of_mu1, b, K, zdigits):
    """``sum_{1 <= k < b**K} c(mu_1(k)) wal_k(z)`` for every z with ``zdigits`` digits.

    Only the lowest ``zdigits`` digits of k meet nonzero digits of z, so the
    k are aggregated by residue mod b**zdigits before the character sum.
    """
    k = np.arange(1, b**K, dtype=np.int64)
    nd = np.floor(np.log(k) / math.log(b) + 1e-9).astype(np.int64) + 1
    # correct floating log at exact powers
    nd = np.where(b ** nd <= k, nd + 1, nd)
    nd = np.where(b ** (nd - 1) > k, nd - 1, nd)
    w = np.bincount(k % b**zdigits, weights=coef_of_mu1(nd), minlength=b**zdigits)
    kd = digit_matrix(np.arange(b**zdigits), b, zdigits)  # kappa_0..kappa_{w-1}
    z = np.arange(b**zdigits)
    zd = digit_matrix(z, b, zdigits)[:, ::-1]  # x_1..x_w (most significant first)
    e = (kd @ zd.T) % b  # (k residue, z)
    omega = np.exp(2j * np.pi * np.arange(b) / b)
    return (w @ omega[e]).real


def phi1_series(alpha, d, b, zdigits=6, K=None):
    K = K or SERIES_K[b]
    mn = min(alpha, d)
    vals = walsh_series(lambda t: float(b) ** (-mn * t - alpha / 2), b, K, zdigits)
    tail = float(b) ** (-alpha / 2) * (b - 1) / b * float(b) ** ((1 - mn) * (K + 1)) / (1 - float(b) ** (1 - mn))
    return vals, tail


def phi2_series(d, b, zdigits=6, K=None):
    K = K or SERIES_K[b]
    vals = float(b) ** d * walsh_series(lambda t: float(b) ** (-d * t), b, K, zdigits)
    tail = float(b) ** d * (b - 1) / b * float(b) ** ((1 - d) * (K + 1)) / (1 - float(b) ** (1 - d))
    return vals, tail


def dual_weight_sum(lam, m, alpha, d, b, K):
    """Truncated ``sum_{1 <= k < b**K} r_tilde1(b**m k)**lam`` and its exact geometric tail."""
    mn = min(alpha, d)
    k = np.arange(1, b**K, dtype=np.int64)
    nd = np.zeros(k.shape, dtype=np.int64)
    v = k.copy()
    while v.any():
        nd += v > 0
        v //= b
    terms = float(b) ** (-lam * (mn * (nd + m) + alpha / 2))
    ratio = float(b) ** (1 - lam * mn)
    first = (b - 1) * float(b) ** K * float(b) ** (-lam * (mn * (K + 1 + m) + alpha / 2))
    return float(terms.sum()), first / (1 - ratio)
