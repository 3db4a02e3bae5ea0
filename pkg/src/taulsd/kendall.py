"""Kendall's tau-a matrix with ties, its diagonal, and the centred statistic.

Pair statistics are kept as exact integer numerators S = C - D (concordant
minus discordant pairs) and divided by n(n-1)/2 once at the end. The fast
path is Knight's O(n log n) algorithm: sort on (x, y), then count strict
inversions of y with a merge sort.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np


@dataclass(frozen=True)
class TauPairCounts:
    concordant: int
    discordant: int
    n: int

    @property
    def tau(self) -> float:
        return (self.concordant - self.discordant) / (self.n * (self.n - 1) / 2)


def dense_ranks(x) -> tuple[np.ndarray, int]:
    """Dense integer ranks of a vector and its number of tied pairs."""
    _, inv, counts = np.unique(np.asarray(x), return_inverse=True, return_counts=True)
    ties = int(np.sum(counts * (counts - 1) // 2))
    return inv.reshape(-1).astype(np.int64), ties


@numba.njit(cache=True)
def _count_inversions(y):
    """Number of pairs a < b with y[a] > y[b] (strict), by bottom-up merge sort."""
    n = y.size
    src = y.copy()
    dst = np.empty_like(src)
    inv = 0
    width = 1
    while width < n:
        lo = 0
        while lo < n:
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            a, b, t = lo, mid, lo
            while a < mid and b < hi:
                if src[a] <= src[b]:
                    dst[t] = src[a]
                    a += 1
                else:
                    dst[t] = src[b]
                    inv += mid - a
                    b += 1
                t += 1
            while a < mid:
                dst[t] = src[a]
                a += 1
                t += 1
            while b < hi:
                dst[t] = src[b]
                b += 1
                t += 1
            lo += 2 * width
        src, dst = dst, src
        width *= 2
    return inv


@numba.njit(cache=True)
def _pair_numerator(rx, ry, ties_x, ties_y):
    """Exact C - D for two dense-rank vectors."""
    n = rx.size
    key = rx * n + ry
    order = np.argsort(key, kind="mergesort")
    ks = key[order]
    ys = ry[order]
    joint = 0
    run = 1
    for t in range(1, n):
        if ks[t] == ks[t - 1]:
            run += 1
        else:
            joint += run * (run - 1) // 2
            run = 1
    joint += run * (run - 1) // 2
    n0 = n * (n - 1) // 2
    disc = _count_inversions(ys)
    return n0 - ties_x - ties_y + joint - 2 * disc


@numba.njit(cache=True)
def _matrix_numerators(ranks, ties):
    p, n = ranks.shape
    n0 = n * (n - 1) // 2
    out = np.empty((p, p), dtype=np.int64)
    for k in range(p):
        out[k, k] = n0 - ties[k]
        for l in range(k + 1, p):
            s = _pair_numerator(ranks[k], ranks[l], ties[k], ties[l])
            out[k, l] = s
            out[l, k] = s
    return out


def _check_pair(x, y):
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"x and y must be vectors of equal length, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise ValueError("Kendall's tau needs n >= 2")
    return x, y


def numerator_naive(x, y) -> int:
    """C - D by enumerating all pairs (the O(n^2) oracle)."""
    x, y = _check_pair(x, y)
    sx = np.sign(np.subtract.outer(x, x)).astype(np.int64)
    sy = np.sign(np.subtract.outer(y, y)).astype(np.int64)
    return int(np.triu(sx * sy, 1).sum())


def numerator_fast(x, y) -> int:
    x, y = _check_pair(x, y)
    rx, tx = dense_ranks(x)
    ry, ty = dense_ranks(y)
    return int(_pair_numerator(rx, ry, tx, ty))


def pair_counts(x, y) -> TauPairCounts:
    x, y = _check_pair(x, y)
    n = x.size
    rx, tx = dense_ranks(x)
    ry, ty = dense_ranks(y)
    _, joint = dense_ranks(rx * n + ry)
    untied = n * (n - 1) // 2 - tx - ty + joint
    s = int(_pair_numerator(rx, ry, tx, ty))
    return TauPairCounts((untied + s) // 2, (untied - s) // 2, n)


def tau_pair(x, y, method: str = "fast") -> float:
    """Kendall's tau-a: (C - D) / (n(n-1)/2), tied pairs counting zero."""
    num = numerator_fast(x, y) if method == "fast" else numerator_naive(x, y)
    n = len(x)
    return num / (n * (n - 1) // 2)


def tau_numerators(X, method: str = "fast") -> np.ndarray:
    """Integer p x p matrix of C - D numerators; diagonal holds untied pairs."""
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[1] < 2:
        raise ValueError(f"need a p x n matrix with n >= 2, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("data matrix has non-finite entries")
    p, n = X.shape
    ranked = [dense_ranks(row) for row in X]
    ranks = np.stack([r for r, _ in ranked])
    ties = np.array([t for _, t in ranked], dtype=np.int64)
    if method == "fast":
        return _matrix_numerators(ranks, ties)
    out = np.empty((p, p), dtype=np.int64)
    for k in range(p):
        out[k, k] = n * (n - 1) // 2 - ties[k]
        for l in range(k + 1, p):
            out[k, l] = out[l, k] = numerator_naive(X[k], X[l])
    return out


def kendall_tau_matrix(X, method: str = "fast") -> np.ndarray:
    """The p x p tau-a matrix; the diagonal holds the mismatch fraction."""
    X = np.asarray(X)
    n = X.shape[1]
    return tau_numerators(X, method) / (n * (n - 1) // 2)


def diag_mismatch(X) -> np.ndarray:
    """Per row, the fraction of ordered pairs i != j with X_ki != X_kj."""
    X = np.atleast_2d(np.asarray(X))
    n = X.shape[1]
    if n < 2:
        raise ValueError("need n >= 2")
    ties = np.array([dense_ranks(row)[1] for row in X], dtype=np.int64)
    n0 = n * (n - 1) // 2
    return (n0 - ties) / n0


def centered_scaled(T, n: int, extra_scale: float = 1.0) -> np.ndarray:
    """extra_scale * sqrt(n/p) * (T - D(T)): zero diagonal by construction."""
    T = np.asarray(T, dtype=float)
    p = T.shape[0]
    out = T * (extra_scale * np.sqrt(n / p))
    np.fill_diagonal(out, 0.0)
    return out


def kendall_statistic(X, extra_scale: float = 1.0) -> np.ndarray:
    """sqrt(n/p) (T - D(T)) straight from data."""
    X = np.asarray(X)
    return centered_scaled(kendall_tau_matrix(X), X.shape[1], extra_scale)
