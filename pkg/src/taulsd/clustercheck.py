"""Data-driven checks with estimated clusters standing in for the unknown laws.

Cells are grouped into clusters believed to share a distribution. Empirical
CDFs per cluster then give plug-in scores, the pairwise symmetry table A_{u,v}
and the estimator G-hat_{k,i}. The column clustering below is a heuristic
baseline, one of many admissible choices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import derive_seed, grid_uniforms


@dataclass(frozen=True)
class ClusterLabels:
    labels: np.ndarray  # p x n ints in [0, L)

    def __post_init__(self):
        lab = np.asarray(self.labels)
        if lab.ndim != 2 or lab.size == 0:
            raise ValueError("labels must be a nonempty p x n array")
        if lab.min() < 0:
            raise ValueError("cluster ids must be nonnegative")
        present = np.unique(lab)
        if not np.array_equal(present, np.arange(present.size)):
            raise ValueError("cluster ids must be 0..L-1 with every cluster nonempty")
        object.__setattr__(self, "labels", lab.astype(np.int64))

    @property
    def num_clusters(self) -> int:
        return int(self.labels.max()) + 1

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels.ravel(), minlength=self.num_clusters)

    @classmethod
    def from_columns(cls, col_labels, p: int) -> "ClusterLabels":
        return cls(np.tile(np.asarray(col_labels), (p, 1)))


class ClusterECDF:
    def __init__(self, X, labels: ClusterLabels):
        X = np.asarray(X, dtype=float)
        if X.shape != labels.labels.shape:
            raise ValueError(f"data {X.shape} and labels {labels.labels.shape} differ")
        self.samples = [np.sort(X[labels.labels == u]) for u in range(labels.num_clusters)]

    def cdf(self, u: int, t):
        s = self.samples[u]
        return np.searchsorted(s, t, side="right") / s.size

    def cdf_strict(self, u: int, t):
        s = self.samples[u]
        return np.searchsorted(s, t, side="left") / s.size

    def score(self, u: int, t):
        """psi-hat_u(t) = F-hat_u(t) + F-hat_u(t-) - 1."""
        return self.cdf(u, t) + self.cdf_strict(u, t) - 1.0

    def max_tie(self, u: int) -> int:
        _, c = np.unique(self.samples[u], return_counts=True)
        return int(c.max())


@dataclass
class SymmetryReport:
    A: np.ndarray
    max_asymmetry: float
    singletons: list

    def to_json(self):
        return {"A": self.A.tolist(), "max_asymmetry": self.max_asymmetry,
                "singleton_clusters": self.singletons}


def symmetry_stats(X, labels: ClusterLabels) -> SymmetryReport:
    """A[u, v] = mean over cells of cluster v of psi-hat_u."""
    L = labels.num_clusters
    if L < 2:
        raise ValueError("need at least two clusters")
    E = ClusterECDF(X, labels)
    A = np.array([[E.score(u, E.samples[v]).mean() for v in range(L)] for u in range(L)])
    asym = np.abs(A - A.T)
    np.fill_diagonal(asym, 0.0)
    singles = [int(u) for u in np.flatnonzero(labels.sizes == 1)]
    return SymmetryReport(A, float(asym.max()), singles)


def ghat_ki(X, labels: ClusterLabels, k: int, i: int, centered: bool = False) -> np.ndarray:
    """Plug-in G-hat_{k,i} (0-based k, i), pooling the cluster of cell (k, i).

    Entry (j1, j2) averages psi-hat_{u(k,j1)} * psi-hat_{u(k,j2)} over the
    cluster of (k, i). ``centered=True`` subtracts the score means first; that
    variant is a diagnostic, not the estimator itself.
    """
    lab = labels.labels
    E = ClusterECDF(X, labels)
    vals = E.samples[lab[k, i]]
    row = lab[k]
    us, inv = np.unique(row, return_inverse=True)
    S = np.stack([E.score(u, vals) for u in us])
    if centered:
        S = S - S.mean(axis=1, keepdims=True)
    M = S @ S.T / vals.size
    M = 0.5 * (M + M.T)
    return M[np.ix_(inv, inv)]


def ks_statistic(a, b) -> float:
    a, b = np.sort(a), np.sort(b)
    pts = np.concatenate([a, b])
    fa = np.searchsorted(a, pts, side="right") / a.size
    fb = np.searchsorted(b, pts, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def pairwise_ks(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    n = X.shape[1]
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            D[i, j] = D[j, i] = ks_statistic(X[:, i], X[:, j])
    return D


def null_ks_quantile(p: int, level: float = 0.95, reps: int = 2000, seed: int = 0) -> float:
    """Simulated level-quantile of the two-sample KS statistic, both samples of size p."""
    u = grid_uniforms(derive_seed(seed, p), 2 * reps, p)
    d = np.array([ks_statistic(u[2 * r], u[2 * r + 1]) for r in range(reps)])
    return float(np.quantile(d, level, method="inverted_cdf"))


def cluster_columns(X, ks_threshold: float | None = None) -> ClusterLabels:
    """Single-linkage merge of columns whose pairwise KS distance is below the threshold."""
    X = np.asarray(X, dtype=float)
    p, n = X.shape
    if ks_threshold is None:
        ks_threshold = null_ks_quantile(p)
    D = pairwise_ks(X)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in zip(*np.nonzero(np.triu(D < ks_threshold, 1))):
        parent[find(i)] = find(j)
    roots = {}
    cols = [roots.setdefault(find(i), len(roots)) for i in range(n)]
    return ClusterLabels.from_columns(cols, p)
