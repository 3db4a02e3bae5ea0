"""Eigenvalues, spectral moments, step ECDFs and the Kolmogorov distance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _check_symmetric(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"need a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    if not np.array_equal(A, A.T):
        raise ValueError("matrix is not exactly symmetric")
    return A


def eigh_sym(A):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix."""
    A = _check_symmetric(A)
    return np.linalg.eigh(A)


def eigenvalues_sym(A) -> np.ndarray:
    return eigh_sym(A)[0]


def eig_residual(A) -> tuple[float, float]:
    """(max_j ||A v_j - lam_j v_j||, the bound 1e-9 * p * ||A||_2)."""
    A = _check_symmetric(A)
    lam, V = np.linalg.eigh(A)
    res = np.linalg.norm(A @ V - V * lam, axis=0)
    norm2 = float(np.max(np.abs(lam))) if lam.size else 0.0
    return float(res.max()), 1e-9 * A.shape[0] * max(norm2, 1.0)


def esd_moments(eigs, rmax: int) -> np.ndarray:
    """m_r = mean(lambda^r), r = 1..rmax."""
    eigs = np.asarray(eigs, dtype=float)
    if eigs.size == 0:
        raise ValueError("empty eigenvalue list")
    return np.array([np.mean(eigs**r) for r in range(1, rmax + 1)])


@dataclass(frozen=True)
class StepECDF:
    support: np.ndarray  # distinct jump points, ascending
    counts: np.ndarray  # cumulative sample counts at each jump point

    @property
    def size(self) -> int:
        return int(self.counts[-1])

    @property
    def cum(self) -> np.ndarray:
        return self.counts / self.size

    def count_le(self, x) -> np.ndarray:
        idx = np.searchsorted(self.support, np.asarray(x, dtype=float), side="right")
        return np.concatenate([[0], self.counts])[idx]

    def __call__(self, x):
        return self.count_le(x) / self.size


def ecdf(eigs) -> StepECDF:
    eigs = np.sort(np.asarray(eigs, dtype=float))
    if eigs.size == 0:
        raise ValueError("empty sample")
    support, counts = np.unique(eigs, return_counts=True)
    return StepECDF(support, np.cumsum(counts))


def kolmogorov_distance(F: StepECDF, G: StepECDF) -> float:
    """sup_x |F(x) - G(x)|, evaluated on the merged support.

    Computed on integer counts with one final division, so equal ratios give
    bit-identical distances (the test statistic is heavily tied for small p).
    """
    pts = np.union1d(F.support, G.support)
    gap = np.abs(F.count_le(pts) * G.size - G.count_le(pts) * F.size)
    return float(gap.max() / (F.size * G.size))


def snap_together(a, b, tol: float):
    """Map values of a and b lying within ``tol`` of each other (chained) to one value.

    Eigenvalues of permuted copies of one matrix agree only to rounding, which an
    exact ECDF comparison would read as a 1/p jump.
    """
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    merged = np.sort(np.concatenate([a, b]))
    starts = np.concatenate([[True], np.diff(merged) > tol])
    reps = merged[starts]

    def snap(v):
        return reps[np.searchsorted(reps, v, side="right") - 1]

    return snap(a), snap(b)


@dataclass
class SpectralSummary:
    eigenvalues: np.ndarray
    moments: np.ndarray
    source: str = ""

    def ecdf(self) -> StepECDF:
        return ecdf(self.eigenvalues)


def spectral_summary(A, rmax: int = 8, source: str = "") -> SpectralSummary:
    lam = eigenvalues_sym(A)
    return SpectralSummary(lam, esd_moments(lam, rmax), source)


def esd_distance(A, B) -> float:
    """Kolmogorov distance between the ESDs of two symmetric matrices."""
    return kolmogorov_distance(ecdf(eigenvalues_sym(A)), ecdf(eigenvalues_sym(B)))
