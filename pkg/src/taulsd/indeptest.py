"""Monte Carlo independence test built on the spectrum of the centred tau matrix.

Under H0 the rows of Z are independent, so the ESD of sqrt(n/p)(T_Z - D(T_Z))
should look like that of a freshly simulated reference matrix. The alternative
mixes rows through a strictly lower-triangular band matrix.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .kendall import kendall_statistic
from .model import ModelSpec, sample_matrix
from .rng import cell_uniforms, derive_seed
from .spectra import ecdf, eigenvalues_sym, kolmogorov_distance, snap_together

# roles inside one replication
_ROLE_X, _ROLE_Z, _ROLE_REF = 0, 1, 2


def band_matrix(p: int, alpha: float) -> np.ndarray:
    """A[i, j] = alpha^(i - j + 1) for i > j, zero elsewhere."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    i, j = np.indices((p, p))
    A = np.zeros((p, p))
    low = i > j
    A[low] = float(alpha) ** (i[low] - j[low] + 1)
    return A


def _same_shape(a: ModelSpec, b: ModelSpec):
    if (a.p, a.n) != (b.p, b.n):
        raise ValueError(f"models disagree on (p, n): {(a.p, a.n)} vs {(b.p, b.n)}")


def alternative_components(modelX: ModelSpec, modelZ: ModelSpec, seed: int):
    """(X~, Z~) drawn from independent substreams of ``seed``."""
    _same_shape(modelX, modelZ)
    return (sample_matrix(modelX, derive_seed(seed, _ROLE_X)),
            sample_matrix(modelZ, derive_seed(seed, _ROLE_Z)))


def gen_alternative(modelX: ModelSpec, modelZ: ModelSpec, alpha: float, seed: int) -> np.ndarray:
    """Z = X~ + A Z~."""
    Xt, Zt = alternative_components(modelX, modelZ, seed)
    if alpha == 0:
        return Xt
    return Xt + band_matrix(modelX.p, alpha) @ Zt


def _spectrum(X) -> np.ndarray:
    return eigenvalues_sym(kendall_statistic(X))


def test_statistic(Z, Xref) -> float:
    """Kolmogorov distance between the two ESDs.

    Eigenvalues closer than the solver's noise floor (1e-9 p max|lambda|) are
    identified first, so equal spectra give exactly 0.
    """
    Z, Xref = np.asarray(Z, float), np.asarray(Xref, float)
    if Z.shape != Xref.shape:
        raise ValueError(f"shape mismatch {Z.shape} vs {Xref.shape}")
    a, b = _spectrum(Z), _spectrum(Xref)
    tol = 1e-9 * a.size * max(np.abs(a).max(), np.abs(b).max(), 1.0)
    a, b = snap_together(a, b, tol)
    return kolmogorov_distance(ecdf(a), ecdf(b))


test_statistic.__test__ = False  # keep pytest from collecting it


def nearest_rank(values, level: float) -> float:
    """Smallest v with at least a ``level`` fraction of values <= v."""
    v = np.sort(np.asarray(values, dtype=float))
    idx = max(math.ceil(level * v.size) - 1, 0)
    return float(v[idx])


@dataclass
class TestReport:
    __test__ = False

    distances: list
    cutoff: float
    level: float
    seed: int
    reps: int
    alpha: float = 0.0
    model: str = ""
    rejections: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def rejection_rate(self) -> float:
        return self.rejections / self.reps

    def to_json(self) -> dict:
        out = asdict(self)
        out["rejection_rate"] = self.rejection_rate
        return out


def _check_reps(reps, level):
    if reps < 20:
        raise ValueError("need at least 20 replications")
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")


def calibrate_cutoff(model: ModelSpec, reps: int = 200, level: float = 0.95,
                     seed: int = 0) -> TestReport:
    """Null distances between independent (Z, X~) pairs; cutoff by nearest rank."""
    _check_reps(reps, level)
    d = [test_statistic(sample_matrix(model, derive_seed(seed, r, _ROLE_Z)),
                        sample_matrix(model, derive_seed(seed, r, _ROLE_REF)))
         for r in range(reps)]
    cut = nearest_rank(d, level)
    arr = np.asarray(d)
    p_gt, p_eq = float(np.mean(arr > cut)), float(np.mean(arr == cut))
    tie_prob = min(max((1 - level - p_gt) / p_eq, 0.0), 1.0) if p_eq else 0.0
    return TestReport(d, cut, level, seed, reps, 0.0, model.name, int(np.sum(arr > cut)),
                      {"frac_above": p_gt, "frac_at_cutoff": p_eq, "tie_reject_prob": tie_prob})


def randomized_rate(report: TestReport, tie_prob: float) -> float:
    """Rejection rate when distances equal to the cutoff reject with probability tie_prob.

    A diagnostic only: the distance lives on a 1/p grid, so the plain test is
    conservative; randomising at the cutoff restores the nominal level.
    """
    d = np.asarray(report.distances)
    u = cell_uniforms(derive_seed(report.seed, 7), np.zeros(d.size, dtype=np.int64),
                      np.arange(d.size))
    hits = (d > report.cutoff) | ((d == report.cutoff) & (u < tie_prob))
    return float(hits.mean())


def empirical_power(model: ModelSpec, modelZ: ModelSpec, alpha: float, reps: int,
                    cutoff: float, seed: int, level: float = 0.95) -> TestReport:
    """Fraction of alternatives whose distance exceeds ``cutoff``; alpha = 0 gives the size."""
    _check_reps(reps, level)
    _same_shape(model, modelZ)
    d = []
    for r in range(reps):
        Z = gen_alternative(model, modelZ, alpha, derive_seed(seed, r))
        ref = sample_matrix(model, derive_seed(seed, r, _ROLE_REF))
        d.append(test_statistic(Z, ref))
    return TestReport(d, cutoff, level, seed, reps, float(alpha), model.name,
                      int(np.sum(np.asarray(d) > cutoff)))


def size_power_table(model: ModelSpec, alphas=(0.0, 1.0, 2.0), cal_reps: int = 200,
                     eval_reps: int = 200, level: float = 0.95, seed: int = 0,
                     modelZ: ModelSpec | None = None) -> dict:
    """Calibrate once, then evaluate each alpha on fresh, disjoint substreams."""
    modelZ = modelZ or model
    cal = calibrate_cutoff(model, cal_reps, level, derive_seed(seed, 0))
    rows = {}
    for a_idx, alpha in enumerate(alphas):
        rep = empirical_power(model, modelZ, alpha, eval_reps, cal.cutoff,
                              derive_seed(seed, 1, a_idx), level)
        rows[float(alpha)] = rep
    return {"calibration": cal, "evaluation": rows}
