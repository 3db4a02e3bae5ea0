"""Model-side Hoeffding analytics.

For a row k, the score of column i against column j is
psi_j(X_ki) = P(X' < X_ki) + P(X' <= X_ki) - 1 with X' distributed as cell
(k, j). All covariance matrices of scores are block constant over column
classes, so everything here is computed on class-reduced tables and only
expanded to n x n on request.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .distributions import Normal, expectation_rule, jump_points, sign_score
from .model import ModelSpec

CLOSED_FORM_TOL = 1e-8
ASSUMPTION2_TOL = 1e-8


def _equal_mean_normals(dists) -> bool:
    return all(isinstance(d, Normal) for d in dists) and len({d.mean for d in dists}) == 1


def arcsine_cov(src: Normal, refs) -> np.ndarray:
    """Cov of normal scores: (2/pi) asin(s^2 / sqrt((s^2 + r1^2)(s^2 + r2^2)))."""
    s2 = src.sd ** 2
    a = src.sd / np.sqrt(s2 + np.array([r.sd ** 2 for r in refs]))
    return (2.0 / np.pi) * np.arcsin(np.clip(np.outer(a, a), -1.0, 1.0))


@numba.njit(cache=True)
def _arcsine_sq_sum(a, m):
    """sum_{j1, j2} m_j1 m_j2 asin(a_j1 a_j2)^2, using symmetry."""
    total = 0.0
    for x in range(a.size):
        total += m[x] * m[x] * np.arcsin(a[x] * a[x]) ** 2
        acc = 0.0
        for y in range(x + 1, a.size):
            acc += m[y] * np.arcsin(a[x] * a[y]) ** 2
        total += 2.0 * m[x] * acc
    return total


class ScoreTables:
    """Means and covariances of sign scores, E_s[psi_c] and Cov_s(psi_c1, psi_c2)."""

    cache_width = 64  # wide tables (one class per column) are cheap to recompute

    def __init__(self, dists, tol: float = 1e-10):
        self.dists = tuple(dists)
        self.tol = tol
        self._cache = {}
        self.max_error = 0.0

    def moments(self, s: int, refs) -> tuple[np.ndarray, np.ndarray]:
        """(means, second moments) of the scores of ``refs`` under class ``s``."""
        refs = tuple(int(c) for c in refs)
        key = (s, refs)
        if key in self._cache:
            return self._cache[key]
        src = self.dists[s]
        ref_d = [self.dists[c] for c in refs]
        if _equal_mean_normals([src, *ref_d]):
            cov = arcsine_cov(src, ref_d)
            out = (np.zeros(len(refs)), cov)
        else:
            out = self._quadrature(src, ref_d)
        if len(refs) <= self.cache_width:
            self._cache[key] = out
        return out

    def _quadrature(self, src, ref_d):
        m = len(ref_d)
        iu = np.triu_indices(m)

        def f(x):
            psi = np.stack([sign_score(r, x) for r in ref_d])
            return np.vstack([psi, psi[iu[0]] * psi[iu[1]]])

        breaks = np.concatenate([jump_points(r) for r in ref_d]) if not src.discrete else ()
        x, w, err = expectation_rule(src, f, breaks, self.tol)
        self.max_error = max(self.max_error, err)
        psi = np.stack([sign_score(r, x) for r in ref_d])
        means = psi @ w
        second = (psi * w) @ psi.T
        return means, 0.5 * (second + second.T)

    def cov(self, s: int, refs) -> np.ndarray:
        means, second = self.moments(s, refs)
        return second - np.outer(means, means)

    def var(self, s: int, refs) -> np.ndarray:
        """Diagonal of ``cov`` without forming the full table when avoidable."""
        src = self.dists[s]
        ref_d = [self.dists[c] for c in refs]
        if len(refs) > self.cache_width and _equal_mean_normals([src, *ref_d]):
            a2 = src.sd**2 / (src.sd**2 + np.array([r.sd**2 for r in ref_d]))
            return (2.0 / np.pi) * np.arcsin(a2)
        return np.diag(self.cov(s, refs))

    def is_arcsine(self, classes) -> bool:
        return _equal_mean_normals([self.dists[int(c)] for c in classes])

    def quadrature_cov(self, s: int, refs) -> np.ndarray:
        """Covariance by quadrature only (the closed-form cross-check)."""
        means, second = self._quadrature(self.dists[s], [self.dists[c] for c in refs])
        return second - np.outer(means, means)


@dataclass
class GkiMatrix:
    """Cov(Y_{k,i,j1}, Y_{k,i,j2}) in class-reduced form."""

    k: int
    i: int
    classes: np.ndarray  # distinct reference classes in row k
    multiplicity: np.ndarray  # number of columns j of each class
    cov: np.ndarray  # class x class covariance block values
    column_class: np.ndarray = field(repr=False)  # class of each column j

    def expand(self) -> np.ndarray:
        idx = np.searchsorted(self.classes, self.column_class)
        return self.cov[np.ix_(idx, idx)]

    def trace(self) -> float:
        return float(self.multiplicity @ np.diag(self.cov))


def _row_types(row):
    classes, counts = np.unique(row, return_counts=True)
    return classes, counts


def gki_matrix(model: ModelSpec, k: int, i: int, tables: ScoreTables | None = None,
               check_closed_form: bool = True) -> GkiMatrix:
    """The covariance matrix of the scores of cell (k, i) (1-based indices)."""
    if not (1 <= k <= model.p and 1 <= i <= model.n):
        raise ValueError(f"cell ({k}, {i}) outside a {model.p} x {model.n} model")
    tables = tables or ScoreTables(model.dists)
    row = model.class_grid()[k - 1]
    classes, counts = _row_types(row)
    s = int(row[i - 1])
    cov = tables.cov(s, classes)
    if check_closed_form and _equal_mean_normals([model.dists[c] for c in (s, *classes)]):
        pick = classes[np.linspace(0, classes.size - 1, min(4, classes.size)).astype(int)]
        exact = tables.cov(s, pick)
        quad = tables.quadrature_cov(s, pick)
        gap = float(np.max(np.abs(exact - quad)))
        if gap > CLOSED_FORM_TOL:
            raise ArithmeticError(f"arcsine closed form and quadrature disagree by {gap:.2e}")
    return GkiMatrix(k, i, classes, counts, cov, row.copy())


@dataclass
class TraceStats:
    gamma1_hat: float
    gamma2_hat: float
    gamma1_by_row: np.ndarray  # n^-2 sum_i Trace(G_{k,i}) for each k
    tau2: np.ndarray  # row-class x row-class table of n^-3 sum_i Trace(G_{k,i} G_{k',i})
    row_labels: np.ndarray
    row_weights: np.ndarray  # frequency of each row class among the p rows
    quadrature_error: float = 0.0

    def to_json(self):
        return {"gamma1_hat": self.gamma1_hat, "gamma2_hat": self.gamma2_hat,
                "gamma1_by_row": self.gamma1_by_row.tolist(), "tau2": self.tau2.tolist(),
                "row_weights": self.row_weights.tolist(),
                "quadrature_error": self.quadrature_error}


def _trace_pair(tables, row_a, row_b, n):
    """n^-3 sum_i Trace(G_{a,i} G_{b,i}) for two rows given by their class patterns."""
    pairs, counts = np.unique(np.stack([row_a, row_b], axis=1), axis=0, return_counts=True)
    ca, cb = pairs[:, 0], pairs[:, 1]
    m = counts.astype(float)
    ua, ia = np.unique(ca, return_inverse=True)
    ub, ib = np.unique(cb, return_inverse=True)
    total = 0.0
    if row_a is row_b and tables.is_arcsine(ua):
        sd = np.array([tables.dists[int(c)].sd for c in ua])
        mc = np.bincount(ia, weights=m)
        for t0 in range(pairs.shape[0]):
            s2 = tables.dists[int(ca[t0])].sd ** 2
            a = np.sqrt(s2 / (s2 + sd**2))
            total += m[t0] * (2.0 / np.pi) ** 2 * _arcsine_sq_sum(a, mc)
        return total / n**3
    for t0 in range(pairs.shape[0]):
        A = tables.cov(int(ca[t0]), ua)[np.ix_(ia, ia)]
        B = A if (row_a is row_b) else tables.cov(int(cb[t0]), ub)[np.ix_(ib, ib)]
        total += m[t0] * (m @ (A * B) @ m)
    return total / n**3


def _gamma1_by_class(model, tables, patterns):
    n = model.n
    out = np.empty(len(patterns))
    for r, row in enumerate(patterns):
        classes, counts = _row_types(row)
        diag_by_src = {int(s): float(counts @ tables.var(int(s), classes)) for s in classes}
        out[r] = sum(cnt * diag_by_src[int(s)] for s, cnt in zip(classes, counts)) / n**2
    return out


def gamma1_hat(model: ModelSpec, tables: ScoreTables | None = None) -> float:
    """p^-1 sum_k n^-2 sum_i Trace(G_{k,i}) alone, without the tau_2 table."""
    tables = tables or ScoreTables(model.dists)
    labels, patterns = model.row_classes()
    return float(np.mean(_gamma1_by_class(model, tables, patterns)[labels]))


def trace_stats(model: ModelSpec, tables: ScoreTables | None = None) -> TraceStats:
    """gamma_1, gamma_2 and the tau_2 table using class multiplicities."""
    tables = tables or ScoreTables(model.dists)
    n = model.n
    labels, patterns = model.row_classes()
    g1_class = _gamma1_by_class(model, tables, patterns)
    nr = len(patterns)
    tau2 = np.empty((nr, nr))
    for a in range(nr):
        for b in range(a, nr):
            pa, pb = patterns[a], patterns[b]
            tau2[a, b] = tau2[b, a] = _trace_pair(tables, pa, pa if a == b else pb, n)
    weights = np.bincount(labels, minlength=nr) / model.p
    return TraceStats(
        gamma1_hat=float(weights @ g1_class),
        gamma2_hat=float(weights @ tau2 @ weights),
        gamma1_by_row=g1_class[labels],
        tau2=tau2,
        row_labels=labels,
        row_weights=weights,
        quadrature_error=tables.max_error,
    )


def richardson_gamma(factory, p: int, n: int) -> tuple[float, float]:
    """First-order extrapolation 2 g(n) - g(n/2) of (gamma_1, gamma_2) for families
    whose class layout depends on n (factory(p, n) -> ModelSpec)."""
    full = trace_stats(factory(p, n))
    half = trace_stats(factory(p, n // 2))
    return (2 * full.gamma1_hat - half.gamma1_hat, 2 * full.gamma2_hat - half.gamma2_hat)


@dataclass
class Assumption2Report:
    max_abs_delta: float
    worst_pair: tuple | None
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.max_abs_delta <= self.tolerance

    def to_json(self):
        return {"max_abs_delta": self.max_abs_delta, "worst_pair": self.worst_pair,
                "tolerance": self.tolerance, "ok": self.ok}


def check_assumption2(model: ModelSpec, tol: float = ASSUMPTION2_TOL,
                      tables: ScoreTables | None = None) -> Assumption2Report:
    """max |P(X > X') - P(X < X')| over class pairs sharing a row."""
    tables = tables or ScoreTables(model.dists)
    _, patterns = model.row_classes()
    worst, pair = 0.0, None
    for row in patterns:
        classes = np.unique(row)
        for s in classes:
            means, _ = tables.moments(int(s), classes)
            j = int(np.argmax(np.abs(means)))
            if abs(means[j]) > worst:
                worst, pair = float(abs(means[j])), (int(s), int(classes[j]))
    return Assumption2Report(worst, pair if worst > tol else None, tol)


def sign_balance(d_x, d_y, tables: ScoreTables | None = None) -> float:
    """P(X > Y) - P(X < Y) for independent X ~ d_x, Y ~ d_y."""
    tables = tables or ScoreTables((d_x, d_y))
    means, _ = tables.moments(0, (1,))
    return float(means[0])


def check_g1_rate(factory, g1: float, n_grid, p_of_n):
    """a_n |gamma1_hat(n) - g1| with a_n = max(sqrt(np), n/p), one row per n."""
    rows = []
    for n in n_grid:
        p = int(p_of_n(n))
        gh = gamma1_hat(factory(p, n))
        a_n = max(np.sqrt(n * p), n / p)
        rows.append({"n": int(n), "p": p, "a_n": float(a_n), "gamma1_hat": gh,
                     "gap": abs(gh - g1), "scaled_gap": float(a_n * abs(gh - g1))})
    return rows


def check_assumption3(model: ModelSpec, gamma1: float, gamma2: float,
                      tables: ScoreTables | None = None):
    """Per-row deviations (n/p)|gamma1(k) - gamma1| and (n/p)|tau2(k, k') - gamma2|
    and the least-squares decay exponent of the row deviations in k."""
    tables = tables or ScoreTables(model.dists)
    st = trace_stats(model, tables)
    scale = model.n / model.p
    dev1 = scale * np.abs(st.gamma1_by_row - gamma1)
    dev2 = scale * np.abs(st.tau2 - gamma2)
    k = np.arange(1, model.p + 1)
    pos = dev1 > 0
    slope = float(np.polyfit(np.log(k[pos]), np.log(dev1[pos]), 1)[0]) if pos.sum() >= 2 else None
    return {"row_deviation": dev1.tolist(), "tau2_deviation": dev2.tolist(),
            "row_decay_exponent": slope}


def check_assumption3a(model: ModelSpec, tables: ScoreTables | None = None):
    """Rows identically distributed, and n^-(r+1) sum_i Trace(G_{k,i}^r) for r = 1, 2."""
    _, patterns = model.row_classes()
    st = trace_stats(model, tables)
    return {"rows_identical": len(patterns) == 1,
            "gamma1": st.gamma1_hat,
            "gamma2": float(st.tau2[0, 0]) if len(patterns) == 1 else None}


def score_matrix(model: ModelSpec, X, k: int) -> dict:
    """{class c: psi_c(X_k.)} for the classes present in row k (0-based k)."""
    row = model.class_grid()[k]
    return {int(c): sign_score(model.dists[c], X[k]) for c in np.unique(row)}


def _check_dims(model, X):
    X = np.asarray(X, dtype=float)
    if X.shape != (model.p, model.n):
        raise ValueError(f"data is {X.shape}, model is {(model.p, model.n)}")
    return X


def projection_matrix(model: ModelSpec, X, block: int = 64) -> np.ndarray:
    """G_kl = (n(n-1))^-1 sum_{i,j} Y_{k,i,j} Y_{l,i,j}, the first-order projection."""
    X = _check_dims(model, X)
    p, n = X.shape
    g = model.class_grid()
    C = model.num_classes
    if C <= 16:
        psi = np.stack([sign_score(d, X) for d in model.dists], axis=1)  # p, C, n
        gram = np.einsum("kci,ldi->kcld", psi, psi)
        onehot = (g[:, :, None] == np.arange(C)).astype(float)  # p, n, C
        joint = np.einsum("kjc,ljd->klcd", onehot, onehot)
        G = np.einsum("klcd,kcld->kl", joint, gram)
    else:
        G = np.zeros((p, p))
        for lo in range(0, n, block):
            hi = min(lo + block, n)
            Y = np.empty((p, hi - lo, n))
            for k in range(p):
                for c in np.unique(g[k]):
                    cols = g[k] == c
                    Y[k][:, cols] = sign_score(model.dists[c], X[k, lo:hi])[:, None]
            flat = Y.reshape(p, -1)
            G += flat @ flat.T
    G /= n * (n - 1)
    return 0.5 * (G + G.T)


def projection_statistic(model: ModelSpec, X, g1: float) -> np.ndarray:
    """2 sqrt(n/p) (G - g1 I)."""
    p, n = np.shape(X)
    G = projection_matrix(model, X)
    return 2.0 * np.sqrt(n / p) * (G - g1 * np.eye(p))


def normalized_projection_surrogate(model: ModelSpec, X) -> np.ndarray:
    """Zero-diagonal matrix of inner products of centred, unit-norm score rows."""
    X = _check_dims(model, X)
    if not model.is_column_iid():
        raise ValueError("normalized surrogate needs a column-IID model "
                         "(each row identically distributed across i)")
    g = model.class_grid()
    Y = np.stack([sign_score(model.dists[g[k, 0]], X[k]) for k in range(model.p)])
    Y = Y - Y.mean(axis=1, keepdims=True)
    norms = np.sqrt(np.sum(Y**2, axis=1))
    if np.any(norms == 0):
        bad = int(np.flatnonzero(norms == 0)[0]) + 1
        raise ValueError(f"degenerate row k={bad}: constant scores, normalisation undefined")
    Y /= norms[:, None]
    out = Y @ Y.T
    np.fill_diagonal(out, 0.0)
    return out


def column_iid_variances(model: ModelSpec, tables: ScoreTables | None = None) -> np.ndarray:
    """Var(Y_k1) for each row of a column-IID model."""
    if not model.is_column_iid():
        raise ValueError("model is not column-IID")
    tables = tables or ScoreTables(model.dists)
    g = model.class_grid()[:, 0]
    cache = {}
    for c in np.unique(g):
        cache[int(c)] = float(tables.cov(int(c), (int(c),))[0, 0])
    return np.array([cache[int(c)] for c in g])
