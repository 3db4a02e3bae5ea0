"""The distribution families used by the data-generating models.

Each family exposes ``cdf`` (P(X <= t)), ``cdf_strict`` (P(X < t)) and a
left-continuous ``quantile``; all three are vectorised over numpy arrays.
Discrete families also expose their atoms so expectations can be taken as
exact sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

from .quadrature import DEFAULT_TOL, adaptive_rule

PL4_CONST = 45.0 / math.pi**4  # P(X = z) = PL4_CONST / z**4, z = +-1, +-2, ...
TAIL_TOL = 1e-12


def _hurwitz4(a):
    """sum_{m >= 0} (a + m)**-4 for a >= 1."""
    return special.polygamma(3, np.asarray(a, dtype=float)) / 6.0


@dataclass(frozen=True)
class Cauchy:
    loc: float = 0.0
    scale: float = 1.0
    discrete = False

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"Cauchy scale must be positive, got {self.scale}")

    def cdf(self, t):
        return 0.5 + np.arctan((np.asarray(t, dtype=float) - self.loc) / self.scale) / np.pi

    cdf_strict = cdf

    def quantile(self, u):
        return self.loc + self.scale * np.tan(np.pi * (np.asarray(u, dtype=float) - 0.5))

    def to_json(self):
        return {"type": "cauchy", "loc": self.loc, "scale": self.scale}


@dataclass(frozen=True)
class Normal:
    mean: float = 0.0
    sd: float = 1.0
    discrete = False

    def __post_init__(self):
        if not self.sd > 0:
            raise ValueError(f"Normal sd must be positive, got {self.sd}")

    def cdf(self, t):
        return special.ndtr((np.asarray(t, dtype=float) - self.mean) / self.sd)

    cdf_strict = cdf

    def quantile(self, u):
        return self.mean + self.sd * special.ndtri(np.asarray(u, dtype=float))

    def to_json(self):
        return {"type": "normal", "mean": self.mean, "sd": self.sd}


@dataclass(frozen=True)
class StudentT1:
    """Student t with one degree of freedom (standard Cauchy, own tag)."""

    discrete = False

    def cdf(self, t):
        return 0.5 + np.arctan(np.asarray(t, dtype=float)) / np.pi

    cdf_strict = cdf

    def quantile(self, u):
        return np.tan(np.pi * (np.asarray(u, dtype=float) - 0.5))

    def to_json(self):
        return {"type": "t1"}


@dataclass(frozen=True)
class DiscretePowerLaw4:
    """Symmetric integer law with P(X = z) = 45 / (pi^4 z^4), z != 0."""

    discrete = True

    @staticmethod
    def upper_tail(z):
        """P(X >= z) for integer z >= 1; exactly 1/2 at z = 1 by symmetry."""
        z = np.asarray(z, dtype=float)
        return np.where(z <= 1.0, 0.5, PL4_CONST * _hurwitz4(np.maximum(z, 1.0)))

    def cdf(self, t):
        t = np.asarray(t, dtype=float)
        a = np.abs(t)
        # P(X > |t|) and P(X >= |t|), both through the Hurwitz tail
        above = self.upper_tail(np.floor(a) + 1.0)
        at_or_above = np.where(a == 0.0, 0.5, self.upper_tail(np.maximum(np.ceil(a), 1.0)))
        return np.where(t >= 0, 1.0 - above, at_or_above)

    def cdf_strict(self, t):
        t = np.asarray(t, dtype=float)
        a = np.abs(t)
        above = self.upper_tail(np.floor(a) + 1.0)
        at_or_above = np.where(a == 0.0, 0.5, self.upper_tail(np.maximum(np.ceil(a), 1.0)))
        return np.where(t > 0, 1.0 - at_or_above, np.where(t == 0, 0.5, above))

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        out = np.empty_like(u)
        neg = u <= 0.5
        # lower half: largest z with P(X <= -z) = c T(z) >= u
        if np.any(neg):
            un = u[neg]
            lo = np.ones_like(un)
            hi = np.ceil(np.cbrt(PL4_CONST / (3.0 * un))) + 2.0
            while np.any(hi - lo > 1):
                mid = np.floor(0.5 * (lo + hi))
                ok = self.upper_tail(mid) >= un
                lo = np.where(ok, mid, lo)
                hi = np.where(ok, hi, mid)
            out[neg] = -lo
        if np.any(~neg):
            t = 1.0 - u[~neg]
            # upper half: smallest z with P(X > z) = c T(z + 1) <= 1 - u
            lo = np.zeros_like(t)
            hi = np.ceil(np.cbrt(PL4_CONST / (3.0 * t))) + 2.0
            while np.any(hi - lo > 1):
                mid = np.floor(0.5 * (lo + hi))
                ok = self.upper_tail(mid + 1.0) <= t
                hi = np.where(ok, mid, hi)
                lo = np.where(ok, lo, mid)
            out[~neg] = hi
        return out

    @staticmethod
    def truncation(tail_tol: float = TAIL_TOL) -> tuple[int, float]:
        """Smallest Z whose two-sided tail bound 30/(pi^4 Z^3) is below tail_tol."""
        z = math.ceil((30.0 / (math.pi**4 * tail_tol)) ** (1.0 / 3.0))
        return z, 30.0 / (math.pi**4 * z**3)

    def atoms(self, tail_tol: float = TAIL_TOL):
        z, bound = self.truncation(tail_tol)
        pos = np.arange(1, z + 1, dtype=float)
        prob = PL4_CONST / pos**4
        values = np.concatenate([-pos[::-1], pos])
        probs = np.concatenate([prob[::-1], prob])
        return values, probs, bound

    def to_json(self):
        return {"type": "powerlaw4"}


@dataclass(frozen=True)
class FinitePMF:
    values: tuple
    probs: tuple
    discrete = True

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        pr = np.asarray(self.probs, dtype=float)
        if v.ndim != 1 or v.shape != pr.shape or v.size == 0:
            raise ValueError("FinitePMF needs matching non-empty value/prob lists")
        if np.any(np.diff(v) <= 0):
            raise ValueError("FinitePMF atom values must be strictly increasing")
        if np.any(pr < 0) or abs(pr.sum() - 1.0) > 1e-12:
            raise ValueError(f"FinitePMF probabilities must be >= 0 and sum to 1, got {pr.sum()!r}")

    @classmethod
    def from_atoms(cls, atoms):
        atoms = sorted((float(v), float(q)) for v, q in atoms)
        return cls(tuple(v for v, _ in atoms), tuple(q for _, q in atoms))

    @property
    def _arrays(self):
        v = np.asarray(self.values, dtype=float)
        c = np.cumsum(np.asarray(self.probs, dtype=float))
        c[-1] = 1.0
        return v, c

    def cdf(self, t):
        v, c = self._arrays
        idx = np.searchsorted(v, np.asarray(t, dtype=float), side="right")
        return np.concatenate([[0.0], c])[idx]

    def cdf_strict(self, t):
        v, c = self._arrays
        idx = np.searchsorted(v, np.asarray(t, dtype=float), side="left")
        return np.concatenate([[0.0], c])[idx]

    def quantile(self, u):
        v, c = self._arrays
        idx = np.searchsorted(c, np.asarray(u, dtype=float), side="left")
        return v[np.minimum(idx, v.size - 1)]

    def atoms(self, tail_tol: float = TAIL_TOL):
        return np.asarray(self.values, dtype=float), np.asarray(self.probs, dtype=float), 0.0

    def to_json(self):
        return {"type": "pmf", "atoms": [[v, q] for v, q in zip(self.values, self.probs)]}


DistributionSpec = Union[Cauchy, Normal, StudentT1, DiscretePowerLaw4, FinitePMF]


def from_json(obj: dict) -> DistributionSpec:
    kind = obj.get("type")
    if kind == "cauchy":
        return Cauchy(float(obj.get("loc", 0.0)), float(obj.get("scale", 1.0)))
    if kind == "normal":
        return Normal(float(obj.get("mean", 0.0)), float(obj.get("sd", 1.0)))
    if kind == "t1":
        return StudentT1()
    if kind == "powerlaw4":
        return DiscretePowerLaw4()
    if kind == "pmf":
        return FinitePMF.from_atoms(obj["atoms"])
    raise ValueError(f"unknown distribution type {kind!r}")


def cdf(d: DistributionSpec, t):
    """P(X <= t)."""
    return d.cdf(t)


def cdf_strict(d: DistributionSpec, t):
    """P(X < t)."""
    return d.cdf_strict(t)


def sign_score(ref: DistributionSpec, x):
    """E[Sign(x - X')] for X' ~ ref, i.e. P(X' < x) + P(X' <= x) - 1."""
    return ref.cdf_strict(x) + ref.cdf(x) - 1.0


def jump_points(d: DistributionSpec, tail_tol: float = TAIL_TOL) -> np.ndarray:
    """Points where ``sign_score(d, .)`` jumps; empty for continuous laws."""
    if not d.discrete:
        return np.empty(0)
    values, _, _ = d.atoms(tail_tol)
    return values


_PROBE_X = np.array([-1e12, -1e9, -1e6, -1e3, 1e3, 1e6, 1e9, 1e12])
_PROBE_U = np.array([1e-15, 1e-9, 1e-4, 1 - 1e-4, 1 - 1e-9, 1 - 1e-15])


def _check_bounded(d: DistributionSpec, g, bound: float) -> None:
    probe = np.concatenate([_PROBE_X, d.quantile(_PROBE_U)])
    vals = np.asarray(g(probe), dtype=float)
    if not np.all(np.isfinite(vals)) or np.max(np.abs(vals)) > bound:
        raise ValueError("expect() needs a bounded integrand; probe found |g| "
                         f"up to {np.nanmax(np.abs(vals)):.3g}")


def expectation_rule(d: DistributionSpec, f=None, x_breaks=(), tol: float = DEFAULT_TOL,
                     tail_tol: float = TAIL_TOL):
    """Support points and weights representing expectations under ``d``.

    Discrete laws return their atoms (power-law tails truncated, bound
    reported). Continuous laws return a composite Gauss-Legendre rule in
    quantile space, refined until the vector integrand ``f`` converges;
    ``x_breaks`` are jump locations of the integrand on the real line.
    Returns (x, w, error_bound).
    """
    if d.discrete:
        return d.atoms(tail_tol)
    u_breaks = np.unique(d.cdf(np.asarray(x_breaks, dtype=float))) if len(x_breaks) else ()
    rule = adaptive_rule(lambda u: f(d.quantile(u)), u_breaks, tol)
    return d.quantile(rule.nodes), rule.weights, rule.error


def expect_with_error(d: DistributionSpec, g, x_breaks=(), tol: float = DEFAULT_TOL,
                      bound: float = 1e3) -> tuple[float, float]:
    """E[g(X)] for X ~ d together with an error bound."""
    _check_bounded(d, g, bound)
    x, w, err = expectation_rule(d, g, x_breaks, tol)
    vals = np.asarray(g(x), dtype=float)
    if d.discrete:
        err = err * float(np.max(np.abs(vals), initial=1.0))
    return float(vals @ w), err


def expect(d: DistributionSpec, g, x_breaks=(), tol: float = DEFAULT_TOL) -> float:
    """E[g(X)] for X ~ d and bounded g."""
    return expect_with_error(d, g, x_breaks, tol)[0]
