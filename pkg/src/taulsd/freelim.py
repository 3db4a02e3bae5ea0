"""Limiting-spectrum moments from non-crossing pair partitions.

The 2R-th limit moment is 4^R times a sum over non-crossing pairings pi of
[2R] of g(pi). Each pairing ties the 2R row indices into R + 1 free blocks
(b ~ sigma(s) and s ~ sigma(b) for every pair (b, s), sigma the cyclic shift),
and g(pi) averages a product of tau_2 factors, one per pair, over class
assignments of those blocks. Everything works with floats or Fractions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

DEFAULT_RMAX = 5


def catalan(r: int) -> int:
    return comb(2 * r, r) // (r + 1)


@dataclass(frozen=True)
class Pairing:
    R: int
    pairs: tuple  # ((b, s), ...) with b < s, 1-based, sorted by b

    def __post_init__(self):
        flat = sorted(x for pr in self.pairs for x in pr)
        if flat != list(range(1, 2 * self.R + 1)) or any(b >= s for b, s in self.pairs):
            raise ValueError(f"not a pairing of [{2 * self.R}]: {self.pairs}")


def is_noncrossing(pairs) -> bool:
    """No a < b < c < d with (a, c) and (b, d) both pairs."""
    for (a, c), (b, d) in itertools.permutations(pairs, 2):
        if a < b < c < d:
            return False
    return True


def _nc2(elems: tuple):
    if not elems:
        yield ()
        return
    first = elems[0]
    for idx in range(1, len(elems), 2):
        inner, outer = elems[1:idx], elems[idx + 1:]
        for left in _nc2(inner):
            for right in _nc2(outer):
                yield ((first, elems[idx]),) + left + right


@lru_cache(maxsize=None)
def _enumerate(R: int) -> tuple:
    return tuple(Pairing(R, tuple(sorted(pr))) for pr in _nc2(tuple(range(1, 2 * R + 1))))


def enumerate_nc2(R: int, cap: int = DEFAULT_RMAX) -> list:
    """All non-crossing pairings of [2R], each once, in canonical order."""
    if not 1 <= R <= cap:
        raise ValueError(f"R must be in [1, {cap}], got {R}")
    return list(_enumerate(R))


@dataclass(frozen=True)
class BlockStructure:
    pairing: Pairing
    block_of: tuple  # block id of positions 1..2R (index 0 is position 1)
    num_blocks: int
    link_pairs: tuple  # (block_of(b), block_of(sigma(b))) for each pair (b, s)
    sizes: tuple = field(default=())

    def exponents(self) -> tuple:
        """Block sizes in decreasing order: the exponents of the IID factorisation."""
        return tuple(sorted(self.sizes, reverse=True))


def block_structure(pi: Pairing) -> BlockStructure:
    """Union-find over b ~ sigma(s), s ~ sigma(b); asserts R + 1 blocks."""
    two_r = 2 * pi.R
    parent = list(range(two_r + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def sigma(x):
        return x % two_r + 1

    for b, s in pi.pairs:
        parent[find(b)] = find(sigma(s))
        parent[find(s)] = find(sigma(b))
    roots = {}
    block_of = tuple(roots.setdefault(find(x), len(roots)) for x in range(1, two_r + 1))
    if len(roots) != pi.R + 1:
        raise AssertionError(f"{pi.pairs} gives {len(roots)} blocks, expected {pi.R + 1}")
    links = tuple((block_of[b - 1], block_of[sigma(b) - 1]) for b, _ in pi.pairs)
    sizes = tuple(block_of.count(j) for j in range(len(roots)))
    return BlockStructure(pi, block_of, len(roots), links, sizes)


def g2pi_iid(pi: Pairing, a_moments) -> object:
    """Product over blocks of m_{|block|}(a); a_moments[r - 1] = m_r."""
    bs = block_structure(pi)
    out = 1
    for size in bs.sizes:
        if size > len(a_moments):
            raise ValueError(f"moment of order {size} needed, only {len(a_moments)} given")
        out = out * a_moments[size - 1]
    return out


def _brute_structured(bs: BlockStructure, tau2, weights):
    C = len(weights)
    total = 0
    for assign in itertools.product(range(C), repeat=bs.num_blocks):
        term = 1
        for blk in assign:
            term = term * weights[blk]
        for u, v in bs.link_pairs:
            term = term * tau2[assign[u]][assign[v]]
        total = total + term
    return total


def _tree_structured(bs: BlockStructure, tau2, weights):
    """Sum-product over the link tree (R edges on R + 1 blocks)."""
    C = len(weights)
    adj = {j: [] for j in range(bs.num_blocks)}
    for u, v in bs.link_pairs:
        adj[u].append(v)
        adj[v].append(u)

    def message(node, parent):
        vec = [weights[c] for c in range(C)]
        for child in adj[node]:
            if child == parent:
                continue
            sub = message(child, node)
            vec = [vec[c] * sum(tau2[c][d] * sub[d] for d in range(C)) for c in range(C)]
        return vec

    return sum(message(0, None))


def _is_tree(bs: BlockStructure) -> bool:
    seen = {0}
    stack = [0]
    edges = [tuple(e) for e in bs.link_pairs]
    while stack:
        x = stack.pop()
        for u, v in edges:
            for a, b in ((u, v), (v, u)):
                if a == x and b not in seen:
                    seen.add(b)
                    stack.append(b)
    return len(seen) == bs.num_blocks and len(edges) == bs.num_blocks - 1


def g2pi_structured(pi: Pairing, tau2, weights, cap_classes: int = 16, method: str = "tree"):
    """sum over block class assignments of prod(weights) * prod over pairs of tau2."""
    if len(weights) > cap_classes:
        raise ValueError(f"{len(weights)} row classes exceeds the cap of {cap_classes}")
    tau2 = [list(row) for row in tau2]
    weights = list(weights)
    bs = block_structure(pi)
    if method == "tree" and _is_tree(bs):
        return _tree_structured(bs, tau2, weights)
    return _brute_structured(bs, tau2, weights)


@dataclass
class MomentVector:
    """m_1 .. m_{2 Rmax}; ``provenance`` says which evaluator and model produced it."""

    values: list
    provenance: dict = field(default_factory=dict)

    def even(self) -> list:
        return self.values[1::2]

    def as_floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])

    def to_json(self):
        return {"moments": [float(v) for v in self.values],
                "exact": [str(v) for v in self.values] if any(isinstance(v, Fraction) for v in self.values) else None,
                "provenance": self.provenance}


def lsd_moments(g2_evaluator, Rmax: int = DEFAULT_RMAX, scale=1, provenance=None) -> MomentVector:
    """Odd moments 0, m_2R = scale^2R 4^R sum_pi g(pi)."""
    if not 1 <= Rmax <= DEFAULT_RMAX:
        raise ValueError(f"Rmax must be in [1, {DEFAULT_RMAX}]")
    values = []
    for R in range(1, Rmax + 1):
        total = sum(g2_evaluator(pi) for pi in enumerate_nc2(R))
        values.extend([0, (scale * scale) ** R * 4**R * total])
    return MomentVector(values, dict(provenance or {}))


def semicircle_moments(radius, Rmax: int = DEFAULT_RMAX) -> MomentVector:
    """Moments of the semicircle law on (-radius, radius): m_2k = Cat(k) (radius/2)^2k."""
    values = []
    for k in range(1, Rmax + 1):
        values.extend([0, catalan(k) * (radius / 2) ** (2 * k)])
    return MomentVector(values, {"evaluator": "semicircle", "radius": float(radius)})


def semicircle_cdf(radius: float, x):
    """CDF of the semicircle law with density 2 sqrt(R^2 - x^2) / (pi R^2)."""
    z = np.clip(np.asarray(x, dtype=float) / radius, -1.0, 1.0)
    return 0.5 + (z * np.sqrt(1 - z * z) + np.arcsin(z)) / np.pi


def iid_moment_sequence(variances, rmax: int = 2 * DEFAULT_RMAX) -> list:
    """m_r = mean(Var^r) over rows, the moments of the spectral law of Sigma_p."""
    v = np.asarray(variances, dtype=float)
    return [float(np.mean(v**r)) for r in range(1, rmax + 1)]


def hankel_min_eigenvalue(moments) -> float:
    """Smallest eigenvalue of the Hankel matrix [m_{i+j}] built with m_0 = 1."""
    m = [1.0] + [float(v) for v in moments]
    h = (len(m) - 1) // 2
    H = np.array([[m[i + j] for j in range(h + 1)] for i in range(h + 1)])
    return float(np.linalg.eigvalsh(H)[0])
