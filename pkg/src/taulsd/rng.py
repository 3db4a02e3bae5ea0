"""Counter-based random numbers keyed by (seed, cell).

A vectorised Philox4x32-10 block cipher. Every cell of a data matrix gets
its own counter, so values never depend on the order in which cells are
drawn, on the matrix shape, or on how the work is split across workers.
"""

from __future__ import annotations

import numpy as np

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)
ROUNDS = 10


def philox4x32(counter, key, rounds: int = ROUNDS) -> np.ndarray:
    """Philox4x32 on a batch of counters.

    counter: (..., 4) array of 32-bit words; key: (2,) or (..., 2) words.
    Returns an array of the same leading shape with 4 uint32 words.
    """
    ctr = np.asarray(counter, dtype=np.uint64) & _MASK32
    k = np.asarray(key, dtype=np.uint64) & _MASK32
    c0, c1, c2, c3 = (ctr[..., j].copy() for j in range(4))
    k0 = np.broadcast_to(k[..., 0], c0.shape).copy()
    k1 = np.broadcast_to(k[..., 1], c0.shape).copy()
    for r in range(rounds):
        if r:
            k0 = (k0 + _W0) & _MASK32
            k1 = (k1 + _W1) & _MASK32
        p0 = _M0 * c0
        p1 = _M1 * c2
        hi0, lo0 = p0 >> _SHIFT32, p0 & _MASK32
        hi1, lo1 = p1 >> _SHIFT32, p1 & _MASK32
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return np.stack([c0, c1, c2, c3], axis=-1).astype(np.uint32)


def split_seed(seed: int) -> tuple[int, int]:
    """Split a 64-bit seed into the two 32-bit Philox key words."""
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    return seed & 0xFFFFFFFF, seed >> 32


def derive_seed(seed: int, *path: int) -> int:
    """Deterministic 64-bit child seed for a labelled substream."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *[int(x) for x in path]])
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


def cell_uniforms(seed: int, rows, cols, stream: int = 0) -> np.ndarray:
    """One uniform in the open interval (0, 1) per (row, col) cell.

    The Philox counter is (row, col, stream, 0) and the key is the seed, so
    the value of a cell is a pure function of (seed, row, col, stream).
    53 bits are taken from the first two output words.
    """
    rows = np.asarray(rows, dtype=np.uint64)
    cols = np.asarray(cols, dtype=np.uint64)
    rows, cols = np.broadcast_arrays(rows, cols)
    ctr = np.zeros(rows.shape + (4,), dtype=np.uint64)
    ctr[..., 0] = rows
    ctr[..., 1] = cols
    ctr[..., 2] = np.uint64(stream)
    out = philox4x32(ctr, split_seed(seed)).astype(np.uint64)
    a = out[..., 0] >> np.uint64(5)
    b = out[..., 1] >> np.uint64(6)
    m = (a * np.uint64(1 << 26) + b).astype(np.float64)
    return (m + 0.5) / 9007199254740992.0


def grid_uniforms(seed: int, p: int, n: int, stream: int = 0) -> np.ndarray:
    """p x n matrix of per-cell uniforms."""
    k, i = np.meshgrid(np.arange(p), np.arange(n), indexing="ij")
    return cell_uniforms(seed, k, i, stream)
