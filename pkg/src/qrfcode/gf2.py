"""Linear algebra over GF(2).

Matrices are numpy ``uint8`` arrays of zeros and ones. Every routine copies
its input, so callers may pass views without worrying about aliasing.
Pivots are always chosen at the lowest available column, which makes the
canonical forms reproducible.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np


def as_bits(m) -> np.ndarray:
    """Coerce to a 2D uint8 array reduced mod 2."""
    a = np.array(m, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    if a.ndim != 2:
        raise ValueError("expected a 2D bit matrix")
    return (a % 2).astype(np.uint8)


def rref(m) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form and the pivot column of each nonzero row."""
    a = as_bits(m).copy()
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        below = np.nonzero(a[:, c])[0]
        for i in below:
            if i != r:
                a[i] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m) -> int:
    return len(rref(m)[1])


def kernel(m) -> List[np.ndarray]:
    """Basis of the right null space, one vector per free column."""
    a = as_bits(m)
    cols = a.shape[1]
    reduced, pivots = rref(a)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.uint8)
        v[f] = 1
        for row, pc in zip(reduced, pivots):
            if row[f]:
                v[pc] = 1
        basis.append(v)
    return basis


def coset_canonical(v: Sequence[int], subspace) -> np.ndarray:
    """Representative of v + rowspace(subspace) with every pivot bit cleared."""
    vec = np.array(v, dtype=np.uint8) % 2
    sub = as_bits(subspace) if np.size(subspace) else np.zeros((0, vec.size), dtype=np.uint8)
    if sub.shape[0] and sub.shape[1] != vec.size:
        raise ValueError(f"length mismatch: {vec.size} vs {sub.shape[1]}")
    reduced, pivots = rref(sub)
    out = vec.copy()
    for row, pc in zip(reduced, pivots):
        if out[pc]:
            out ^= row
    return out


def in_rowspace(v: Sequence[int], m) -> bool:
    return not coset_canonical(v, m).any()


def solve(m, b: Sequence[int]):
    """Some x with m @ x = b over GF(2), or None."""
    a = as_bits(m)
    rhs = np.array(b, dtype=np.uint8).reshape(-1, 1) % 2
    aug = np.concatenate([a, rhs], axis=1)
    reduced, pivots = rref(aug)
    if pivots and pivots[-1] == a.shape[1]:
        return None
    x = np.zeros(a.shape[1], dtype=np.uint8)
    for row, pc in zip(reduced, pivots):
        x[pc] = row[-1]
    return x


def int_to_bits(value: int, width: int) -> np.ndarray:
    """Most significant bit first."""
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def bits_to_int(bits: Sequence[int]) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | (int(b) & 1)
    return out
