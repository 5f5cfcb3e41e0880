"""Dense linear algebra over GF(2).

Vectors are 1-d ``uint8`` arrays with entries in {0, 1}; matrices are 2-d
arrays.  Every function copies its input, so callers may treat arrays as
immutable values.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np


def as_bits(v) -> np.ndarray:
    return (np.asarray(v, dtype=np.int64) & 1).astype(np.uint8)


def as_matrix(m, ncols: Optional[int] = None) -> np.ndarray:
    a = np.asarray(m, dtype=np.int64)
    if a.size == 0:
        return np.zeros((a.shape[0] if a.ndim == 2 else 0, ncols or 0), dtype=np.uint8)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return (a & 1).astype(np.uint8)


def rref(m, ncols: Optional[int] = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and pivot columns.

    The returned matrix has the same shape as ``m``; zero rows sit at the
    bottom.
    """
    a = as_matrix(m, ncols).copy()
    nrows, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r >= nrows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m, ncols: Optional[int] = None) -> int:
    return len(rref(m, ncols)[1])


def kernel_basis(m, ncols: Optional[int] = None) -> list[np.ndarray]:
    """Basis of {x : m x = 0}, one vector per free column, in column order."""
    a, pivots = rref(m, ncols)
    n = a.shape[1]
    pivset = set(pivots)
    basis = []
    for free in range(n):
        if free in pivset:
            continue
        x = np.zeros(n, dtype=np.uint8)
        x[free] = 1
        for row, p in enumerate(pivots):
            x[p] = a[row, free]
        basis.append(x)
    return basis


class Subspace:
    """A subspace of GF(2)^n given by spanning vectors, with canonical coset representatives.

    The representative of ``v + span`` is the unique element whose
    coordinates at the rref pivot positions are all zero.
    """

    def __init__(self, vectors: Iterable, n: int):
        rows = [as_bits(v) for v in vectors]
        for v in rows:
            if v.shape != (n,):
                raise ValueError(f"vector of length {v.shape[0]} in subspace of GF(2)^{n}")
        self.n = n
        mat = np.array(rows, dtype=np.uint8).reshape(len(rows), n)
        red, pivots = rref(mat, n)
        self.basis = red[: len(pivots)]
        self.pivots = pivots
        self.free = [c for c in range(n) if c not in set(pivots)]

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def canonical(self, v) -> np.ndarray:
        x = as_bits(v)
        if x.shape != (self.n,):
            raise ValueError(f"length mismatch: {x.shape[0]} vs {self.n}")
        x = x.copy()
        for row, p in zip(self.basis, self.pivots):
            if x[p]:
                x ^= row
        return x

    def contains(self, v) -> bool:
        return not self.canonical(v).any()

    def representatives(self) -> list[np.ndarray]:
        """All canonical coset representatives, in binary order over the free columns."""
        k = len(self.free)
        reps = []
        for mask in range(1 << k):
            x = np.zeros(self.n, dtype=np.uint8)
            for bit, c in enumerate(self.free):
                if mask >> (k - 1 - bit) & 1:
                    x[c] = 1
            reps.append(x)
        return reps


def coset_canonical(subspace: Sequence, v) -> np.ndarray:
    x = as_bits(v)
    return Subspace(subspace, x.shape[0]).canonical(x)


def solve(m, b, ncols: Optional[int] = None) -> Optional[np.ndarray]:
    """Some x with m x = b, or None when the system is inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    a = as_matrix(m, ncols)
    rhs = as_bits(b)
    if rhs.shape != (a.shape[0],):
        raise ValueError(f"right-hand side has length {rhs.shape[0]}, expected {a.shape[0]}")
    aug = np.concatenate([a, rhs.reshape(-1, 1)], axis=1)
    red, pivots = rref(aug)
    n = a.shape[1]
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.uint8)
    for row, p in enumerate(pivots):
        x[p] = red[row, n]
    return x


def matvec(m, x) -> np.ndarray:
    a = as_matrix(m)
    return (a.astype(np.int64) @ as_bits(x).astype(np.int64) % 2).astype(np.uint8)


def matvec_mat(a, b) -> np.ndarray:
    """Matrix product over GF(2)."""
    return (as_matrix(a).astype(np.int64) @ as_matrix(b).astype(np.int64) % 2).astype(np.uint8)
