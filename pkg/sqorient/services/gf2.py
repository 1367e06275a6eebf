"""
Dense GF(2) linear algebra on numpy uint8 arrays (XOR row operations).
"""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np


def as_matrix(rows: Sequence[Sequence[int]], n_cols: int) -> np.ndarray:
    M = np.zeros((len(rows), n_cols), dtype=np.uint8)
    for i, row in enumerate(rows):
        M[i, :] = np.asarray(row, dtype=np.uint8) % 2
    return M


def rref(M: np.ndarray, n_pivot_cols: Optional[int] = None) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form over GF(2).

    Pivots are searched left to right in the first `n_pivot_cols` columns;
    row operations act on the full width, so an augmented block rides along.
    Returns (R, pivot_cols).
    """
    R = (np.asarray(M, dtype=np.uint8) % 2).copy()
    m, n = R.shape
    if n_pivot_cols is None:
        n_pivot_cols = n

    pivots: List[int] = []
    row = 0
    for col in range(n_pivot_cols):
        if row == m:
            break
        below = np.flatnonzero(R[row:, col])
        if below.size == 0:
            continue
        found = row + int(below[0])
        if found != row:
            R[[row, found]] = R[[found, row]]
        hits = R[:, col].astype(bool)
        hits[row] = False
        R[hits] ^= R[row]
        pivots.append(col)
        row += 1
    return R, pivots


def rank(M: np.ndarray) -> int:
    if M.size == 0:
        return 0
    _, pivots = rref(M)
    return len(pivots)


def left_inverse(M: np.ndarray) -> Optional[np.ndarray]:
    """
    L with L @ M = I (mod 2) for M of full column rank; None otherwise.
    """
    m, k = M.shape
    if k == 0:
        return np.zeros((0, m), dtype=np.uint8)
    aug = np.concatenate([np.asarray(M, dtype=np.uint8) % 2, np.eye(m, dtype=np.uint8)], axis=1)
    R, pivots = rref(aug, n_pivot_cols=k)
    if len(pivots) < k:
        return None
    return R[:k, k:].copy()


def inverse(M: np.ndarray) -> Optional[np.ndarray]:
    m, k = M.shape
    if m != k:
        return None
    return left_inverse(M)


def matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return (A.astype(np.int64) @ B.astype(np.int64) % 2).astype(np.uint8)
