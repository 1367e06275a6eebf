from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


@dataclass(frozen=True)
class SmithDecomposition:
    """
    left @ A @ right == D, with D diagonal (d_1 | d_2 | ... , d_k > 0)
    and left, right unimodular. right_inverse is right^-1.
    """
    diagonal: Tuple[int, ...]
    left: Matrix
    right: Matrix
    right_inverse: Matrix
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.diagonal if d > 1)

    def diagonal_matrix(self) -> Matrix:
        D = [[0] * self.cols for _ in range(self.rows)]
        for k, d in enumerate(self.diagonal):
            D[k][k] = d
        return D


class _Tracker:
    """
    A matrix under elementary operations, recording the row transform U,
    the column transform V and V^-1 as it goes.
    """

    def __init__(self, A: Sequence[Sequence[int]], cols: int):
        self.D = [[int(x) for x in row] for row in A]
        self.rows = len(self.D)
        self.cols = cols
        self.U = identity(self.rows)
        self.V = identity(cols)
        self.Vi = identity(cols)

    def swap_rows(self, i: int, j: int) -> None:
        if i != j:
            self.D[i], self.D[j] = self.D[j], self.D[i]
            self.U[i], self.U[j] = self.U[j], self.U[i]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for M in (self.D, self.V):
            for row in M:
                row[i], row[j] = row[j], row[i]
        self.Vi[i], self.Vi[j] = self.Vi[j], self.Vi[i]

    def add_row(self, dst: int, src: int, q: int) -> None:
        # row dst += q * row src
        for M in (self.D, self.U):
            M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]

    def add_col(self, dst: int, src: int, q: int) -> None:
        # col dst += q * col src
        for M in (self.D, self.V):
            for row in M:
                row[dst] += q * row[src]
        self.Vi[src] = [a - q * b for a, b in zip(self.Vi[src], self.Vi[dst])]

    def negate_row(self, i: int) -> None:
        for M in (self.D, self.U):
            M[i] = [-a for a in M[i]]

    def negate_col(self, j: int) -> None:
        for M in (self.D, self.V):
            for row in M:
                row[j] = -row[j]
        self.Vi[j] = [-a for a in self.Vi[j]]


def smith_normal_form(A: Sequence[Sequence[int]], cols: int | None = None) -> SmithDecomposition:
    """
    Smith normal form by pivot search on the smallest entry, edge
    clearing and a divisibility repair pass. Exact over Python ints.
    """
    if cols is None:
        cols = len(A[0]) if A else 0
    t = _Tracker(A, cols)
    D = t.D
    rows = t.rows

    k = 0
    while k < min(rows, cols):
        pivot = _smallest(D, range(k, rows), range(k, cols))
        if pivot is None:
            break
        t.swap_rows(k, pivot[0])
        t.swap_cols(k, pivot[1])

        while True:
            dirty = False
            for i in range(k + 1, rows):
                if D[i][k]:
                    t.add_row(i, k, -(D[i][k] // D[k][k]))
                    dirty = dirty or D[i][k] != 0
            for j in range(k + 1, cols):
                if D[k][j]:
                    t.add_col(j, k, -(D[k][j] // D[k][k]))
                    dirty = dirty or D[k][j] != 0
            if dirty:
                # a remainder smaller than the pivot is left on the edge
                best = None
                for i in range(k + 1, rows):
                    if D[i][k] and (best is None or abs(D[i][k]) < best[0]):
                        best = (abs(D[i][k]), "row", i)
                for j in range(k + 1, cols):
                    if D[k][j] and (best is None or abs(D[k][j]) < best[0]):
                        best = (abs(D[k][j]), "col", j)
                if best[1] == "row":
                    t.swap_rows(k, best[2])
                else:
                    t.swap_cols(k, best[2])
                continue

            bad = _non_divisible(D, k, rows, cols)
            if bad is None:
                break
            t.add_row(k, bad, 1)

        if D[k][k] < 0:
            t.negate_row(k)
        k += 1

    return SmithDecomposition(
        diagonal=tuple(D[i][i] for i in range(k)),
        left=t.U,
        right=t.V,
        right_inverse=t.Vi,
        rows=rows,
        cols=cols,
    )


def _smallest(D: Matrix, rows: range, cols: range):
    best = None
    for i in rows:
        for j in cols:
            v = D[i][j]
            if v and (best is None or abs(v) < abs(D[best[0]][best[1]])):
                best = (i, j)
    return best


def _non_divisible(D: Matrix, k: int, rows: int, cols: int):
    p = D[k][k]
    for i in range(k + 1, rows):
        for j in range(k + 1, cols):
            if D[i][j] % p:
                return i
    return None


@dataclass(frozen=True)
class HermiteColumns:
    """
    H = C @ W in column Hermite normal form; W unimodular, W_inverse = W^-1.
    """
    H: Matrix
    W: Matrix
    W_inverse: Matrix


def hermite_columns(C: Sequence[Sequence[int]], cols: int | None = None) -> HermiteColumns:
    """
    Column-style Hermite normal form, scanning rows top to bottom: each
    pivot is positive and the entries left of it in its row are reduced
    into [0, pivot). Canonical for the lattice spanned by the columns.
    """
    if cols is None:
        cols = len(C[0]) if C else 0
    t = _Tracker(C, cols)
    H = t.D

    p = 0
    for i in range(len(H)):
        if p == cols:
            break
        found = False
        while True:
            live = [j for j in range(p, cols) if H[i][j]]
            if not live:
                break
            found = True
            j0 = min(live, key=lambda j: (abs(H[i][j]), j))
            t.swap_cols(p, j0)
            clean = True
            for j in range(p + 1, cols):
                if H[i][j]:
                    t.add_col(j, p, -(H[i][j] // H[i][p]))
                    clean = clean and H[i][j] == 0
            if clean:
                break
        if not found:
            continue
        if H[i][p] < 0:
            t.negate_col(p)
        for j in range(p):
            q = H[i][j] // H[i][p]
            if q:
                t.add_col(j, p, -q)
        p += 1

    return HermiteColumns(H=H, W=t.V, W_inverse=t.Vi)
