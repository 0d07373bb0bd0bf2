"""Dense linear algebra over F_p (numpy int64) and over the local ring Z_(p).

Row convention throughout: a subspace is the row space of a matrix.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .coeff import valuation


def as_matrix(rows, ncols: int, p: int) -> np.ndarray:
    if len(rows) == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.asarray(rows, dtype=np.int64).reshape(-1, ncols) % p


def rref(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p; zero rows removed."""
    R = np.array(M, dtype=np.int64) % p
    if R.ndim != 2:
        raise ValueError("rref needs a 2-d array")
    m, n = R.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        r = row + nz[0]
        if r != row:
            R[[row, r]] = R[[r, row]]
        R[row] = R[row] * pow(int(R[row, col]), -1, p) % p
        others = np.nonzero(R[:, col])[0]
        for o in others:
            if o != row:
                R[o] = (R[o] - R[o, col] * R[row]) % p
        pivots.append(col)
        row += 1
    return R[:row], pivots


def rank(M: np.ndarray, p: int) -> int:
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])


def left_nullspace(M: np.ndarray, p: int) -> np.ndarray:
    """Rows x with x @ M = 0 (mod p), as an RREF basis."""
    m = M.shape[0]
    if m == 0:
        return np.zeros((0, 0), dtype=np.int64)
    aug = np.concatenate([M % p, np.eye(m, dtype=np.int64)], axis=1)
    R, piv = rref(aug, p)
    n = M.shape[1]
    keep = [i for i, c in enumerate(piv) if c >= n]
    K = R[keep][:, n:]
    if K.shape[0] == 0:
        return np.zeros((0, m), dtype=np.int64)
    return rref(K, p)[0]


def nullspace(M: np.ndarray, p: int) -> np.ndarray:
    """Rows x with M @ x = 0."""
    return left_nullspace(M.T, p)


def reduce_mod_rows(V: np.ndarray, basis_rref: np.ndarray, pivots: list[int], p: int) -> np.ndarray:
    """Reduce the rows of V modulo an RREF basis (clears the pivot columns)."""
    V = np.atleast_2d(np.array(V, dtype=np.int64)) % p
    for r, c in zip(basis_rref, pivots):
        V = (V - np.outer(V[:, c], r)) % p
    return V


def span(*mats: np.ndarray, ncols: int, p: int) -> np.ndarray:
    parts = [m for m in mats if m.size]
    if not parts:
        return np.zeros((0, ncols), dtype=np.int64)
    return rref(np.concatenate(parts, axis=0), p)[0]


def complement(sub: np.ndarray, total: np.ndarray, p: int) -> np.ndarray:
    """Canonical rows spanning total/sub: RREF of total reduced modulo sub."""
    n = total.shape[1]
    if total.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    S, piv = rref(sub, p) if sub.size else (np.zeros((0, n), dtype=np.int64), [])
    red = reduce_mod_rows(total, S, piv, p)
    R, _ = rref(red, p)
    # the reduced rows are independent modulo sub because sub's pivot columns are cleared
    return R


def contains(big: np.ndarray, small: np.ndarray, p: int) -> bool:
    if small.size == 0:
        return True
    if big.size == 0:
        return not (small % p).any()
    return rank(np.concatenate([big, small]), p) == rank(big, p)


# -- Z_(p) ----------------------------------------------------------------------

def plocal_snf(A: list[list[Fraction]], p: int):
    """Smith form over Z_(p): returns (U, D, V) with U A V = D (lists of Fractions).

    D is diagonal with entries p^k (k >= 0) then zeros.  U and V are invertible
    over Z_(p).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [[Fraction(x) for x in row] for row in A]
    U = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    V = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] != 0:
                    v = valuation(D[i][j], p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        v, i, j = best
        D[t], D[i] = D[i], D[t]
        U[t], U[i] = U[i], U[t]
        for row in D:
            row[t], row[j] = row[j], row[t]
        for row in V:
            row[t], row[j] = row[j], row[t]
        # scale pivot to p^v (a unit multiple)
        unit = D[t][t] / Fraction(p) ** v
        for c in range(n):
            D[t][c] /= unit
        for c in range(m):
            U[t][c] /= unit
        piv = D[t][t]
        for i2 in range(m):
            if i2 != t and D[i2][t] != 0:
                f = D[i2][t] / piv
                for c in range(n):
                    D[i2][c] -= f * D[t][c]
                for c in range(m):
                    U[i2][c] -= f * U[t][c]
        for j2 in range(n):
            if j2 != t and D[t][j2] != 0:
                f = D[t][j2] / piv
                for r in range(m):
                    D[r][j2] -= f * D[r][t]
                for r in range(n):
                    V[r][j2] -= f * V[r][t]
        t += 1
    return U, D, V


def plocal_kernel(A: list[list[Fraction]], ncols: int, p: int) -> list[list[Fraction]]:
    """Z_(p)-basis of {x : A x = 0}."""
    if not A:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    U, D, V = plocal_snf(A, p)
    r = sum(1 for i in range(min(len(D), ncols)) if D[i][i] != 0)
    return [[V[row][c] for row in range(ncols)] for c in range(r, ncols)]


def plocal_solvable(A: list[list[Fraction]], b: list[Fraction], p: int) -> bool:
    """Is A x = b solvable with x over Z_(p)?"""
    m = len(b)
    if not A or not A[0]:
        return all(x == 0 for x in b)
    U, D, V = plocal_snf(A, p)
    Ub = [sum(U[i][k] * b[k] for k in range(m)) for i in range(m)]
    n = len(A[0])
    for i in range(m):
        d = D[i][i] if i < n else Fraction(0)
        if d == 0:
            if Ub[i] != 0:
                return False
        elif valuation(Ub[i], p) < valuation(d, p):
            return False
    return True
