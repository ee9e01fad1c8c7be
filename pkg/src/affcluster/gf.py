"""Linear algebra over a prime field F_p on small int64 numpy arrays."""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def primes_from(start: int):
    p = max(2, start)
    while True:
        if is_prime(p):
            yield p
        p += 1


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of ``k``-dimensional subspaces of ``F_q^n``."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def rref(mat, p: int):
    """Reduced row echelon form and pivot columns."""
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = a.shape
    inv = inverse_table(p)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * inv[a[r, c]]) % p
        others = np.nonzero(a[:, c])[0]
        for i in others:
            if i != r:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat, p: int) -> int:
    a = np.asarray(mat)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(mat, p: int) -> np.ndarray:
    """Columns spanning ``{v : mat @ v = 0}``; shape ``(ncols, k)``."""
    a = np.asarray(mat, dtype=np.int64)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-r[i, f]) % p
    return basis


def left_nullspace(mat, p: int) -> np.ndarray:
    """Rows spanning ``{y : y @ mat = 0}``; shape ``(k, nrows)``."""
    a = np.asarray(mat, dtype=np.int64)
    return nullspace(a.T, p).T


def row_space_basis(mat, p: int) -> np.ndarray:
    r, pivots = rref(mat, p)
    return r[: len(pivots)]


def solve(mat, rhs, p: int):
    """Some ``x`` with ``mat @ x = rhs`` or ``None``."""
    a = np.asarray(mat, dtype=np.int64) % p
    b = np.asarray(rhs, dtype=np.int64).reshape(-1, 1) % p
    aug, pivots = rref(np.hstack([a, b]), p)
    n = a.shape[1]
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = aug[i, n]
    return x


def batch_rank(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices of shape ``(N, r, c)`` over F_p."""
    a = np.array(mats, dtype=np.int64) % p
    n, rows, cols = a.shape
    rk = np.zeros(n, dtype=np.int64)
    if rows == 0 or cols == 0 or n == 0:
        return rk
    inv = inverse_table(p)
    row_idx = np.arange(rows)
    ar = np.arange(n)
    for c in range(cols):
        avail = (row_idx[None, :] >= rk[:, None]) & (a[:, :, c] != 0)
        has = avail.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(avail, axis=1)
        sel = ar[has]
        prow = piv[has]
        trow = rk[has]
        # swap pivot row into position rk
        pivot_rows = a[sel, prow].copy()
        a[sel, prow] = a[sel, trow]
        a[sel, trow] = pivot_rows
        pivot_rows = (pivot_rows * inv[pivot_rows[:, c]][:, None]) % p
        a[sel, trow] = pivot_rows
        # eliminate below
        sub = a[sel]
        factors = sub[:, :, c].copy()
        below = row_idx[None, :] > trow[:, None]
        factors *= below
        sub = (sub - factors[:, :, None] * pivot_rows[:, None, :]) % p
        a[sel] = sub
        rk[has] += 1
    return rk


@lru_cache(maxsize=256)
def subspaces(d: int, k: int, p: int) -> np.ndarray:
    """All ``k``-dimensional subspaces of ``F_p^d`` as RREF row bases, shape ``(G, k, d)``.

    Each subspace appears exactly once (reduced echelon forms are unique).
    """
    if k < 0 or k > d:
        return np.zeros((0, max(k, 0), d), dtype=np.int64)
    if k == 0:
        return np.zeros((1, 0, d), dtype=np.int64)
    chunks = []
    for piv in combinations(range(d), k):
        free = [(i, c) for i, pc in enumerate(piv) for c in range(pc + 1, d) if c not in piv]
        count = p ** len(free)
        block = np.zeros((count, k, d), dtype=np.int64)
        for i, pc in enumerate(piv):
            block[:, i, pc] = 1
        if free:
            vals = np.indices((p,) * len(free), dtype=np.int64).reshape(len(free), -1).T
            for col, (i, c) in enumerate(free):
                block[:, i, c] = vals[:, col]
        chunks.append(block)
    out = np.concatenate(chunks, axis=0)
    out.setflags(write=False)
    return out
