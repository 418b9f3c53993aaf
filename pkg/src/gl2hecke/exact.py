"""Exact integer linear algebra: fraction-free (Bareiss) determinant and rank."""

from __future__ import annotations

import numpy as np


def _to_object(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        if isinstance(v, (float, np.floating)):
            raise TypeError("floating point entries are not allowed")
        out[idx] = int(v)
    return out


def exact_determinant(m) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    a = _to_object(m)
    n, k = a.shape
    if n != k:
        raise ValueError(f"determinant of non-square matrix {a.shape}")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k, k] == 0:
            nz = np.flatnonzero(a[k + 1 :, k] != 0)
            if not nz.size:
                return 0
            r = k + 1 + int(nz[0])
            a[[k, r]] = a[[r, k]]
            sign = -sign
        pivot = a[k, k]
        a[k + 1 :, k + 1 :] = (
            a[k + 1 :, k + 1 :] * pivot - np.outer(a[k + 1 :, k], a[k, k + 1 :])
        ) // prev
        prev = pivot
    return sign * int(a[n - 1, n - 1])


def exact_rank(m) -> int:
    """Rank over Q via fraction-free row echelon form."""
    a = _to_object(m)
    rows, cols = a.shape
    r, prev = 0, 1
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if not nz.size:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        pivot = a[r, c]
        if r + 1 < rows:
            a[r + 1 :, c + 1 :] = (
                a[r + 1 :, c + 1 :] * pivot - np.outer(a[r + 1 :, c], a[r, c + 1 :])
            ) // prev
            a[r + 1 :, c] = 0
        prev = pivot
        r += 1
    return r
