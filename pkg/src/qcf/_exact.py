"""Exact linear algebra over Fraction, for the object-dtype backend.

numpy.linalg does not accept object arrays, and the dimensions here are
tiny (n <= 8, symmetric-tensor bases up to 36), so plain Gauss-Jordan
with exact pivoting is both sufficient and fast.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np


def as_fraction_matrix(rows: Sequence[Sequence]) -> np.ndarray:
    m = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            m[i, j] = Fraction(v)
    return m


def exact_inv(mat: np.ndarray) -> np.ndarray:
    """Inverse of a square Fraction matrix via Gauss-Jordan."""
    n = mat.shape[0]
    if mat.shape != (n, n):
        raise ValueError("square matrix required")
    a = np.empty((n, 2 * n), dtype=object)
    for i in range(n):
        for j in range(n):
            a[i, j] = Fraction(mat[i, j])
            a[i, n + j] = Fraction(1) if i == j else Fraction(0)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r, col] != 0:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
        inv_p = Fraction(1) / a[col, col]
        a[col, :] = a[col, :] * inv_p
        for r in range(n):
            if r != col and a[r, col] != 0:
                a[r, :] = a[r, :] - a[r, col] * a[col, :]
    return a[:, n:].copy()


def exact_det(mat: np.ndarray) -> Fraction:
    n = mat.shape[0]
    a = [[Fraction(mat[i, j]) for j in range(n)] for i in range(n)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv_p = Fraction(1) / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] * inv_p
                for j in range(col, n):
                    a[r][j] -= f * a[col][j]
    return det


def exact_rank_nullspace(mat: np.ndarray) -> tuple[int, list[np.ndarray]]:
    """Rank and a nullspace basis of a Fraction matrix (exact RREF)."""
    nrows, ncols = mat.shape
    a = [[Fraction(mat[i, j]) for j in range(ncols)] for i in range(nrows)]
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv_p = Fraction(1) / a[row][col]
        a[row] = [v * inv_p for v in a[row]]
        for r in range(nrows):
            if r != row and a[r][col] != 0:
                f = a[r][col]
                a[r] = [a[r][j] - f * a[row][j] for j in range(ncols)]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = np.empty(ncols, dtype=object)
        v[:] = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][fc]
        basis.append(v)
    return len(pivots), basis


def parse_ratio(text: str) -> Fraction:
    """Parse 'p/q' or a decimal literal into an exact Fraction."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(text)


def format_ratio(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
