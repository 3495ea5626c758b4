"""Exact linear algebra over the rationals.

Matrices are anything indexable as ``m[i][j]`` with int/Fraction entries
(lists of lists, numpy object arrays).
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np


def as_fraction_array(mat) -> np.ndarray:
    a = np.array(mat, dtype=object)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return np.vectorize(Fraction, otypes=[object])(a) if a.size else a


def _integer_rows(mat) -> np.ndarray:
    """Scale each row by the lcm of its denominators (row space unchanged)."""
    a = np.array(mat, dtype=object)
    if a.ndim != 2:
        a = a.reshape(len(a), -1)
    out = np.empty(a.shape, dtype=object)
    for r in range(a.shape[0]):
        row = [Fraction(x) for x in a[r]]
        den = lcm(*(x.denominator for x in row)) if row else 1
        out[r] = [int(x * den) for x in row]
    return out


def _bareiss(a: np.ndarray) -> tuple[int, np.ndarray, int]:
    """In-place fraction-free elimination; returns (rank, a, sign of row swaps)."""
    nrows, ncols = a.shape
    prev = 1
    row = 0
    sign = 1
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.flatnonzero(a[row:, col] != 0)
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
            sign = -sign
        p = a[row, col]
        below = a[row + 1:, col:]
        if below.size:
            f = below[:, 0].copy()
            a[row + 1:, col:] = (p * below - np.outer(f, a[row, col:])) // prev
        prev = p
        row += 1
    return row, a, sign


def exact_rank(mat) -> int:
    """Rank over Q by Bareiss elimination on integer-scaled rows."""
    a = _integer_rows(mat)
    if a.size == 0:
        return 0
    rank, _, _ = _bareiss(a)
    return rank


def exact_det(mat) -> Fraction:
    a = np.array(mat, dtype=object)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    dens = []
    scaled = np.empty_like(a)
    for r in range(n):
        row = [Fraction(x) for x in a[r]]
        den = lcm(*(x.denominator for x in row))
        dens.append(den)
        scaled[r] = [int(x * den) for x in row]
    rank, b, sign = _bareiss(scaled)
    if rank < n:
        return Fraction(0)
    total = 1
    for d in dens:
        total *= d
    return Fraction(sign * int(b[n - 1, n - 1]), total)


def _gauss_jordan(m: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        m[c], m[piv] = m[piv], m[c]
        pc = m[c][c]
        m[c] = [x / pc for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return m


def solve(a, b) -> list[Fraction]:
    """Solve the square system a x = b exactly (Gauss-Jordan over Fractions)."""
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    n = len(m)
    return [row[n] for row in _gauss_jordan(m, n)]


def inverse(a) -> np.ndarray:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    out = _gauss_jordan(m, n)
    return np.array([row[n:] for row in out], dtype=object)
