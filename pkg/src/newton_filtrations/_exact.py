"""Small dense linear algebra over the rationals."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fractions(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(a) for a in row] for row in rows]


def determinant(rows: Sequence[Sequence]) -> Fraction:
    a = to_fractions(rows)
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            if a[r][col]:
                factor = a[r][col] / p
                row_r, row_c = a[r], a[col]
                for c in range(col, n):
                    row_r[c] -= factor * row_c[c]
    return det


def inverse(rows: Sequence[Sequence]) -> Matrix:
    a = to_fractions(rows)
    n = len(a)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve a square nonsingular system."""
    a = to_fractions(rows)
    n = len(a)
    aug = [row + [Fraction(b)] for row, b in zip(a, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col] / p
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [aug[i][n] / aug[i][i] for i in range(n)]


def matvec(rows: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    return [sum((Fraction(a) * b for a, b in zip(row, v)), Fraction(0)) for row in rows]


def solve3(rows: Sequence[Sequence], rhs: Sequence) -> tuple[Fraction, ...] | None:
    """Solve a 3x3 system by Cramer's rule; None when singular."""
    d = determinant(rows)
    if not d:
        return None
    out = []
    for j in range(3):
        m = [list(r) for r in rows]
        for i in range(3):
            m[i][j] = rhs[i]
        out.append(determinant(m) / d)
    return tuple(out)
