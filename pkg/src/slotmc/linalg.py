"""Small dense linear algebra over exact rationals, with an mpmath fallback."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

import mpmath

# exact elimination is used up to this dimension; beyond it, high-precision reals
EXACT_MAX_SIZE = 33
MP_DPS = 50


class SingularMatrixError(ArithmeticError):
    pass


def _is_exact(rows: Sequence[Sequence]) -> bool:
    return all(isinstance(x, (Fraction, int)) for row in rows for x in row)


def identity(n: int) -> List[List[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a, b):
    inner = len(b)
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(len(b[0]))] for row in a]


def _inverse_exact(a) -> List[List[Fraction]]:
    n = len(a)
    # augmented [A | I], Gauss-Jordan with first-nonzero pivoting
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        m[col], m[pivot] = m[pivot], m[col]
        inv_p = 1 / m[col][col]
        m[col] = [x * inv_p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def _solve_exact(a, b) -> List[Fraction]:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(v)] for row, v in zip(a, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        m[col], m[pivot] = m[pivot], m[col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        acc = m[r][n] - sum(m[r][c] * x[c] for c in range(r + 1, n))
        x[r] = acc / m[r][r]
    return x


def inverse(a):
    """Inverse of a square matrix given as nested lists.

    Rational input of size <= ``EXACT_MAX_SIZE`` is inverted exactly and
    returns ``Fraction`` entries; anything else goes through mpmath LU at
    ``MP_DPS`` digits and returns floats.
    """
    if _is_exact(a) and len(a) <= EXACT_MAX_SIZE:
        return _inverse_exact(a)
    with mpmath.workdps(MP_DPS):
        try:
            inv = mpmath.inverse(mpmath.matrix([[mpmath.mpf(x) for x in row] for row in a]))
        except ZeroDivisionError as exc:
            raise SingularMatrixError("matrix is singular") from exc
        return [[float(inv[i, j]) for j in range(inv.cols)] for i in range(inv.rows)]


def solve(a, b):
    """Solve ``a x = b``; same exact/high-precision split as :func:`inverse`."""
    if _is_exact(a) and _is_exact([b]) and len(a) <= EXACT_MAX_SIZE:
        return _solve_exact(a, b)
    with mpmath.workdps(MP_DPS):
        try:
            x = mpmath.lu_solve(
                mpmath.matrix([[mpmath.mpf(v) for v in row] for row in a]),
                mpmath.matrix([mpmath.mpf(v) for v in b]),
            )
        except ZeroDivisionError as exc:
            raise SingularMatrixError("matrix is singular") from exc
        return [float(x[i]) for i in range(len(b))]
