"""Integer lattices: Hermite normal form with transform, determinants, covolumes."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf_with_transform(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form ``H = U * A`` with ``U`` unimodular.

    Nonzero rows of ``H`` come first, pivots are positive and entries above
    a pivot are reduced into ``[0, pivot)``.  Zero rows of ``H`` are kept, so
    the matching rows of ``U`` span the integer relations among the rows of
    ``A``.
    """
    A = [list(map(int, r)) for r in rows]
    m = len(A)
    ncols = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    pivot_row = 0
    for col in range(ncols):
        if pivot_row >= m:
            break
        for i in range(pivot_row + 1, m):
            if A[i][col] == 0:
                continue
            a, b = A[pivot_row][col], A[i][col]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            # [[x, y], [-q, p]] has determinant 1
            ra, rb = A[pivot_row], A[i]
            ua, ub = U[pivot_row], U[i]
            A[pivot_row] = [x * s + y * t for s, t in zip(ra, rb)]
            A[i] = [p * t - q * s for s, t in zip(ra, rb)]
            U[pivot_row] = [x * s + y * t for s, t in zip(ua, ub)]
            U[i] = [p * t - q * s for s, t in zip(ua, ub)]
        if A[pivot_row][col] == 0:
            continue
        if A[pivot_row][col] < 0:
            A[pivot_row] = [-e for e in A[pivot_row]]
            U[pivot_row] = [-e for e in U[pivot_row]]
        piv = A[pivot_row][col]
        for i in range(pivot_row):
            f = A[i][col] // piv
            if f:
                A[i] = [s - f * t for s, t in zip(A[i], A[pivot_row])]
                U[i] = [s - f * t for s, t in zip(U[i], U[pivot_row])]
        pivot_row += 1
    return A, U


def hnf(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Nonzero rows of the Hermite normal form."""
    H, _ = hnf_with_transform(rows)
    return [r for r in H if any(r)]


def det(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by Gaussian elimination over Q."""
    M = [[Fraction(e) for e in r] for r in matrix]
    n = len(M)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        result *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return sign * result


def _integer_basis(gens: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    den = lcm(*(Fraction(e).denominator for g in gens for e in g))
    rows = [[int(Fraction(e) * den) for e in g] for g in gens]
    return hnf(rows), den


def covolume(gens: Sequence[Sequence[Fraction]]) -> Fraction:
    """Covolume of the full-rank lattice spanned by rational vectors."""
    basis, den = _integer_basis(gens)
    dim = len(gens[0])
    if len(basis) != dim:
        raise ValueError("generators do not span a full-rank lattice")
    return abs(det(basis)) / Fraction(den) ** dim
