"""Exact linear algebra: fraction-free rank, modular rank, incremental echelon forms.

Entries are Fractions for Q and :class:`FieldElement` for quadratic fields;
both support the field operations used here.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

# 2**61 - 1 is prime
MODULUS = (1 << 61) - 1


def integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    """Scale each rational row by its denominator lcm."""
    out = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        den = lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([int(x * den) for x in fr])
    return out


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination with row pivoting."""
    M = [list(r) for r in rows if any(r)]
    if not M:
        return 0
    ncols = len(M[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        p = M[rank][col]
        prow = M[rank]
        for r in range(rank + 1, len(M)):
            row = M[r]
            f = row[col]
            if f:
                M[r] = [(a * p - f * b) // prev for a, b in zip(row, prow)]
            else:
                M[r] = [(a * p) // prev for a in row]
        prev = p
        rank += 1
        if rank == len(M):
            break
    return rank


def rank_mod_p(rows: Sequence[Sequence[int]], p: int = MODULUS) -> int:
    """Rank over ``Z/p``; never exceeds the rank over Q."""
    M = [[x % p for x in r] for r in rows]
    M = [r for r in M if any(r)]
    if not M:
        return 0
    ncols = len(M[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][col], -1, p)
        prow = [x * inv % p for x in M[rank]]
        M[rank] = prow
        for r in range(rank + 1, len(M)):
            f = M[r][col]
            if f:
                M[r] = [(a - f * b) % p for a, b in zip(M[r], prow)]
        rank += 1
        if rank == len(M):
            break
    return rank


def is_rational_entry(x) -> bool:
    return isinstance(x, (int, Fraction)) or getattr(x, "b", 1) == 0


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank of a matrix over Q or a quadratic field."""
    rows = [list(r) for r in rows]
    if all(is_rational_entry(x) for r in rows for x in r):
        return bareiss_rank(integer_rows([[Fraction(getattr(x, "a", x)) for x in r] for r in rows]))
    ech = EchelonBasis()
    for r in rows:
        ech.add({i: x for i, x in enumerate(r) if x})
    return len(ech)


class EchelonBasis:
    """Incrementally built echelon basis of a row space, with sparse rows.

    Every stored row has a pivot column holding 1 and is zero at the pivots
    of all earlier rows, so reducing by the rows in insertion order yields a
    vector that vanishes at every pivot.  That normal form is unique.
    """

    def __init__(self) -> None:
        self.rows: list[dict[int, object]] = []
        self.pivots: list[int] = []
        self._pivot_set: set[int] = set()

    def __len__(self) -> int:
        return len(self.rows)

    def copy(self) -> "EchelonBasis":
        e = EchelonBasis()
        e.rows = list(self.rows)
        e.pivots = list(self.pivots)
        e._pivot_set = set(self._pivot_set)
        return e

    def reduce(self, vec: Mapping[int, object]) -> dict[int, object]:
        v = {k: x for k, x in vec.items() if x}
        for row, piv in zip(self.rows, self.pivots):
            f = v.get(piv)
            if not f:
                continue
            for k, x in row.items():
                y = v.get(k)
                y = -f * x if y is None else y - f * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
        return v

    def contains(self, vec: Mapping[int, object]) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Mapping[int, object]) -> bool:
        """Add ``vec``; returns False (and stores nothing) if it is dependent."""
        v = self.reduce(vec)
        if not v:
            return False
        piv = min(v)
        inv = 1 / v[piv]
        self.rows.append({k: x * inv for k, x in v.items()})
        self.pivots.append(piv)
        self._pivot_set.add(piv)
        return True

    def extend(self, vecs: Iterable[Mapping[int, object]]) -> int:
        return sum(1 for v in vecs if self.add(v))


def _lift(x):
    return Fraction(x) if isinstance(x, int) else x


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Unique solution of a square nonsingular system by Gauss-Jordan elimination."""
    n = len(matrix)
    aug = [[_lift(x) for x in r] + [_lift(b)] for r, b in zip(matrix, rhs)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            raise ValueError("singular system")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [aug[r][n] for r in range(n)]
