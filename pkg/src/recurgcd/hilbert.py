"""Degree-m slices of the ideal (F, G), their dimensions and monomial complements.

For forms ``F, G`` of degree ``d`` in ``n + 1`` variables, the slice
``(F, G)_m`` is spanned by ``x^j F`` and ``x^j G`` with ``|j| = m - d``.
When ``F`` and ``G`` are coprime its codimension in the degree-m forms is
given by :func:`hilbert_prime`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations_with_replacement
from math import comb
from typing import Sequence

from .errors import ConfigurationError, InvariantViolation
from .exactfield import FieldElement, Place, abs_compare
from .linalg import EchelonBasis, bareiss_rank, integer_rows, rank_mod_p
from .logvalue import DEFAULT_PRECISION
from .multipoly import MultiPoly

MAX_MONOMIALS = 3003

Exponent = tuple[int, ...]


def binom(top: int, bottom: int) -> int:
    """Binomial coefficient, zero when ``top < bottom`` or ``top < 0``."""
    if top < 0 or bottom < 0 or top < bottom:
        return 0
    return comb(top, bottom)


def hilbert_prime(n: int, d: int, m: int) -> int:
    """Codimension ``N'`` of ``(F, G)_m`` for coprime forms of degree ``d`` in ``n + 1`` variables."""
    if n < 1 or d < 1 or m < 0:
        raise ValueError("need n >= 1, d >= 1, m >= 0")
    return binom(m + n, n) - 2 * binom(m + n - d, n) + binom(m + n - 2 * d, n)


def hilbert_rank(n: int, d: int, m: int) -> int:
    """``N = dim (F, G)_m`` for coprime forms."""
    return binom(m + n, n) - hilbert_prime(n, d, m)


def monomials(nvars: int, m: int) -> list[Exponent]:
    """All exponent vectors of total degree ``m``, in ascending graded-lex order."""
    out = []
    for combo in combinations_with_replacement(range(nvars), m):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out)


def _entry(c: FieldElement, rational: bool):
    return c.a if rational else c


@dataclass
class IdealSlice:
    """The degree-m part of ``(F, G)`` in monomial coordinates."""

    F: MultiPoly
    G: MultiPoly
    m: int
    monomials: list[Exponent]
    rows: list[dict[int, object]]
    rank: int
    rank_method: str
    rational: bool
    _echelon: EchelonBasis | None = field(default=None, repr=False)

    @property
    def nvars(self) -> int:
        return self.F.nvars

    @property
    def d(self) -> int:
        return self.F.degree()

    @property
    def n_monomials(self) -> int:
        return len(self.monomials)

    @property
    def complement_dimension(self) -> int:
        return self.n_monomials - self.rank

    N = property(lambda self: self.rank)
    N_prime = property(lambda self: self.complement_dimension)

    def column(self, e: Exponent) -> int:
        return self._index[e]

    def __post_init__(self):
        self._index = {e: i for i, e in enumerate(self.monomials)}

    def basis_matrix(self) -> list[list]:
        zero = Fraction(0) if self.rational else FieldElement(0)
        dense = []
        for r in self.rows:
            row = [zero] * self.n_monomials
            for k, x in r.items():
                row[k] = x
            dense.append(row)
        return dense

    def echelon(self) -> EchelonBasis:
        """Echelon basis of the slice (cached)."""
        if self._echelon is None:
            ech = EchelonBasis()
            for r in self.rows:
                ech.add(r)
            if len(ech) != self.rank:
                raise InvariantViolation("echelon rank disagrees with certified rank")
            self._echelon = ech
        return self._echelon

    def vector(self, poly: MultiPoly) -> dict[int, object]:
        if not poly.is_homogeneous() or (poly.terms and poly.degree() != self.m):
            raise ValueError("polynomial is not a form of the slice degree")
        return {self._index[e]: _entry(c, self.rational) for e, c in poly.terms.items()}

    def contains(self, poly: MultiPoly) -> bool:
        return self.echelon().contains(self.vector(poly))

    def koszul_syzygies(self) -> int:
        """Number of independent syzygies ``x^k (G, -F)`` with ``|k| = m - 2d``."""
        return binom(self.m - 2 * self.d + self.nvars - 1, self.nvars - 1)


def _check_forms(F: MultiPoly, G: MultiPoly, m: int) -> int:
    F._check(G)
    if not F.terms or not G.terms:
        raise ValueError("zero generator")
    if not F.is_homogeneous() or not G.is_homogeneous():
        raise ValueError("ideal_slice needs homogeneous generators")
    d = F.degree()
    if G.degree() != d:
        raise ValueError(
            f"generators have degrees {d} and {G.degree()}; equalize them first"
        )
    if m < d:
        raise ValueError(f"slice degree {m} is below the generator degree {d}")
    return d


def ideal_slice(F: MultiPoly, G: MultiPoly, m: int, max_monomials: int = MAX_MONOMIALS) -> IdealSlice:
    """Build ``(F, G)_m`` and its exact rank.

    Over Q the rank is certified by a sandwich: the rank modulo a prime is a
    lower bound, and the Koszul syzygies give the upper bound
    ``rows - C(m - 2d + n, n)``.  When the bounds differ the rank comes from
    fraction-free elimination.  Over a quadratic field exact elimination is
    used directly.
    """
    d = _check_forms(F, G, m)
    nv = F.nvars
    count = binom(m + nv - 1, nv - 1)
    if count > max_monomials:
        raise ConfigurationError(
            f"{count} monomials of degree {m} in {nv} variables exceed the cap {max_monomials}; "
            "lower m or raise the cap"
        )
    monos = monomials(nv, m)
    index = {e: i for i, e in enumerate(monos)}
    rational = all(c.is_rational() for p in (F, G) for c in p.terms.values())
    rows: list[dict[int, object]] = []
    for gen in (F, G):
        for j in monomials(nv, m - d):
            rows.append(
                {
                    index[tuple(a + b for a, b in zip(e, j))]: _entry(c, rational)
                    for e, c in gen.terms.items()
                }
            )
    slice_ = IdealSlice(F, G, m, monos, rows, 0, "", rational)
    if rational:
        dense = [[Fraction(0)] * count for _ in rows]
        for r, row in zip(dense, rows):
            for k, x in row.items():
                r[k] = x
        ints = integer_rows(dense)
        lower = rank_mod_p(ints)
        upper = min(len(rows) - slice_.koszul_syzygies(), count)
        if lower == upper:
            slice_.rank, slice_.rank_method = lower, "modular+koszul"
        else:
            slice_.rank, slice_.rank_method = bareiss_rank(ints), "bareiss"
    else:
        slice_.rank = len(slice_.echelon())
        slice_.rank_method = "echelon"
    return slice_


def monomial_value(u: Sequence[FieldElement], e: Exponent) -> FieldElement:
    """``u^e`` for the point ``(1, u_1, ..., u_n)``; ``e[0]`` is the ``x0`` exponent."""
    value = FieldElement(1)
    for ui, k in zip(u, e[1:]):
        if k:
            value = value * ui**k
    return value


def greedy_basis(
    slice_: IdealSlice,
    u: Sequence,
    v: Place,
    precision: int = DEFAULT_PRECISION,
) -> list[Exponent]:
    """Monomials spanning the complement of the slice, chosen greedily by ``|u^i|_v``.

    Candidates are visited in increasing ``|u^i|_v``; ties go to the smaller
    exponent in graded-lex order.  A candidate is kept when it is linearly
    independent of the slice and the monomials already kept.  Comparisons of
    absolute values are exact, so ``precision`` is never escalated.
    """
    u = [FieldElement.coerce(x) for x in u]
    if len(u) != slice_.nvars - 1:
        raise ValueError(f"need {slice_.nvars - 1} values of u, got {len(u)}")
    if any(not x for x in u):
        raise ValueError("u must have nonzero entries")
    if slice_.complement_dimension < 1:
        return []
    values = {e: monomial_value(u, e) for e in slice_.monomials}

    def order(e1: Exponent, e2: Exponent) -> int:
        s = abs_compare(values[e1], values[e2], v)
        if s:
            return s
        return (e1 > e2) - (e1 < e2)

    candidates = sorted(slice_.monomials, key=cmp_to_key(order))
    ech = slice_.echelon().copy()
    one = Fraction(1) if slice_.rational else FieldElement(1)
    chosen: list[Exponent] = []
    for e in candidates:
        if ech.add({slice_.column(e): one}):
            chosen.append(e)
            if len(chosen) == slice_.complement_dimension:
                break
    if len(chosen) != slice_.complement_dimension:
        raise InvariantViolation("greedy basis does not span the complement")
    return chosen


def reduction_forms(slice_: IdealSlice, basis: Sequence[Exponent]) -> dict[Exponent, list]:
    """Coefficients ``c`` with ``x^i + sum_j c_j x^(basis_j)`` in the slice.

    Every degree-m monomial outside ``basis`` is mapped; basis monomials are
    left out.  Each combination is re-checked for membership.
    """
    ech = slice_.echelon()
    basis = list(basis)
    k = len(basis)
    if k != slice_.complement_dimension:
        raise InvariantViolation(f"basis has {k} monomials, complement has dimension {slice_.complement_dimension}")
    one = Fraction(1) if slice_.rational else FieldElement(1)
    zero = one - one
    reduced = [ech.reduce({slice_.column(e): one}) for e in basis]
    free_cols = sorted({c for r in reduced for c in r})
    if len(free_cols) != k:
        raise InvariantViolation("basis is not independent modulo the slice")
    col_pos = {c: i for i, c in enumerate(free_cols)}
    matrix = [[zero] * k for _ in range(k)]
    for j, r in enumerate(reduced):
        for c, x in r.items():
            matrix[col_pos[c]][j] = x
    inverse = _invert(matrix, one, zero)
    if inverse is None:
        raise InvariantViolation("basis is not independent modulo the slice")
    basis_set = set(basis)
    out: dict[Exponent, list] = {}
    for e in slice_.monomials:
        if e in basis_set:
            continue
        r = ech.reduce({slice_.column(e): one})
        rhs = [zero] * k
        for c, x in r.items():
            if c not in col_pos:
                raise InvariantViolation("monomial escapes the span of slice and basis")
            rhs[col_pos[c]] = -x
        coeffs = [sum((inverse[j][i] * rhs[i] for i in range(k)), zero) for j in range(k)]
        vec = {slice_.column(e): one}
        for b, c in zip(basis, coeffs):
            if c:
                vec[slice_.column(b)] = vec.get(slice_.column(b), zero) + c
        if not ech.contains(vec):
            raise InvariantViolation(f"reduction of {e} is not in the slice")
        out[e] = coeffs
    return out


def _invert(matrix: list[list], one, zero) -> list[list] | None:
    n = len(matrix)
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(matrix)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = one / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def slice_combination(slice_: IdealSlice, poly: MultiPoly) -> list:
    """Coefficients expressing a slice element in the row basis ``phi``.

    ``phi`` is the independent subset of the rows ``x^j F, x^j G`` picked in
    row order; the result has one coefficient per row (zero for rows not in
    ``phi``).  This is the linear form attached to ``poly``.
    """
    one = Fraction(1) if slice_.rational else FieldElement(1)
    zero = one - one
    # track each echelon row as a combination of original rows
    rows: list[dict[int, object]] = []
    combos: list[dict[int, object]] = []
    pivots: list[int] = []

    def reduce(vec, combo):
        v, cmb = dict(vec), dict(combo)
        for row, c, piv in zip(rows, combos, pivots):
            f = v.get(piv)
            if not f:
                continue
            for k, x in row.items():
                y = v.get(k, zero) - f * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
            for k, x in c.items():
                y = cmb.get(k, zero) - f * x
                if y:
                    cmb[k] = y
                else:
                    cmb.pop(k, None)
        return v, cmb

    for idx, r in enumerate(slice_.rows):
        v, cmb = reduce(r, {idx: one})
        if not v:
            continue
        piv = min(v)
        inv = one / v[piv]
        rows.append({k: x * inv for k, x in v.items()})
        combos.append({k: x * inv for k, x in cmb.items()})
        pivots.append(piv)
    target = slice_.vector(poly)
    rest, cmb = reduce(target, {})
    if rest:
        raise ValueError("polynomial is not in the slice")
    coeffs = [zero] * len(slice_.rows)
    for k, x in cmb.items():
        coeffs[k] = -x
    return coeffs
