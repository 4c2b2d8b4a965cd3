"""Instance checks of the subspace inequality.

For a point ``P`` in ``P^n``, hyperplanes ``H_1..H_q`` and a finite set of
places ``S`` the left side is ``sum_{v in S} max_J sum_{j in J} lambda_{H_j,v}(P)``
with ``J`` ranging over linearly independent subsets of the forms (the
empty set included), and the right side is ``(n + 1 + eps) h(P)``.
Hyperplanes may move with an index ``n``; their coefficients are then
expressions in ``n`` evaluated exactly per index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import ConfigurationError, DomainError, UndecidableError
from .exactfield import Field, FieldElement, Place, field_of
from .heights import LinearForm, ProjectivePoint, as_point, height_form, height_point, weil
from .linalg import EchelonBasis
from .logvalue import DEFAULT_PRECISION, MAX_PRECISION, LogValue, format_down, format_up, maximum
from .parsing import parse_element, parse_polynomial

MAX_FORMS = 12


def _check_s(S: Iterable[Place], field: Field) -> list[Place]:
    S = sorted(set(S))
    missing = [v for v in field.archimedean_places() if v not in S]
    if missing:
        raise ConfigurationError(
            "S must contain every archimedean place; missing " + ", ".join(map(str, missing))
        )
    return S


def independent_subsets(forms: Sequence[LinearForm], max_size: int) -> list[tuple[int, ...]]:
    """All index sets of linearly independent forms of size at most ``max_size``."""
    out: list[tuple[int, ...]] = [()]

    def grow(start: int, chosen: tuple[int, ...], ech: EchelonBasis):
        if len(chosen) == max_size:
            return
        for k in range(start, len(forms)):
            nxt = ech.copy()
            if nxt.add({i: c for i, c in enumerate(forms[k].coeffs) if c}):
                subset = chosen + (k,)
                out.append(subset)
                grow(k + 1, subset, nxt)

    grow(0, (), EchelonBasis())
    return out


def best_general_position_sum(
    forms: Sequence[LinearForm],
    P,
    v: Place,
    precision: int = DEFAULT_PRECISION,
    subsets: Sequence[tuple[int, ...]] | None = None,
) -> LogValue:
    """``max_J sum_{j in J} lambda_{H_j,v}(P)`` over independent ``J`` (empty ``J`` gives 0)."""
    P = as_point(P)
    if len(forms) > MAX_FORMS:
        raise ConfigurationError(f"{len(forms)} forms exceed the cap of {MAX_FORMS}")
    for k, L in enumerate(forms):
        if not L(P):
            raise DomainError(f"form {k} ({L}) vanishes at {P}")
    lam = [weil(L, P, v, precision) for L in forms]
    if subsets is None:
        subsets = independent_subsets(forms, P.dimension + 1)
    sums = []
    for J in subsets:
        acc = LogValue.zero(precision)
        for j in J:
            acc = acc + lam[j]
        sums.append(acc)
    return maximum(sums)


@dataclass
class HyperplaneFamily:
    """Linear forms whose coefficients may depend on the index ``n``.

    Each form is a text expression linear in ``x0..x{dim}`` (e.g.
    ``x0 + n*x1``) or a fixed :class:`LinearForm`.
    """

    forms: list
    dimension: int
    d: int | None = None

    def at(self, n: int) -> list[LinearForm | None]:
        """Forms at index ``n``; ``None`` marks a form that evaluates to zero."""
        names = [f"x{i}" for i in range(self.dimension + 1)]
        out: list[LinearForm | None] = []
        for f in self.forms:
            if isinstance(f, LinearForm):
                out.append(f)
                continue
            poly = parse_polynomial(f, names, self.d, {"n": n})
            coeffs = [FieldElement(0, 0, self.d)] * (self.dimension + 1)
            for e, c in poly.terms.items():
                if sum(e) != 1:
                    raise ConfigurationError(f"form {f!r} is not linear homogeneous")
                coeffs[e.index(1)] = c
            out.append(LinearForm(coeffs) if any(coeffs) else None)
        return out


@dataclass
class PointFamily:
    """Projective points given by coordinate expressions in ``n`` (e.g. ``1, 2^n``)."""

    coords: list[str]
    d: int | None = None

    @property
    def dimension(self) -> int:
        return len(self.coords) - 1

    def at(self, n: int) -> ProjectivePoint:
        return ProjectivePoint([parse_element(c, self.d, {"n": n}) for c in self.coords])


@dataclass
class SubspaceRow:
    index: int
    lhs: LogValue | None = None
    rhs: LogValue | None = None
    violated: bool | None = None
    undecided: bool = False
    precision: int = DEFAULT_PRECISION
    skipped: str | None = None
    height_ratios: list[float] = field(default_factory=list)

    def csv_fields(self) -> list[str]:
        lhs_lo, lhs_hi = self.lhs.enclosure()
        rhs_lo, rhs_hi = self.rhs.enclosure()
        violated = "undecided" if self.undecided else str(int(bool(self.violated)))
        return [
            str(self.index),
            format_down(lhs_lo),
            format_up(lhs_hi),
            format_down(rhs_lo),
            format_up(rhs_hi),
            violated,
            str(int(self.undecided)),
        ]


CSV_HEADER = ["index", "lhs_lo", "lhs_hi", "rhs_lo", "rhs_hi", "violated", "undecided"]


@dataclass
class SubspaceReport:
    rows: list[SubspaceRow]
    eps: Fraction

    @property
    def checked(self) -> list[SubspaceRow]:
        return [r for r in self.rows if r.skipped is None]

    @property
    def violations(self) -> list[int]:
        return [r.index for r in self.checked if r.violated]

    @property
    def undecided(self) -> list[int]:
        return [r.index for r in self.checked if r.undecided]

    @property
    def skipped(self) -> list[tuple[int, str]]:
        return [(r.index, r.skipped) for r in self.rows if r.skipped is not None]

    @property
    def violation_density(self) -> float:
        n = len(self.checked)
        return len(self.violations) / n if n else 0.0


def check_point(
    forms: Sequence[LinearForm],
    P: ProjectivePoint,
    S: Sequence[Place],
    eps: Fraction,
    index: int = 0,
    precision: int = DEFAULT_PRECISION,
    max_precision: int = MAX_PRECISION,
) -> SubspaceRow:
    """Certified comparison of the two sides at one point."""
    row = SubspaceRow(index)
    bad = [k for k, L in enumerate(forms) if L is None]
    if bad:
        row.skipped = "form identically zero: " + ", ".join(map(str, bad))
        return row
    vanish = [k for k, L in enumerate(forms) if not L(P)]
    if vanish:
        row.skipped = "point lies on form: " + ", ".join(map(str, vanish))
        return row
    field = field_of(list(P.coords) + [c for L in forms for c in L.coeffs] + _field_tags(S))
    subsets = independent_subsets(forms, P.dimension + 1)
    factor = P.dimension + 1 + eps

    def sides(prec: int) -> tuple[LogValue, LogValue]:
        lhs = LogValue.zero(prec)
        for v in S:
            lhs = lhs + best_general_position_sum(forms, P, v, prec, subsets)
        rhs = height_point(P, prec, field) * factor
        return lhs, rhs

    prec = precision
    while True:
        lhs, rhs = sides(prec)
        diff = lhs - rhs
        if diff.is_exact_zero():
            s = -1
        else:
            s = diff.compare(0)
        if s or prec >= max_precision:
            break
        prec = min(2 * prec, max_precision)
    row.lhs, row.rhs, row.precision = lhs, rhs, prec
    row.undecided = s == 0
    row.violated = None if s == 0 else s > 0
    hP = float(height_point(P, 64, field))
    row.height_ratios = [
        float(height_form(L, 64, field)) / hP if hP else float("inf") for L in forms
    ]
    return row


def _field_tags(S: Sequence[Place]) -> list[FieldElement]:
    ds = {v.d for v in S if v.d is not None}
    return [FieldElement(0, 1, d) for d in ds]


def subspace_check(
    family,
    points,
    S: Iterable[Place],
    eps,
    indices: Iterable[int] | None = None,
    precision: int = DEFAULT_PRECISION,
    max_precision: int = MAX_PRECISION,
    mapper: Callable = map,
) -> SubspaceReport:
    """Run :func:`check_point` over indices.

    ``family`` is a :class:`HyperplaneFamily` or a fixed list of forms;
    ``points`` is a :class:`PointFamily` or a sequence of points (indexed
    from 0 unless ``indices`` is given).
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ConfigurationError("eps must be positive")
    S = list(S)
    if isinstance(points, PointFamily):
        if indices is None:
            raise ValueError("a point family needs explicit indices")
        idx = list(indices)
    else:
        points = [as_point(P) for P in points]
        idx = list(indices) if indices is not None else list(range(len(points)))
    d = None
    for v in S:
        d = v.d if v.d is not None else d
    _check_s(S, Field(d))
    jobs = [(family, points, S, eps, n, precision, max_precision) for n in idx]
    rows = list(mapper(_check_index, jobs))
    return SubspaceReport(rows, eps)


def _check_index(job) -> SubspaceRow:
    family, points, S, eps, n, precision, max_precision = job
    if isinstance(points, PointFamily):
        P = points.at(n)
    else:
        P = points[n]
    forms = family.at(n) if isinstance(family, HyperplaneFamily) else list(family)
    return check_point(forms, P, S, eps, n, precision, max_precision)
