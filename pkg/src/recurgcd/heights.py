"""Heights of numbers, points and polynomials; Weil functions; logarithmic gcd.

All sums run over places with the multiplicity-one normalization of
:mod:`recurgcd.exactfield`.  Finite contributions are computed through ideal
norms (lattice covolumes), archimedean ones through certified intervals.
Over Q heights are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DomainError
from .exactfield import (
    Field,
    FieldElement,
    Place,
    abs_cmp_one,
    abs_compare,
    field_of,
    gcd_ideal_norm,
    ideal_norm,
    log_abs,
    ord_at,
    relevant_places,
)
from .logvalue import DEFAULT_PRECISION, LogValue, log_minus, total


def _coerce_all(xs: Iterable) -> tuple[FieldElement, ...]:
    return tuple(FieldElement.coerce(x) for x in xs)


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """``[x_0 : ... : x_n]`` with at least one nonzero coordinate."""

    coords: tuple[FieldElement, ...]

    def __init__(self, coords: Sequence):
        xs = _coerce_all(coords)
        if not xs:
            raise DomainError("projective point needs at least one coordinate")
        if not any(xs):
            raise DomainError("all coordinates of a projective point are zero")
        field_of(xs)
        object.__setattr__(self, "coords", xs)

    @property
    def dimension(self) -> int:
        return len(self.coords) - 1

    @property
    def field(self) -> Field:
        return field_of(self.coords)

    def normalized(self) -> tuple[FieldElement, ...]:
        """Coordinates divided by the first nonzero one."""
        pivot = next(x for x in self.coords if x)
        inv = pivot.inverse()
        return tuple(x * inv for x in self.coords)

    def scaled(self, c) -> "ProjectivePoint":
        c = FieldElement.coerce(c)
        if not c:
            raise DomainError("scaling by zero")
        return ProjectivePoint([x * c for x in self.coords])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectivePoint) or len(other.coords) != len(self.coords):
            return NotImplemented
        xs, ys = self.coords, other.coords
        return all(
            xs[i] * ys[j] == xs[j] * ys[i]
            for i in range(len(xs))
            for j in range(i + 1, len(xs))
        ) and all(bool(x) == bool(y) for x, y in zip(xs, ys))

    def __hash__(self):
        return hash(self.normalized())

    def __str__(self) -> str:
        return "[" + " : ".join(map(str, self.coords)) + "]"


@dataclass(frozen=True, eq=False)
class LinearForm:
    """``a_0 x_0 + ... + a_n x_n`` with not all ``a_i`` zero."""

    coeffs: tuple[FieldElement, ...]

    def __init__(self, coeffs: Sequence):
        a = _coerce_all(coeffs)
        if not any(a):
            raise DomainError("linear form is identically zero")
        field_of(a)
        object.__setattr__(self, "coeffs", a)

    @property
    def dimension(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, P: ProjectivePoint) -> FieldElement:
        if len(P.coords) != len(self.coeffs):
            raise ValueError("form and point have different dimensions")
        return sum((a * x for a, x in zip(self.coeffs, P.coords)), FieldElement(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self) -> str:
        parts = [f"{a}*x{i}" for i, a in enumerate(self.coeffs) if a]
        return " + ".join(parts)


def as_point(P) -> ProjectivePoint:
    return P if isinstance(P, ProjectivePoint) else ProjectivePoint(P)


def max_at(xs: Sequence[FieldElement], v: Place) -> FieldElement:
    """Element of largest ``|x|_v`` among the nonzero ``xs`` (exact comparison)."""
    best = None
    for x in xs:
        if not x:
            continue
        if best is None or abs_compare(x, best, v) > 0:
            best = x
    if best is None:
        raise DomainError("all values are zero")
    return best


def _primitive_integer_vector(xs: Sequence[FieldElement]) -> list[int]:
    fr = [x.a for x in xs]
    den = lcm(*(q.denominator for q in fr))
    ints = [int(q * den) for q in fr]
    g = reduce(gcd, ints)
    return [k // g for k in ints]


def _height_of_values(
    xs: Sequence[FieldElement], precision: int, field: Field | None = None
) -> LogValue:
    """``sum_v log max_i |x_i|_v`` for values not all zero.

    The sum runs over the places of ``field`` (default: the smallest field
    holding the values); heights grow with the field degree.
    """
    nonzero = [x for x in xs if x]
    if not nonzero:
        raise DomainError("height of the zero vector")
    field = field_of(nonzero) if field is None else Field(field_of([*nonzero, *_tag(field)]).d)
    if field.is_rational:
        ints = _primitive_integer_vector(nonzero)
        return LogValue.log_of(max(abs(k) for k in ints), precision)
    result = LogValue.log_of(1 / ideal_norm(nonzero, field.d), precision)
    for v in field.archimedean_places():
        result = result + log_abs(max_at(nonzero, v), v, precision)
    return result


def _tag(field: Field) -> list[FieldElement]:
    return [] if field.d is None else [FieldElement(0, 1, field.d)]


def height_point(P, precision: int = DEFAULT_PRECISION, field: Field | None = None) -> LogValue:
    """Projective height ``h([x_0 : ... : x_n])``.

    Coordinates are first divided by the first nonzero one, so scaling the
    point leaves the result unchanged exactly.
    """
    return _height_of_values(as_point(P).normalized(), precision, field)


def height_scalar(x, precision: int = DEFAULT_PRECISION, field: Field | None = None) -> LogValue:
    """``h(x) = h([1 : x])``; zero is rejected."""
    x = FieldElement.coerce(x)
    if not x:
        raise DomainError("the height of 0 is not defined here")
    return _height_of_values([FieldElement(1, 0, x.d), x], precision, field)


def height_polynomial(f, precision: int = DEFAULT_PRECISION, field: Field | None = None) -> LogValue:
    """Height of the coefficient vector of a nonzero polynomial."""
    coeffs = f.coefficients() if hasattr(f, "coefficients") else list(f)
    if not coeffs:
        raise DomainError("height of the zero polynomial")
    return _height_of_values(list(coeffs), precision, field)


def height_form(L: LinearForm, precision: int = DEFAULT_PRECISION, field: Field | None = None) -> LogValue:
    return _height_of_values(list(L.coeffs), precision, field)


def weil(L: LinearForm, P, v: Place, precision: int = DEFAULT_PRECISION) -> LogValue:
    """``log(||P||_v * ||L||_v / |L(P)|_v)`` with max norms on both sides."""
    P = as_point(P)
    value = L(P)
    if not value:
        raise DomainError(f"point {P} lies on the hyperplane {L}")
    xmax = max_at(P.coords, v)
    amax = max_at(L.coeffs, v)
    if v.kind == "finite":
        e = ord_at(value, v) - ord_at(xmax, v) - ord_at(amax, v)
        return LogValue({v.p: Fraction(v.residue_degree * e)}, 0, 0, precision)
    return log_abs(xmax * amax / value, v, precision)


def weil_lower_bound(n: int, v: Place, precision: int = DEFAULT_PRECISION) -> LogValue:
    """``-N_v log(n + 1)``, the triangle-inequality floor of a Weil function on P^n."""
    return LogValue.log_of(n + 1, precision) * (-v.local_exponent)


def weil_places(L: LinearForm, P) -> frozenset[Place]:
    """Places where some Weil function of ``L`` at ``P`` may be nonzero."""
    P = as_point(P)
    values = [x for x in P.coords if x] + [a for a in L.coeffs if a] + [L(P)]
    return relevant_places(values, field_of(values))


def weil_global_identity_check(L: LinearForm, P, precision: int = DEFAULT_PRECISION) -> LogValue:
    """``sum_v lambda_v(P) - h(P) - h(L)``, a certified interval around 0."""
    P = as_point(P)
    field = field_of(P.coords + L.coeffs)
    lam = total((weil(L, P, v, precision) for v in weil_places(L, P)), precision)
    h = height_point(P, precision, field) + height_form(L, precision, field)
    return (lam - h).collapse()


def log_gcd(a, b, precision: int = DEFAULT_PRECISION) -> LogValue:
    """``-sum_v log^- max(|a|_v, |b|_v)`` for nonzero ``a, b``.

    The finite places contribute the log of the norm of ``(aO + bO) ∩ O``;
    an archimedean place contributes only when both ``|a|_v, |b|_v < 1``.
    """
    a = FieldElement.coerce(a)
    b = FieldElement.coerce(b)
    if not a or not b:
        raise DomainError("log gcd with a zero argument")
    field = field_of([a, b])
    result = LogValue.log_of(gcd_ideal_norm(a, b), precision)
    for v in field.archimedean_places():
        m = max_at([a, b], v)
        if abs_cmp_one(m, v) < 0:
            result = result - log_abs(m, v, precision)
    return result


def log_gcd_breakdown(a, b, precision: int = DEFAULT_PRECISION) -> dict[Place, LogValue]:
    """Per-place terms ``-log^- max(|a|_v, |b|_v)``, nonzero ones only.

    Uses integer factorization through :func:`relevant_places`; it is the
    slow independent route used to cross-check :func:`log_gcd`.
    """
    a = FieldElement.coerce(a)
    b = FieldElement.coerce(b)
    if not a or not b:
        raise DomainError("log gcd with a zero argument")
    field = field_of([a, b])
    out = {}
    for v in sorted(relevant_places([a, b], field)):
        term = -log_minus(log_abs(max_at([a, b], v), v, precision))
        if not term.is_exact_zero():
            out[v] = term
    return out
