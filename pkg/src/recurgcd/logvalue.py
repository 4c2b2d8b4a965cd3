"""Certified logarithmic quantities.

A :class:`LogValue` is an exact part ``sum c_b * log b`` (rational ``c_b``,
pairwise coprime integer bases ``b > 1``) plus a rational interval that
encloses everything that is not known in closed form, typically the
archimedean logarithms.  Sums and negations stay exact on the exact part
and add radii on the interval part.

Logarithms of rationals are enclosed with MPFR (through gmpy2) using
directed rounding, so every interval produced here is a rigorous bound.
"""

from __future__ import annotations

from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable, Mapping

import gmpy2

from .errors import DomainError, UndecidableError

DEFAULT_PRECISION = 256
MAX_PRECISION = 4096


def _as_fraction(m) -> Fraction:
    num, den = m.as_integer_ratio()
    return Fraction(int(num), int(den))


def log_bounds(x, precision: int = DEFAULT_PRECISION) -> tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo <= log(x) <= hi`` for rational ``x > 0``."""
    x = Fraction(x)
    if x <= 0:
        raise DomainError(f"log of non-positive value {x}")
    if x == 1:
        return Fraction(0), Fraction(0)
    if x.denominator == 1:
        return _log_int_bounds(x.numerator, precision)
    q = gmpy2.mpq(x.numerator, x.denominator)
    with gmpy2.context(precision=precision, round=gmpy2.RoundDown):
        lo = gmpy2.log(gmpy2.mpfr(q))
    with gmpy2.context(precision=precision, round=gmpy2.RoundUp):
        hi = gmpy2.log(gmpy2.mpfr(q))
    return _as_fraction(lo), _as_fraction(hi)


@lru_cache(maxsize=8192)
def _log_int_bounds(n: int, precision: int) -> tuple[Fraction, Fraction]:
    z = gmpy2.mpz(n)
    with gmpy2.context(precision=precision, round=gmpy2.RoundDown):
        lo = gmpy2.log(gmpy2.mpfr(z))
    with gmpy2.context(precision=precision, round=gmpy2.RoundUp):
        hi = gmpy2.log(gmpy2.mpfr(z))
    return _as_fraction(lo), _as_fraction(hi)


def coprime_base(numbers: Iterable[int]) -> list[int]:
    """Pairwise coprime integers > 1 that multiplicatively generate ``numbers``.

    Works by gcd splitting only, so no integer is ever factored.
    """
    base: list[int] = []
    stack = [abs(n) for n in numbers]
    while stack:
        x = stack.pop()
        if x <= 1:
            continue
        for i, b in enumerate(base):
            g = gcd(x, b)
            if g > 1:
                base.pop(i)
                stack.extend((x // g, b // g, g))
                break
        else:
            base.append(x)
    return sorted(base)


def _refine(terms: Mapping[int, Fraction]) -> dict[int, Fraction]:
    keys = [k for k, c in terms.items() if c]
    if not keys:
        return {}
    if len(keys) == 1:
        return {keys[0]: Fraction(terms[keys[0]])}
    base = coprime_base(keys)
    if sorted(keys) == base:
        return {k: Fraction(terms[k]) for k in base}
    out: dict[int, Fraction] = {}
    for k in keys:
        c = Fraction(terms[k])
        rest = k
        for b in base:
            e = 0
            while rest % b == 0:
                rest //= b
                e += 1
            if e:
                out[b] = out.get(b, Fraction(0)) + e * c
        assert rest == 1, "coprime base does not generate its input"
    return {b: c for b, c in sorted(out.items()) if c}


class LogValue:
    """Exact ``sum c_b log b`` plus a certified rational interval ``[lo, hi]``."""

    __slots__ = ("finite_part", "lo", "hi", "precision")

    def __init__(
        self,
        finite_part: Mapping[int, Fraction] | None = None,
        lo: Fraction | int = 0,
        hi: Fraction | int | None = None,
        precision: int = DEFAULT_PRECISION,
    ):
        self.finite_part = _refine(finite_part) if finite_part else {}
        self.lo = Fraction(lo)
        self.hi = Fraction(lo if hi is None else hi)
        if self.lo > self.hi:
            raise ValueError("empty interval")
        self.precision = precision

    @classmethod
    def zero(cls, precision: int = DEFAULT_PRECISION) -> "LogValue":
        return cls(None, 0, 0, precision)

    @classmethod
    def log_of(cls, x, precision: int = DEFAULT_PRECISION) -> "LogValue":
        """``log x`` for a positive rational: exact when ``x`` is an integer ratio."""
        x = Fraction(x)
        if x <= 0:
            raise DomainError(f"log of non-positive value {x}")
        terms: dict[int, Fraction] = {}
        if x.numerator > 1:
            terms[x.numerator] = Fraction(1)
        if x.denominator > 1:
            terms[x.denominator] = Fraction(-1)
        return cls(terms, 0, 0, precision)

    @classmethod
    def interval_log(cls, x, precision: int = DEFAULT_PRECISION) -> "LogValue":
        """``log x`` enclosed in an interval (no exact part)."""
        lo, hi = log_bounds(x, precision)
        return cls(None, lo, hi, precision)

    # -- structure ---------------------------------------------------------
    @property
    def arch_part(self) -> tuple[Fraction, Fraction]:
        return self.lo, self.hi

    @property
    def has_interval(self) -> bool:
        return self.lo != 0 or self.hi != 0

    def is_exact_zero(self) -> bool:
        return not self.finite_part and self.lo == 0 and self.hi == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogValue):
            return NotImplemented
        return (
            self.finite_part == other.finite_part
            and self.lo == other.lo
            and self.hi == other.hi
        )

    def __hash__(self):
        return hash((tuple(self.finite_part.items()), self.lo, self.hi))

    def finite_equals(self, other: "LogValue") -> bool:
        return not (self - other).finite_part

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other: "LogValue") -> "LogValue":
        if not isinstance(other, LogValue):
            return NotImplemented
        terms = dict(self.finite_part)
        for k, c in other.finite_part.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return LogValue(
            terms,
            self.lo + other.lo,
            self.hi + other.hi,
            min(self.precision, other.precision),
        )

    def __neg__(self) -> "LogValue":
        return LogValue(
            {k: -c for k, c in self.finite_part.items()}, -self.hi, -self.lo, self.precision
        )

    def __sub__(self, other: "LogValue") -> "LogValue":
        return self + (-other)

    def __mul__(self, c) -> "LogValue":
        c = Fraction(c)
        lo, hi = self.lo * c, self.hi * c
        if c < 0:
            lo, hi = hi, lo
        return LogValue(
            {k: v * c for k, v in self.finite_part.items()}, lo, hi, self.precision
        )

    __rmul__ = __mul__

    # -- numerics ----------------------------------------------------------
    def enclosure(self, precision: int | None = None) -> tuple[Fraction, Fraction]:
        prec = precision or self.precision
        lo, hi = self.lo, self.hi
        for b, c in self.finite_part.items():
            blo, bhi = _log_int_bounds(b, prec)
            if c > 0:
                lo += c * blo
                hi += c * bhi
            else:
                lo += c * bhi
                hi += c * blo
        return lo, hi

    def collapse(self) -> "LogValue":
        lo, hi = self.enclosure()
        return LogValue(None, lo, hi, self.precision)

    @property
    def radius(self) -> Fraction:
        lo, hi = self.enclosure()
        return (hi - lo) / 2

    def midpoint(self) -> Fraction:
        lo, hi = self.enclosure()
        return (lo + hi) / 2

    def __float__(self) -> float:
        return float(self.midpoint())

    def contains(self, x) -> bool:
        lo, hi = self.enclosure()
        return lo <= Fraction(x) <= hi

    def exact_sign(self) -> int | None:
        """Sign decided without numerics, or ``None`` if numerics are needed."""
        if self.has_interval:
            return None
        if not self.finite_part:
            return 0
        signs = {c > 0 for c in self.finite_part.values()}
        if len(signs) == 1:
            return 1 if signs.pop() else -1
        return None

    def compare(self, threshold=0) -> int:
        """-1 if certainly below ``threshold``, 1 if certainly above, 0 if undecided."""
        t = Fraction(threshold)
        if t == 0:
            s = self.exact_sign()
            if s is not None and s != 0:
                return s
        lo, hi = self.enclosure()
        if hi < t:
            return -1
        if lo > t:
            return 1
        return 0

    def __repr__(self) -> str:
        return f"LogValue({self})"

    def __str__(self) -> str:
        parts = []
        for b, c in self.finite_part.items():
            parts.append(f"{'-' if c < 0 else '+'} {abs(c)}·log {b}")
        text = " ".join(parts).lstrip("+ ")
        interval = f"[{format_down(self.lo)}, {format_up(self.hi)}]"
        if not text:
            return interval
        return f"{text} + {interval}"


def log_minus(x: LogValue) -> LogValue:
    """``min(0, x)`` as an enclosure that stays exact whenever the sign is known."""
    s = x.compare(0)
    if s < 0:
        return x
    if s > 0 or x.is_exact_zero():
        return LogValue.zero(x.precision)
    lo, hi = x.enclosure()
    return LogValue(None, min(lo, 0), min(hi, 0), x.precision)


def log_plus(x: LogValue) -> LogValue:
    """``max(0, x)``."""
    return x - log_minus(x)


def maximum(values: Iterable[LogValue]) -> LogValue:
    """Enclosure of the maximum; returns one argument unchanged when it dominates."""
    values = list(values)
    if not values:
        raise ValueError("maximum of empty sequence")
    best = values[0]
    for v in values[1:]:
        diff = v - best
        s = diff.compare(0)
        if s > 0:
            best = v
        elif s < 0 or diff.is_exact_zero():
            continue
        else:
            blo, bhi = best.enclosure()
            vlo, vhi = v.enclosure()
            best = LogValue(
                None, max(blo, vlo), max(bhi, vhi), min(best.precision, v.precision)
            )
    return best


def total(values: Iterable[LogValue], precision: int = DEFAULT_PRECISION) -> LogValue:
    acc = LogValue.zero(precision)
    for v in values:
        acc = acc + v
    return acc


def certified_compare(
    compute: Callable[[int], LogValue],
    threshold=0,
    precision: int = DEFAULT_PRECISION,
    max_precision: int = MAX_PRECISION,
    what: str = "comparison",
) -> int:
    """Compare ``compute(prec)`` with ``threshold``, doubling ``prec`` until decided.

    Returns -1 or 1; raises :class:`UndecidableError` past ``max_precision``.
    """
    prec = precision
    while True:
        s = compute(prec).compare(threshold)
        if s:
            return s
        if prec >= max_precision:
            raise UndecidableError(what, prec)
        prec = min(2 * prec, max_precision)


def _format(x: Fraction, rounding: str, digits: int) -> str:
    ctx = Context(prec=digits, rounding=rounding)
    d = ctx.divide(Decimal(x.numerator), Decimal(x.denominator))
    return format(d, "f") if abs(d) >= Decimal("1e-6") or d == 0 else str(d)


def format_down(x, digits: int = 25) -> str:
    return _format(Fraction(x), ROUND_FLOOR, digits)


def format_up(x, digits: int = 25) -> str:
    return _format(Fraction(x), ROUND_CEILING, digits)


def format_nearest(x, digits: int = 25) -> str:
    return _format(Fraction(x), "ROUND_HALF_EVEN", digits)
