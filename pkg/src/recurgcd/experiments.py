"""Sweeps over indices: log gcd of recurrence values, pair grids, self-test.

Each row function is a plain top-level function so sweeps can run in a
process pool; results come back in index order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .exactfield import FieldElement, product_formula_residual
from .heights import log_gcd
from .logvalue import DEFAULT_PRECISION, MAX_PRECISION, LogValue, format_down, format_nearest, format_up
from .recurrence import Recurrence, eval_rec

UNDECIDED = "undecided"


def certified_sign(
    compute: Callable[[int], LogValue],
    threshold: Fraction,
    precision: int = DEFAULT_PRECISION,
    max_precision: int = MAX_PRECISION,
) -> tuple[int | None, LogValue, int]:
    """Sign of ``value - threshold`` with precision doubling.

    Returns ``(sign, value, precision)``.  A zero sign is only reported when
    it is exact (threshold 0 and a value known to be 0); ``None`` means the
    interval still straddles the threshold at ``max_precision``.
    """
    prec = precision
    while True:
        value = compute(prec)
        if threshold == 0:
            s = value.exact_sign()
            if s is not None:
                return s, value, prec
        c = value.compare(threshold)
        if c:
            return c, value, prec
        if prec >= max_precision:
            return None, value, prec
        prec = min(2 * prec, max_precision)


@dataclass
class GcdRow:
    """One evaluation of ``log gcd`` against a rational threshold."""

    n: int
    value: LogValue | None
    threshold: Fraction
    sign: int | None
    skipped: str | None = None
    m: int | None = None

    @property
    def undecided(self) -> bool:
        return self.skipped is None and self.sign is None

    @property
    def below(self) -> bool:
        return self.sign is not None and self.sign < 0

    @property
    def exceeds(self) -> bool:
        return self.sign is not None and self.sign > 0

    def flag(self, positive: bool) -> str:
        if self.sign is None:
            return UNDECIDED
        return str(int(self.exceeds if positive else self.below))


def loggcd_row(job) -> GcdRow:
    """``log gcd(F(n), G(n))`` against ``eps * n``."""
    F, G, n, eps, precision, max_precision = job
    threshold = eps * n
    a, b = eval_rec(F, n), eval_rec(G, n)
    zero = [name for name, x in (("F", a), ("G", b)) if not x]
    if zero:
        return GcdRow(n, None, threshold, None, f"{' and '.join(zero)} vanish at n={n}")
    sign, value, _ = certified_sign(lambda p: log_gcd(a, b, p), threshold, precision, max_precision)
    return GcdRow(n, value, threshold, sign)


def loggcd_sweep(
    F: Recurrence,
    G: Recurrence,
    eps,
    indices: Iterable[int],
    precision: int = DEFAULT_PRECISION,
    max_precision: int = MAX_PRECISION,
    mapper: Callable = map,
) -> list[GcdRow]:
    eps = Fraction(eps)
    jobs = [(F, G, n, eps, precision, max_precision) for n in indices]
    return list(mapper(loggcd_row, jobs))


def pair_row(job) -> GcdRow:
    """``log gcd(F(m), G(n))`` against ``eps * max(m, n)``."""
    F, G, m, n, eps, precision, max_precision = job
    threshold = eps * max(m, n)
    a, b = eval_rec(F, m), eval_rec(G, n)
    zero = [label for label, x in ((f"F({m})", a), (f"G({n})", b)) if not x]
    if zero:
        return GcdRow(n, None, threshold, None, " and ".join(zero) + " vanish", m)
    sign, value, _ = certified_sign(lambda p: log_gcd(a, b, p), threshold, precision, max_precision)
    return GcdRow(n, value, threshold, sign, None, m)


def pair_sweep(
    F: Recurrence,
    G: Recurrence,
    eps,
    ms: Iterable[int],
    ns: Iterable[int],
    precision: int = DEFAULT_PRECISION,
    max_precision: int = MAX_PRECISION,
    mapper: Callable = map,
) -> list[GcdRow]:
    eps = Fraction(eps)
    ns = list(ns)
    jobs = [(F, G, m, n, eps, precision, max_precision) for m in ms for n in ns]
    return list(mapper(pair_row, jobs))


def interval_fields(value: LogValue) -> tuple[str, str]:
    lo, hi = value.enclosure()
    return format_down(lo), format_up(hi)


def nearest(value: LogValue) -> str:
    return format_nearest(value.midpoint())


# -- self-test -----------------------------------------------------------------

SELFTEST_DS = (-7, -5, -3, 2, 3, 5)


def random_rational(rng: random.Random, bound: int = 10**6) -> FieldElement:
    num = rng.randint(1, bound) * rng.choice((1, -1))
    return FieldElement(Fraction(num, rng.randint(1, bound)))


def random_quadratic(rng: random.Random, d: int, bound: int = 10**3) -> FieldElement:
    while True:
        a = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        b = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if a or b:
            return FieldElement(a, b, d)


@dataclass
class SelftestResult:
    samples: int
    failures: list[str]
    max_radius: Fraction

    @property
    def ok(self) -> bool:
        return not self.failures


def product_formula_ok(x: FieldElement, precision: int, radius_bound: Fraction) -> tuple[bool, Fraction]:
    res = product_formula_residual(x, precision)
    r = res.radius
    return (not res.finite_part and res.contains(0) and r < radius_bound), r


def selftest(
    rational_samples: int = 10000,
    quadratic_samples: int = 1000,
    seed: int = 0,
    precision: int = DEFAULT_PRECISION,
    radius_bound: Fraction = Fraction(1, 10**30),
) -> SelftestResult:
    """Product formula on random rationals and random quadratic elements."""
    rng = random.Random(seed)
    xs = [random_rational(rng) for _ in range(rational_samples)]
    xs += [random_quadratic(rng, SELFTEST_DS[k % len(SELFTEST_DS)]) for k in range(quadratic_samples)]
    failures = []
    worst = Fraction(0)
    for x in xs:
        ok, r = product_formula_ok(x, precision, radius_bound)
        worst = max(worst, r)
        if not ok:
            failures.append(str(x))
    return SelftestResult(len(xs), failures, worst)
