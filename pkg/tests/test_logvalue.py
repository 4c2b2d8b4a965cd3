from __future__ import annotations

import math
from fractions import Fraction

import mpmath
from hypothesis import given, settings, strategies as st

from recurgcd.logvalue import LogValue, coprime_base, log_bounds, log_minus, log_plus, maximum


def test_log_bounds_bracket_reference():
    mpmath.mp.dps = 80
    for x in (2, 3, Fraction(7, 5), 10**20 + 1):
        lo, hi = log_bounds(x, 200)
        ref = Fraction(mpmath.nstr(mpmath.log(mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator), 70))
        assert lo - Fraction(1, 10**65) <= ref <= hi + Fraction(1, 10**65)
        assert hi - lo < Fraction(1, 2**190)


def test_coprime_base():
    base = coprime_base([12, 18])
    assert math.prod(base) > 1
    for i, a in enumerate(base):
        for b in base[i + 1:]:
            assert math.gcd(a, b) == 1
    assert set(coprime_base([6, 10])) == {2, 3, 5}


def test_exact_cancellation():
    v = LogValue.log_of(12) - LogValue.log_of(4) - LogValue.log_of(3)
    assert v.is_exact_zero()


def test_compare_and_sign():
    assert LogValue.log_of(2).compare(Fraction(69, 100)) == 1
    assert LogValue.log_of(2).compare(Fraction(70, 100)) == -1
    assert (LogValue.log_of(3) - LogValue.log_of(2)).exact_sign() is None
    assert LogValue.log_of(Fraction(1, 5)).exact_sign() == -1


def test_log_plus_minus():
    two = LogValue.log_of(2)
    assert log_plus(two) == two
    assert log_minus(two).is_exact_zero()
    assert log_minus(-two) == -two
    assert log_plus(-two).is_exact_zero()


def test_maximum_picks_largest():
    vals = [LogValue.log_of(k) for k in (3, 7, 5)]
    assert maximum(vals).finite_equals(LogValue.log_of(7))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10**12), st.integers(1, 10**12))
def test_log_of_product_is_sum(a, b):
    assert (LogValue.log_of(a * b) - LogValue.log_of(a) - LogValue.log_of(b)).is_exact_zero()


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=Fraction(1, 10**6), max_value=10**6))
def test_enclosure_contains_float_log(x):
    v = LogValue.log_of(x)
    lo, hi = v.enclosure()
    assert float(lo) - 1e-12 <= math.log(x) <= float(hi) + 1e-12
