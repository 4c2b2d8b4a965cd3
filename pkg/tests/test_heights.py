from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from recurgcd.errors import DomainError
from recurgcd.exactfield import Field, FieldElement
from recurgcd.heights import (
    LinearForm,
    ProjectivePoint,
    height_point,
    height_polynomial,
    height_scalar,
    log_gcd,
    log_gcd_breakdown,
    weil,
    weil_global_identity_check,
)
from recurgcd.logvalue import LogValue
from recurgcd.parsing import parse_polynomial

Q = Field()
INF = Q.archimedean_places()[0]
PHI = FieldElement(Fraction(1, 2), Fraction(1, 2), 5)


def P(*xs):
    return ProjectivePoint([FieldElement.coerce(x) for x in xs])


def L(*cs):
    return LinearForm([FieldElement.coerce(c) for c in cs])


def test_height_scalar_examples():
    assert height_scalar(2).finite_equals(LogValue.log_of(2))
    assert height_scalar(Fraction(3, 2)).finite_equals(LogValue.log_of(3))
    h = height_scalar(PHI)
    assert h.contains(Fraction(math.log((1 + math.sqrt(5)) / 2)).limit_denominator(10**12)) or abs(
        float(h) - math.log((1 + math.sqrt(5)) / 2)
    ) < 1e-14


def test_height_point_examples():
    assert height_point(P(1, 1)).is_exact_zero()
    assert height_point(P(1, Fraction(3, 2))).finite_equals(LogValue.log_of(3))
    assert height_point(P(2, 3)) == height_point(P(4, 6))


def test_height_point_all_zero():
    with pytest.raises(DomainError):
        P(0, 0)


def test_height_polynomial_examples():
    names = ["x1", "x2"]
    assert height_polynomial(parse_polynomial("x1 + x2", names)).is_exact_zero()
    assert height_polynomial(parse_polynomial("2*x1 + 3", names)).finite_equals(LogValue.log_of(3))
    assert height_polynomial(parse_polynomial("1/2*x1 + 1", names)).finite_equals(LogValue.log_of(2))


def test_log_gcd_examples():
    assert log_gcd(12, 18).finite_equals(LogValue.log_of(6))
    assert log_gcd(1, 1).is_exact_zero()
    assert log_gcd(2**4 - 1, 3**4 - 1).finite_equals(LogValue.log_of(5))


def test_log_gcd_zero_rejected():
    with pytest.raises(DomainError):
        log_gcd(0, 5)


def test_log_gcd_of_equal_powers():
    for n in range(1, 20):
        assert log_gcd(2**n, 2**n).finite_equals(LogValue.log_of(2) * n)


def test_weil_examples():
    assert weil(L(0, 1), P(1, 1), INF).is_exact_zero()
    assert (weil(L(1, 1), P(2, 1), INF) - LogValue.log_of(Fraction(2, 3))).contains(0)
    two = Q.places_above(2)[0]
    assert weil(L(0, 1), P(1, 4), two).finite_equals(LogValue.log_of(4))


def test_weil_vanishing_rejected():
    with pytest.raises(DomainError):
        weil(L(1, -1), P(1, 1), INF)


def test_weil_identity_examples():
    assert weil_global_identity_check(L(0, 1), P(1, Fraction(3, 2))).contains(0)
    assert weil_global_identity_check(L(1, 1), P(2, 1)).contains(0)
    r = weil_global_identity_check(L(1, 2), P(1, PHI))
    assert r.contains(0) and r.radius < Fraction(1, 10**40)


def test_log_gcd_quadratic_breakdown_matches():
    rng = random.Random(7)
    for d in (-7, -5, 2, 5, 17):
        for _ in range(10):
            a = FieldElement(rng.randint(-30, 30), rng.randint(-30, 30), d)
            b = FieldElement(rng.randint(-30, 30), rng.randint(-30, 30), d)
            if not a or not b:
                continue
            total = LogValue.zero()
            for value in log_gcd_breakdown(a, b).values():
                total = total + value
            diff = total - log_gcd(a, b)
            assert diff.contains(0)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10**12), st.integers(1, 10**12))
def test_log_gcd_integer_oracle(a, b):
    assert log_gcd(a, b).finite_equals(LogValue.log_of(math.gcd(a, b)))


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=-10**4, max_value=10**4).filter(bool))
def test_height_of_inverse_and_integer_formula(x):
    h = height_scalar(x)
    assert (h - height_scalar(1 / x)).contains(0)
    expected = LogValue.log_of(max(abs(x.numerator), x.denominator))
    assert h.finite_equals(expected)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-100, 100), min_size=2, max_size=4).filter(any), st.integers(1, 50))
def test_height_scaling_invariance(coords, c):
    assert height_point(P(*coords)) == height_point(P(*[c * x for x in coords]))


@settings(max_examples=60, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_weil_identity_property(a, b, x, y):
    if not (a or b) or not (x or y) or a * x + b * y == 0:
        return
    assert weil_global_identity_check(L(a, b), P(x, y), 128).contains(0)
