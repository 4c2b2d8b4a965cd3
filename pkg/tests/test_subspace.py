from __future__ import annotations

from fractions import Fraction

import pytest

from recurgcd.errors import ConfigurationError, DomainError
from recurgcd.exactfield import Field
from recurgcd.heights import LinearForm, ProjectivePoint, height_scalar
from recurgcd.logvalue import LogValue
from recurgcd.subspace import (
    HyperplaneFamily,
    PointFamily,
    best_general_position_sum,
    check_point,
    independent_subsets,
    subspace_check,
)

Q = Field()
INF = Q.archimedean_places()[0]
TWO = Q.places_above(2)[0]


def L(*cs):
    return LinearForm(list(cs))


def P(*xs):
    return ProjectivePoint(list(xs))


def test_independent_subsets():
    subsets = independent_subsets([L(1, 0), L(0, 1), L(1, 1)], 2)
    assert () in subsets
    assert (0, 1, 2) not in subsets
    assert len(subsets) == 1 + 3 + 3
    dependent = independent_subsets([L(0, 1), L(0, 2)], 2)
    assert dependent == [(), (0,), (1,)]


def test_general_position_examples():
    assert best_general_position_sum([L(1, 0), L(0, 1)], P(1, 1), INF).is_exact_zero()
    value = best_general_position_sum([L(0, 1), L(0, 2)], P(1, 4), TWO)
    assert value.finite_equals(LogValue.log_of(4))


def test_single_form_at_s_unit():
    S = sorted(Q.places([2, 3]))
    u = Fraction(9, 16)
    total = LogValue.zero()
    for v in S:
        total = total + best_general_position_sum([L(0, 1)], P(1, u), v)
    assert (total - height_scalar(u)).contains(0)


def test_vanishing_form_reported():
    with pytest.raises(DomainError):
        best_general_position_sum([L(1, -1)], P(1, 1), INF)
    row = check_point([L(1, -1), L(1, 0)], P(3, 3), sorted(Q.places([2])), Fraction(1, 2))
    assert row.skipped and "0" in row.skipped


def test_skip_in_family():
    family = HyperplaneFamily(["x0 - x1", "x0"], 1)
    points = PointFamily(["n", "n"])
    rep = subspace_check(family, points, sorted(Q.places()), Fraction(1, 2), range(1, 4))
    assert [n for n, _ in rep.skipped] == [1, 2, 3]
    assert rep.checked == []


def test_eps_zero_rejected():
    with pytest.raises(ConfigurationError):
        subspace_check([L(1, 0)], [P(1, 2)], sorted(Q.places()), 0)


def test_s_without_archimedean_rejected():
    with pytest.raises(ConfigurationError):
        subspace_check([L(1, 0)], [P(1, 2)], [TWO], Fraction(1, 2))


def test_moving_form_coefficients():
    family = HyperplaneFamily(["x0 - n*x1"], 1)
    forms = family.at(3)
    assert forms[0].coeffs[1] == -3
    assert HyperplaneFamily(["(n - 2)*x1"], 1).at(2) == [None]


def test_three_forms_report():
    family = HyperplaneFamily(["x0", "x1", "x0 + x1"], 1)
    points = PointFamily(["1", "2^n"])
    rep = subspace_check(family, points, sorted(Q.places([2])), Fraction(1, 2), range(1, 21))
    assert rep.violations == [] and rep.undecided == []
    assert rep.violation_density == 0.0
    for row in rep.checked:
        assert len(row.csv_fields()) == 7


def test_moving_points_all_decided():
    family = HyperplaneFamily(["x0", "x1", "x0 - x1"], 1)
    points = PointFamily(["1", "2^n + 1"])
    S = sorted(Q.places([2]))
    rep = subspace_check(family, points, S, Fraction(1, 100), range(1, 8))
    assert rep.undecided == []
    assert len(rep.checked) == 7


def test_height_zero_point_violates():
    # at [1 : 1] the height is 0 while x0 + x1 = 2 is 2-adically small
    S = sorted(Q.places([2]))
    row = check_point([L(1, 0), L(0, 1), L(1, 1)], P(1, 1), S, Fraction(1, 2))
    assert row.violated is True and not row.undecided
    assert row.lhs.finite_equals(LogValue.log_of(2)) or (row.lhs - LogValue.log_of(2)).contains(0)
