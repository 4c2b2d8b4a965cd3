from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from recurgcd.errors import (
    ConfigurationError,
    TorsionError,
    UnsupportedRelationError,
    ZeroRecurrenceError,
)
from recurgcd.exactfield import Field, FieldElement
from recurgcd.multipoly import coprime
from recurgcd.parsing import parse_polynomial
from recurgcd.recurrence import (
    Recurrence,
    common_lattice,
    coprime_in_R_gamma,
    eval_rec,
    exceptional_n,
    group_structure,
    is_nondegenerate,
    laurent_names,
    root_hypothesis_failures,
    s_integral_ratio,
    skolem_report,
    skolem_zeros,
    split_subsequence,
    to_laurent,
)

from fixtures import PHI, PSI, fib, fibonacci, lucas, rec

Q = Field()
phi = FieldElement(Fraction(1, 2), Fraction(1, 2), 5)
psi = phi.conjugate()


def test_eval_examples():
    assert eval_rec(rec("1 ; 2\n-1 ; 1"), 4) == 15
    assert eval_rec(fibonacci(), 10) == 55
    assert eval_rec(rec("t ; 3"), 2) == 18


def test_fibonacci_against_iteration():
    F = fibonacci()
    assert all(eval_rec(F, n) == fib(n) for n in range(60))


def test_equal_roots_merge_and_cancel():
    F = rec("1 ; 2\n2 ; 2")
    assert F.roots == [2]
    with pytest.raises(ZeroRecurrenceError):
        rec("1 ; 2\n-1 ; 2")


def test_nondegeneracy():
    assert is_nondegenerate(rec("1 ; 2\n1 ; 3"))[0]
    ok, witness = is_nondegenerate(rec("1 ; 2\n1 ; -2"))
    assert not ok and witness[2] == -1 and witness[3] == 2
    assert is_nondegenerate(fibonacci())[0]


def test_lattice_examples():
    L = group_structure([2, 3])
    assert L.rank == 2 and L.q == 1
    assert sorted(L.exponents) == [(0, 1), (1, 0)]
    L = group_structure([4, 8])
    assert L.generators == [2] and L.exponents == [(2,), (3,)] and L.q == 1
    L = group_structure([2, -2])
    assert L.generators == [2] and L.q == 2 and L.torsion == [1, -1]
    L = group_structure([-2])
    assert L.q == 1


def test_quadratic_lattice_needs_unit():
    with pytest.raises(UnsupportedRelationError):
        group_structure([phi, psi])
    L = group_structure([phi, psi], unit=phi)
    assert L.generators == [phi] and L.q == 2
    with pytest.raises(ConfigurationError):
        group_structure([phi, psi], unit=FieldElement(3, 1, 5))
    # 2 + sqrt(5) = phi^3 is a unit, but phi is not a power of it
    with pytest.raises(UnsupportedRelationError):
        group_structure([phi, psi], unit=FieldElement(2, 1, 5))


def test_laurent_examples():
    L = group_structure([2, 1])
    f = to_laurent(rec("1 ; 2\n-1 ; 1"), L)
    assert f.poly == parse_polynomial("x1 - 1", laurent_names(1)) and f.shift == (0,)
    f = to_laurent(rec("2 ; 2"), group_structure([2]))
    assert f.shift == (1,) and f.poly == parse_polynomial("2", laurent_names(1))
    L = group_structure([6, 2])
    f = to_laurent(rec("t ; 6\n1 ; 2"), L)
    assert all(f.eval(n) == eval_rec(rec("t ; 6\n1 ; 2"), n) for n in range(20))
    assert f.poly.monomial_content() == (0,) * 3


def test_laurent_rejects_torsion():
    L = group_structure([2, -2])
    with pytest.raises(TorsionError):
        to_laurent(rec("1 ; -2\n1 ; 2"), L)


def test_coprime_examples():
    assert coprime_in_R_gamma(rec("1 ; 2\n-1 ; 1"), rec("1 ; 3\n-1 ; 1"))
    assert not coprime_in_R_gamma(rec("1 ; 4\n-1 ; 1"), rec("1 ; 2\n-1 ; 1"))
    assert coprime_in_R_gamma(rec("t ; 2\n1 ; 1"), rec("1 ; 2\nt ; 1"))


def test_exceptional_examples():
    names = laurent_names(1)
    for f, g, expected in (("x1 - t", "x1 - 2", {2}), ("x1 - 1", "x1 + 1", set()), ("x1 - t", "x1 - t^2", {0, 1})):
        rep = exceptional_n(parse_polynomial(f, names), parse_polynomial(g, names), 50)
        assert rep.exceptional == expected
        assert rep.agrees and rep.candidates_cover


def test_exceptional_rank_two():
    names = laurent_names(2)
    f = parse_polynomial("x1 - t*x2", names)
    g = parse_polynomial("x1 - 2*x2", names)
    rep = exceptional_n(f, g, 30)
    assert rep.exceptional == {2}
    assert rep.agrees


def test_split_examples():
    S = split_subsequence(rec("1 ; -2"), 2, 0)
    assert S.terms[0][1] == 4 and S.terms[0][0] == parse_polynomial("1", ["t"])
    with pytest.raises(ZeroRecurrenceError):
        split_subsequence(rec("1 ; -2\n1 ; 2"), 2, 1)
    S = split_subsequence(fibonacci(), 2, 0)
    assert set(S.roots) == {phi**2, psi**2}
    assert eval_rec(S, 3) == 8


def test_torsion_split_makes_group_torsion_free():
    F, G = rec("1 ; -2\n1 ; 1"), rec("1 ; 2\n-1 ; 1")
    L = common_lattice(F, G)
    assert L.q == 2
    for l in range(2):
        Fl, Gl = split_subsequence(F, 2, l), split_subsequence(G, 2, l)
        assert set(Fl.roots) | set(Gl.roots) == {4, 1}
        assert common_lattice(Fl, Gl).q == 1


def test_skolem_examples():
    assert skolem_zeros(rec("1 ; 2\n-4 ; 1"), 100) == {2}
    assert skolem_zeros(rec("t - 2 ; 1"), 100) == {2}
    assert skolem_zeros(rec("1 ; 2\n-1 ; 1"), 100) == {0}
    rep = skolem_report(rec("1 ; 2\n1 ; -2"), 20)
    assert not rep.nondegenerate
    assert rep.zeros == set(range(1, 21, 2))


def test_s_integral_examples():
    S2 = Q.places([2])
    assert s_integral_ratio(rec("1 ; 3"), rec("1 ; 2"), S2, 40).integral == set(range(41))
    rep = s_integral_ratio(rec("1 ; 4\n-1 ; 1"), rec("1 ; 2\n-1 ; 1"), Q.places(), 50, 0)
    assert rep.denominator_zeros == {0}
    assert rep.integral == set(range(1, 51))
    assert s_integral_ratio(rec("1 ; 2"), rec("1 ; 2\n-1 ; 1"), S2, 200, 2).integral == set()


def test_root_hypothesis():
    assert root_hypothesis_failures(rec("1 ; 2\n-1 ; 1"), rec("1 ; 3\n-1 ; 1")) == []
    bad = root_hypothesis_failures(rec("1 ; 1/2"), rec("1 ; 1/3"))
    assert [str(v) for v in bad] == ["inf:1"]


def test_lucas_coprime_with_fibonacci_after_split():
    F, G = fibonacci(), lucas()
    L = common_lattice(F, G, unit=phi)
    assert L.q == 2
    for l in range(2):
        Fl, Gl = split_subsequence(F, 2, l), split_subsequence(G, 2, l)
        assert coprime_in_R_gamma(Fl, Gl, unit=phi)


roots = st.lists(st.sampled_from([2, 3, 5, 6, -2, -3, Fraction(1, 2), Fraction(3, 4), 1, -1]), min_size=1, max_size=4)


@settings(max_examples=80, deadline=None)
@given(roots, st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_lattice_reconstructs_roots(rs, _):
    L = group_structure(rs)
    for i, r in enumerate(L.roots):
        assert L.reconstruct(i) == r
        assert L.torsion[i] ** L.q == 1


@settings(max_examples=60, deadline=None)
@given(roots, st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.integers(1, 4), st.integers(0, 3))
def test_split_identity_property(rs, cs, q, l):
    l = l % q
    terms = [(c, r) for c, r in zip(cs, rs) if c]
    try:
        F = Recurrence(terms)
    except ZeroRecurrenceError:
        return
    try:
        S = split_subsequence(F, q, l)
    except ZeroRecurrenceError:
        assert all(not eval_rec(F, q * n + l) for n in range(15))
        return
    assert all(eval_rec(S, n) == eval_rec(F, q * n + l) for n in range(15))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, 6, Fraction(1, 2), 9]), min_size=1, max_size=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_laurent_round_trip_property(rs, cs):
    terms = [(c, r) for c, r in zip(cs, rs) if c]
    try:
        F = Recurrence(terms)
    except ZeroRecurrenceError:
        return
    form = to_laurent(F, group_structure(F.roots))
    assert all(form.eval(n) == eval_rec(F, n) for n in range(20))
