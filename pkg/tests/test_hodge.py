from math import factorial

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from kpcohft.series import reversion
from kpcohft.tau import build_tau, mv_tau_data
from kpcohft.hodge import (HodgeError, IntersectionTable, TableCoverageError, TripleHodgeParams,
                           X_inverse, class_expansion, intersection_number, inversion_check,
                           moebius_relation_check, mv_rhs, naive_hodge_G, naive_hodge_T,
                           naive_hodge_tau_route, odd_support, triple_hodge_T,
                           triple_hodge_finiteness, triple_hodge_pipeline, xdiff_check,
                           z_of_X_coefficients)

rat = st.fractions(min_value=-3, max_value=3, max_denominator=6).map(lambda f: mpq(f.numerator, f.denominator))
nonzero = rat.filter(bool)


def test_base_intersections():
    assert intersection_number(0, 3, (0, 0, 0)) == 1
    assert intersection_number(1, 1, (1,)) == mpq(1, 24)
    assert intersection_number(1, 1, (0,), (1,)) == mpq(1, 24)
    assert intersection_number(1, 2, (2, 0)) == mpq(1, 24)
    assert intersection_number(1, 2, (1, 1)) == mpq(1, 24)
    assert intersection_number(1, 2, (1, 0), (1,)) == mpq(1, 24)
    assert intersection_number(0, 4, (0, 0, 0, 0)) == 0


@given(st.lists(st.integers(0, 3), min_size=3, max_size=7))
def test_genus_zero_multinomial(ds):
    n = len(ds)
    if sum(ds) != n - 3:
        return
    expected = mpq(factorial(n - 3))
    for d in ds:
        expected /= factorial(d)
    assert intersection_number(0, n, ds) == expected


@given(st.integers(1, 6))
def test_genus_one_dilaton(n):
    assert intersection_number(1, n, (1,) * n) == mpq(factorial(n - 1), 24)


def test_table_coverage_and_errors():
    with pytest.raises(TableCoverageError):
        intersection_number(2, 1, (4,))
    with pytest.raises(HodgeError):
        intersection_number(0, 2, (0, 0))
    with pytest.raises(HodgeError):
        intersection_number(0, 3, (0, 0))
    extended = IntersectionTable({(2, 1, (4,), ()): mpq(1, 1152)})
    assert extended.value(2, 2, (4, 1)) == 3 * mpq(1, 1152)
    assert extended.value(2, 2, (5, 0)) == mpq(1, 1152)


def test_table_json_round_trip():
    t = IntersectionTable.builtin()
    again = IntersectionTable.from_json(t.to_json())
    assert again.to_json() == t.to_json()
    assert again.value(1, 3, (1, 1, 1)) == mpq(1, 12)


def test_class_expansion_genus_one():
    assert class_expansion([mpq(2)], 1, 1) == {(): 1, (1,): 2}
    out = class_expansion([1, 2, 3], 1, 1)
    assert out[()] == 1 and out[(1,)] == 6


def test_naive_hodge_T_forms():
    T = naive_hodge_T(2, 5)
    assert [T[2].coeff(m) for m in range(1, 6)] == [1, 7, 25, 65, 140]


def test_naive_hodge_generating_function_equals_tau_route():
    assert (naive_hodge_G(2, 6) - naive_hodge_tau_route(2, 6)).is_zero()


@pytest.mark.parametrize("w,beta", [(3, 1), (mpq(1, 2), mpq(-2, 3))])
@pytest.mark.parametrize("relabel", ["lemma", "extended"])
def test_mv_rhs_equals_tau(w, beta, relabel):
    Z = build_tau(mv_tau_data(w, beta, 8, 4, relabel), 4, 4)
    assert (Z - mv_rhs(w, beta, 4, 4, relabel)).is_zero()


def test_mv_rhs_rejects_bad_input():
    with pytest.raises(HodgeError):
        mv_rhs(0, 1, 3, relabel="lemma")
    with pytest.raises(HodgeError):
        mv_rhs(1, 1, 3, relabel="other")
    assert mv_rhs(0, 1, 3, 3, relabel="extended").coeff((), 0) == 1


@given(rat, nonzero)
def test_inversion_lemma(w, beta):
    assert not any(inversion_check(w, beta, 10).c)
    assert z_of_X_coefficients(w, beta, 8) == reversion(X_inverse(w, beta, 8))


@given(st.integers(1, 6), nonzero)
def test_inversion_at_w_zero(m, beta):
    # C_m = m^{m-1}/(m-1)! β^{m-1}, i.e. m^m/m! β^{m-1}
    assert z_of_X_coefficients(0, beta, 6)[m] == mpq(m ** m, factorial(m)) * beta ** (m - 1)


@given(rat.filter(lambda w: w != -1), nonzero)
def test_moebius_and_flow_relations(w, beta):
    assert not any(moebius_relation_check(w, beta, 8).c)
    assert not any(xdiff_check(w, beta, 8).c)


@given(nonzero, nonzero)
def test_triple_hodge_params(u, s):
    p = TripleHodgeParams(u, s)
    assert p.calabi_yau_residual() == 0
    assert p.w == s * s - 1 and p.beta == u ** 3 / s


def test_triple_hodge_from_w():
    assert TripleHodgeParams.from_w(1, 3).s == 2
    with pytest.raises(HodgeError):
        TripleHodgeParams.from_w(1, 1)
    with pytest.raises(HodgeError):
        TripleHodgeParams(1, 0)


@given(nonzero, nonzero.filter(lambda s: s * s != 1))
def test_triple_hodge_finiteness(u, s):
    # 1/Q = (1 + βz)(1 + (w+1)βz) for the inversion-lemma curve
    p = TripleHodgeParams(u, s)
    rep = triple_hodge_finiteness(p)
    assert rep.polynomial and rep.degree == 2
    assert sorted(rep.roots) == sorted([-p.beta, -(p.w + 1) * p.beta])
    c1, c2 = -p.beta, -(p.w + 1) * p.beta
    assert rep.log_weights == {c1: 1 / (1 - c2 / c1), c2: 1 / (1 - c1 / c2)}


def test_triple_hodge_T_forms():
    p = TripleHodgeParams(1, 1)
    assert triple_hodge_T(p, 0, 4).c == {1: 1}
    assert triple_hodge_T(p, 1, 4).c == {1: 1, 2: 2, 3: 1}


@pytest.mark.parametrize("us", [(1, 2), (1, 1)])
def test_triple_hodge_routes_agree(us):
    run = triple_hodge_pipeline(TripleHodgeParams(*us), 2, 6)
    assert run.agree()


def test_kdv_point_has_odd_support():
    run = triple_hodge_pipeline(TripleHodgeParams(0, 1), 2, 6)
    assert run.tau_route is None and run.agree() is None
    assert odd_support(run.table_route)
    assert not odd_support(naive_hodge_G(2, 6))
