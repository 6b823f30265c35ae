import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from kpcohft.series import BiSeries, RatFn, ZSeries, compose
from kpcohft.tau import build_tau, extract_Hgn, family_two, free_energy, naive_hodge_data
from kpcohft.changevars import build_X, unstable_H02
from kpcohft.hodge import IntersectionTable
from kpcohft.spectral import (CorrelatorTable, DepthError, SpectralCurve, SpectralError,
                              X_from_curve, airy_calibration, airy_curve, airy_intersections,
                              curve_from_data, doss_expand, doss_expand_02, homogeneity_ratio,
                              local_involution, loop_equation_check, named_curve,
                              naive_hodge_curve, parse_curve, parse_polynomial, projection,
                              triple_hodge_curve, xi_basis)


@pytest.fixture(scope="module")
def naive():
    return CorrelatorTable(naive_hodge_curve())


@pytest.fixture(scope="module")
def airy():
    return CorrelatorTable(airy_curve())


@pytest.fixture(scope="module")
def naive_tau():
    d = naive_hodge_data(order=8, hbar2_order=4)
    return free_energy(build_tau(d, W=6, hcap=4)), build_X(d, order=8).X


def test_parse_polynomial():
    assert parse_polynomial("3/2*z^2+z") == (0, 1, mpq(3, 2))
    assert parse_polynomial("z**3 - 1") == (-1, 0, 0, 1)
    assert parse_polynomial("2") == (2,)
    for bad in ["", "z^", "x+1", "0.5*z", "(z-1)"]:
        with pytest.raises(SpectralError):
            parse_polynomial(bad)


def test_rejected_curves():
    with pytest.raises(SpectralError, match="order 2"):
        parse_curve("z^2")
    with pytest.raises(SpectralError, match="pole"):
        parse_curve("1-z", "z", "1", "1-z")
    with pytest.raises(SpectralError, match="share"):
        parse_curve("1-z", "z", "1-z")
    with pytest.raises(SpectralError):
        named_curve("nope")


def test_curve_ramification():
    assert naive_hodge_curve().ramification == [1]
    c = triple_hodge_curve(2, 3)
    assert c.ramification == [] and c.ramified_at_infinity
    with pytest.raises(SpectralError, match="infinity"):
        CorrelatorTable(c)
    with pytest.raises(SpectralError, match="no ramification"):
        CorrelatorTable(parse_curve("1", "z"))


def test_local_involution_naive():
    sig = local_involution(naive_hodge_curve(), 1, 6)
    expected = [0, -1, mpq(2, 3), mpq(-4, 9), mpq(44, 135), mpq(-104, 405), mpq(40, 189)]
    assert sig.c[:7] == expected


def test_local_involution_preserves_x():
    # x(σ(z)) = x(z) for x = log z - z near z = 1 + ε: compare Taylor coefficients
    sig = local_involution(naive_hodge_curve(), 1, 8)
    n = sig.order
    # x(1+ε) + 1 = log(1+ε) - ε
    xe = ZSeries([0, 0] + [mpq((-1) ** (k + 1), k) for k in range(2, n + 1)])
    assert compose(xe, sig) == xe


def test_naive_hodge_correlators(naive):
    assert naive.omega(0, 3).terms == {((1, 2), (1, 2), (1, 2)): 1}
    assert naive.omega(1, 1).terms == {((1, 2),): mpq(-1, 24), ((1, 3),): mpq(1, 12),
                                       ((1, 4),): mpq(1, 8)}
    with pytest.raises(SpectralError):
        naive.omega(0, 2)


@pytest.mark.parametrize("gn", [(0, 3), (1, 1), (0, 4), (1, 2)])
def test_correlator_structure(naive, airy, gn):
    for table in (naive, airy):
        w = table.omega(*gn)
        assert w.is_symmetric()
        assert projection(table.curve, w).terms == w.terms
        assert loop_equation_check(table, *gn).passed


@pytest.mark.parametrize("gn", [(0, 3), (1, 1)])
def test_tr_matches_tau(naive, naive_tau, gn):
    F, X = naive_tau
    assert doss_expand(naive, *gn, 6) == extract_Hgn(F, X, *gn, 6)
    assert doss_expand(naive, *gn, 6, coords="z") == extract_Hgn(F, X, *gn, 6, coords="z")


def test_tr_matches_tau_on_two_branch_points():
    d = family_two(alpha=mpq(9, 2), R1=(0, 1), R2=(1, 1), order=10, hbar2_order=6)
    curve = curve_from_data(d)
    assert sorted(curve.ramification) == [mpq(1, 2), 2]
    T = CorrelatorTable(curve)
    F = free_energy(build_tau(d, W=6, hcap=6))
    X = build_X(d, order=8).X
    for gn in [(0, 3), (1, 1), (0, 4), (1, 2)]:
        assert doss_expand(T, *gn, 6) == extract_Hgn(F, X, *gn, 6), gn


def test_loop_equations_catch_corruption(naive):
    for gn in [(0, 3), (1, 1)]:
        w = naive.omega(*gn)
        rep = loop_equation_check(naive, *gn, corrupt=w.scale(-1))
        assert rep.linear and not rep.quadratic and not rep.passed


@given(st.integers(0, 8), st.sampled_from([(0, 3), (1, 1), (0, 4), (1, 2)]))
def test_depth_is_enough_or_refused(depth, gn):
    ref = CorrelatorTable(naive_hodge_curve()).omega(*gn).terms
    try:
        got = CorrelatorTable(naive_hodge_curve(), depth=depth).omega(*gn).terms
    except DepthError:
        return
    assert got == ref


def test_low_depth_raises():
    with pytest.raises(DepthError):
        CorrelatorTable(naive_hodge_curve(), depth=1).omega(1, 1)


@pytest.mark.parametrize("gn", [(0, 3), (1, 1)])
def test_homogeneity(gn):
    scaled, expected = homogeneity_ratio(naive_hodge_curve(), *gn, mpq(3, 2))
    assert scaled.terms == expected.terms


def test_airy_intersections(airy):
    assert airy_calibration(airy) == (mpq(-1, 2), -2)
    table = IntersectionTable.builtin()
    for g, n in [(0, 3), (1, 1), (0, 4), (1, 2), (0, 5)]:
        for ds, v in airy_intersections(airy, g, n).items():
            assert v == table.value(g, n, ds), (g, n, ds)
    # ⟨τ₄⟩₂ lies outside the string/dilaton closure of the built-in table
    assert airy_intersections(airy, 2, 1) == {(4,): mpq(1, 1152)}
    assert airy.omega(0, 3).terms == {((0, 2), (0, 2), (0, 2)): mpq(-1, 2)}


def test_xi_basis():
    [xi] = xi_basis(naive_hodge_curve(), 2)
    assert xi.point == 1 and xi.residue_free()
    assert [f.num for f in xi.forms] == [(1,), (1, 2), (1, 8, 6)]
    [xi_inf] = xi_basis(triple_hodge_curve(2, 3), 1)
    assert xi_inf.point == "inf" and xi_inf.residue_free()
    assert xi_inf.forms[1].num == (1, 24, 81)


def test_X_from_curve():
    X = X_from_curve(naive_hodge_curve(), 5)
    assert X.c[:6] == [0, 1, -1, mpq(1, 2), mpq(-1, 6), mpq(1, 24)]
    with pytest.raises(SpectralError):
        X_from_curve(airy_curve(), 4)


def test_unstable_02_expansion():
    sd = build_X(naive_hodge_data(), order=8)
    h = unstable_H02(sd, 7).series
    dd = BiSeries({(a - 1, b - 1): v * a * b for (a, b), v in h.c.items() if a and b and a + b - 2 <= 5}, 5)
    assert doss_expand_02(naive_hodge_curve(), 5) == dd


def test_correlator_evaluation(naive):
    w = naive.omega(0, 3)
    assert w(2, 3, mpq(1, 2)) == 1 / (mpq(1) * 4 * mpq(1, 4))
    with pytest.raises(SpectralError):
        w(1, 2)
    assert SpectralCurve(RatFn((1, -1), (0, 1)), RatFn((1,))).to_json() == naive_hodge_curve().to_json() | {"name": "custom"}
