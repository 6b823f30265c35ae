from math import factorial

import pytest
from gmpy2 import mpq

from kpcohft.series import HLaurent, PSeries, ZSeries
from kpcohft.tau import (TauData, TauError, build_tau, content_weight, extract_Hgn, family_one,
                         family_two, free_energy, mv_tau_data, naive_hodge_data, rescale_data,
                         stable_part, unstable_parts)
from kpcohft.changevars import build_X


@pytest.fixture(scope="module")
def naive_F():
    return free_energy(build_tau(naive_hodge_data(8, 6), W=5, hcap=5))


def _aut(mu):
    out = 1
    for k in set(mu):
        out *= factorial(mu.count(k))
    return out


def genus_zero_hurwitz(mu):
    """Closed genus-zero count H₀(μ)/r! with r = |μ| + ℓ - 2 simple branch points."""
    n, l = sum(mu), len(mu)
    v = mpq(factorial(n + l - 2), _aut(mu)) * mpq(n) ** (l - 3)
    for m in mu:
        v *= mpq(m ** m, factorial(m))
    return v / factorial(n + l - 2)


def test_content_weight_of_single_row():
    # contents of (2) are 0, 1 so the weight is e^{ħ}
    cw = content_weight(naive_hodge_data(), (2,), 4)
    assert cw == HLaurent({0: 1, 1: 1, 2: mpq(1, 2), 3: mpq(1, 6), 4: mpq(1, 24)}, 4)
    assert content_weight(naive_hodge_data(), (1, 1), 2) == HLaurent({0: 1, 1: -1, 2: mpq(1, 2)}, 2)
    assert content_weight(naive_hodge_data(), (), 3) == HLaurent.const(1, 3)


def test_free_energy_low_terms(naive_F):
    expected = {((1,), -1): 1, ((1, 1), 0): mpq(1, 4), ((2,), -1): mpq(1, 2), ((2,), 1): mpq(1, 12),
                ((1, 1, 1), 1): mpq(1, 6), ((2, 1), 0): mpq(2, 3), ((3,), -1): mpq(1, 2),
                ((3,), 1): mpq(3, 8), ((1, 1), 2): mpq(1, 48), ((2, 1), 2): mpq(1, 3)}
    for (part, e), v in expected.items():
        assert naive_F.coeff(part, e) == v


def test_hbar_parity(naive_F):
    for (part, e), v in naive_F.items():
        assert (e - len(part)) % 2 == 0 and e >= len(part) - 2


def test_genus_zero_matches_hurwitz_formula(naive_F):
    seen = 0
    for (part, e), v in naive_F.items():
        if e == len(part) - 2:
            assert v == genus_zero_hurwitz(list(part)), part
            seen += 1
    assert seen >= 15


def test_stable_and_unstable_split(naive_F):
    S = stable_part(naive_F)
    assert all(e >= 1 for (_, e), _ in S.items())
    h1, h0 = unstable_parts(naive_F)
    assert h1.coeff((2,), 0) == mpq(1, 2) and h0.coeff((1, 1), 0) == mpq(1, 4)
    bad = naive_F + PSeries(naive_F.W, {((1, 1, 1), -1): 1}, naive_F.hcap, 1)
    with pytest.raises(TauError):
        stable_part(bad)


def test_extract_Hgn_naive_hodge(naive_F):
    h03 = extract_Hgn(naive_F, None, 0, 3, 5)
    for k, v in h03.items():
        # genus zero, three points: Π k^k / k!
        assert v == mpq(1) * genus_zero_hurwitz(sorted(k, reverse=True)) * _aut(list(k))
    h11 = extract_Hgn(naive_F, None, 1, 1, 5)
    # one-point genus one: k^k/k! * (k - 1)/24
    assert h11 == {(k,): mpq(k ** k, factorial(k)) * mpq(k - 1, 24) for k in range(2, 6)}


def test_extract_Hgn_in_z_coordinates():
    d = naive_hodge_data(8, 4)
    F = free_energy(build_tau(d, W=6, hcap=4))
    X = build_X(d, order=8).X
    z03 = extract_Hgn(F, X, 0, 3, 6, coords="z")
    assert set(z03.values()) == {1}
    z11 = extract_Hgn(F, X, 1, 1, 6, coords="z")
    assert z11 == {(k,): mpq((k - 1) * (k + 2), 48) for k in range(2, 7)}


def test_extract_Hgn_errors(naive_F):
    with pytest.raises(TauError):
        extract_Hgn(naive_F, None, 0, 3, 9)
    with pytest.raises(TauError):
        extract_Hgn(naive_F, None, 1, 4, 5)
    with pytest.raises(TauError):
        extract_Hgn(naive_F, None, 0, 0, 5)
    odd = naive_F + PSeries(naive_F.W, {((1, 1), 1): 1}, naive_F.hcap, 1)
    with pytest.raises(TauError, match="residual"):
        extract_Hgn(odd, None, 0, 2, 5)


def test_rescale_identity_and_extended_family(naive_F):
    d = naive_hodge_data(8, 6)
    assert rescale_data(1, d) == d
    d2 = rescale_data(2, d)
    assert d2.family == "family-two-extended"
    F2 = free_energy(build_tau(d2, W=5, hcap=5))
    for g, n in [(0, 1), (0, 2), (0, 3), (1, 1)]:
        base = extract_Hgn(naive_F, None, g, n, 5)
        scaled = extract_Hgn(F2, None, g, n, 5)
        assert scaled == {k: v * mpq(2) ** (2 - 2 * g - n) for k, v in base.items()}
    with pytest.raises(TauError):
        rescale_data(0, d)


def test_structural_validation():
    d = family_two(mpq(3, 2), (0, 1), (1, 1))
    with pytest.raises(TauError, match="structural"):
        TauData({**d.psi, (2, 0): 5}, d.yhat, d.order, d.hbar2_order, d.family, d.source)
    with pytest.raises(TauError):
        TauData({(0, 0): 1}, {(1, 0): 1}, 4, 2)
    with pytest.raises(TauError):
        TauData({}, {(0, 0): 1}, 4, 2)


def test_short_tables_are_rejected():
    d = mv_tau_data(2, 1, order=4, hbar2_order=2)
    with pytest.raises(TauError, match="too short"):
        build_tau(d, W=6, hcap=4)


def test_family_one_tau_is_finite():
    d = family_one(order=6, hbar2_order=4)
    Z = build_tau(d, W=4, hcap=4)
    assert Z.coeff((), 0) == 1


def test_mv_data_tags_and_rejects_zero():
    assert mv_tau_data(3, 1, 6, 4, "lemma").family == "family-two"
    assert mv_tau_data(3, 1, 6, 4, "extended").family == "family-two-extended"
    with pytest.raises(TauError):
        mv_tau_data(0, 1)
    with pytest.raises(TauError):
        mv_tau_data(1, 1, relabel="other")
