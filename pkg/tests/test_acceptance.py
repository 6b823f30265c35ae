"""Acceptance criteria 1-8, each timed against its runtime bound."""
import random
import time
from functools import lru_cache
from math import factorial

import pytest
from gmpy2 import mpq

from kpcohft import changevars as cv
from kpcohft import hodge, kpcheck, spectral, tau
from kpcohft.series import ZSeries, reversion


@lru_cache(maxsize=None)
def stirling2(n, k):
    """Set partitions of {1..n} into k blocks, by where element n goes."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


class Clock:
    def __init__(self, bound):
        self.bound = bound

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.bound, "took %.2fs, bound %gs" % (self.elapsed, self.bound)


def rational(rng, lo=-5, hi=5, den=4, nonzero=False):
    while True:
        v = mpq(rng.randint(lo, hi), rng.randint(1, den))
        if v or not nonzero:
            return v


@pytest.mark.criterion(1, "Stirling tables", 1)
def test_criterion_1_stirling_tables():
    oracle = {(k, m): stirling2(k + m, m) for k in range(5) for m in range(1, 9)}
    with Clock(1):
        sd = cv.build_X(tau.naive_hodge_data(order=12), 12)
        rows = {k: cv.t_recursion(sd, 0, k, 8) for k in range(5)}
    assert [rows[0].coeff(m) for m in range(1, 6)] == [1, 1, 1, 1, 1]
    assert [rows[1].coeff(m) for m in range(1, 6)] == [1, 3, 6, 10, 15]
    assert [rows[2].coeff(m) for m in range(1, 6)] == [1, 7, 25, 65, 140]
    for (k, m), v in oracle.items():
        assert rows[k].coeff(m) == v, (k, m)


@pytest.mark.criterion(2, "naive Hodge KP check", 10)
def test_criterion_2_naive_hodge_kp():
    with Clock(10):
        G = hodge.naive_hodge_G(hbar_max=2, W=8)
        r1, r2 = kpcheck.kp_residual_q1(G), kpcheck.kp_residual_q2(G)
    assert r1.passed and r2.passed
    assert r1.hbar_window >= 2 and r1.weight_window >= 2


@pytest.mark.criterion(3, "hypergeometric tau-ness", 60)
def test_criterion_3_tau_ness():
    rng = random.Random(20261018)
    sets = [dict(alpha=rational(rng), R1=(0, rational(rng, nonzero=True), rational(rng)),
                 R2=(1, rational(rng)), R3=(1, rational(rng)), R4=(1, rational(rng)))
            for _ in range(10)]
    with Clock(60):
        runs = [(tau.naive_hodge_data(order=11, hbar2_order=12), "naive")]
        runs += [(tau.family_two(order=11, hbar2_order=12, **p), p) for p in sets]
        for data, label in runs:
            Z = tau.build_tau(data, W=10, hcap=10)
            kp = kpcheck.kp_residual_t(tau.free_energy(Z), 1)
            pl = kpcheck.pluecker_check(Z, 6)
            assert kp.passed and kp.weight_window >= 6, label
            assert pl.passed and pl.checked == 8, label


@pytest.mark.criterion(4, "inversion lemma", 1)
def test_criterion_4_inversion():
    rng = random.Random(4)
    pairs = [(rational(rng), rational(rng, nonzero=True)) for _ in range(10)]
    with Clock(1):
        for w, beta in pairs:
            assert not any(hodge.inversion_check(w, beta, 12).c), (w, beta)
        spots = [hodge.z_of_X_coefficients(0, beta, 5) for beta in (1, mpq(-2, 3))]
    for beta, C in zip((1, mpq(-2, 3)), spots):
        for m in range(1, 6):
            assert C[m] == mpq(m ** m, factorial(m)) * mpq(beta) ** (m - 1)
        assert C == reversion(hodge.X_inverse(0, beta, 5))


@pytest.mark.criterion(5, "MV lemma consistency", 60)
def test_criterion_5_mv_lemma():
    W, window = 4, 4
    K = window + W
    with Clock(60):
        for w, beta in [(3, 1), (mpq(1, 2), mpq(-2, 3)), (mpq(-5, 3), 2)]:
            rhs = hodge.mv_rhs(w, beta, W, K)
            Z = tau.build_tau(tau.mv_tau_data(w, beta, order=W + 1, hbar2_order=(K + W) // 2 + 2), W, K)
            diff = [(k, v) for k, v in (rhs - Z).items() if -window <= k[1] <= window]
            assert not diff, (w, beta, diff[:3])
            assert any(e == window for (_, e), _ in rhs.items())


@pytest.mark.criterion(6, "TR and tau correspondence", 60)
def test_criterion_6_tr_tau():
    order = 6
    with Clock(60):
        data = tau.naive_hodge_data(order=8, hbar2_order=6)
        F = tau.free_energy(tau.build_tau(data, W=order, hcap=4))
        X = cv.build_X(data, order=8).X
        table = spectral.CorrelatorTable(spectral.naive_hodge_curve())
        for g, n in [(0, 3), (1, 1)]:
            lhs = spectral.doss_expand(table, g, n, order)
            rhs = tau.extract_Hgn(F, X, g, n, order)
            assert lhs == rhs and len(rhs) >= 5, (g, n)
            assert spectral.loop_equation_check(table, g, n).passed, (g, n)


@pytest.mark.criterion(7, "triple Hodge instance", 120)
def test_criterion_7_triple_hodge():
    with Clock(120):
        for us in [(1, 2), (1, 1), (2, 3)]:
            run = hodge.triple_hodge_pipeline(hodge.TripleHodgeParams(*us), hbar_max=2, W=8)
            for series in (run.table_route, run.tau_route):
                assert kpcheck.kp_residual_q1(series).passed, us
                assert kpcheck.kp_residual_q2(series).passed, us
            assert run.agree(), us
        kdv = hodge.triple_hodge_pipeline(hodge.TripleHodgeParams(0, 1), hbar_max=2, W=8)
        assert hodge.odd_support(kdv.table_route)
        assert kdv.table_route.items()


@pytest.mark.criterion(8, "structural invariants", 10)
def test_criterion_8_structure():
    with Clock(10):
        for a, b in [(2, 3), (mpq(-1, 5), mpq(7, 2))]:
            h = cv.unstable_H02(cv.spectral_from_X(cv.moebius_X(a, b, 10)), 8)
            assert h.log_arg == a and h.series.is_zero()
        for curve in (spectral.naive_hodge_curve(), spectral.airy_curve()):
            for g, n in [(0, 3), (1, 1)]:
                scaled, predicted = spectral.homogeneity_ratio(curve, g, n, mpq(3, 2))
                assert scaled.terms == predicted.terms
        naive = cv.finiteness_check(cv.build_X(tau.naive_hodge_data(order=12), 12), 4)
        assert not naive.polynomial
        p = hodge.TripleHodgeParams(mpq(1, 2), 3)
        rep = hodge.triple_hodge_finiteness(p)
    assert rep.polynomial and rep.degree == 2
    # 1/Q = (1 + βz)(1 + (w+1)βz)
    assert sorted(rep.roots) == sorted([-p.beta, -(p.w + 1) * p.beta])
