import math
from collections import Counter
from functools import lru_cache

from gmpy2 import mpq
from hypothesis import given, strategies as st

from kpcohft import partitions as P
from kpcohft.series import HLaurent, PSeries


def pentagonal_counts(n):
    """Partition numbers from Euler's pentagonal recurrence."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        k, total = 1, 0
        while True:
            g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p


@lru_cache(maxsize=None)
def count_tableaux(nu):
    """Standard Young tableaux by removing corners."""
    nu = tuple(nu)
    if sum(nu) == 0:
        return 1
    total = 0
    for i, r in enumerate(nu):
        if i + 1 == len(nu) or nu[i + 1] < r:
            smaller = list(nu)
            smaller[i] -= 1
            total += count_tableaux(tuple(x for x in smaller if x))
    return total


partition_st = st.lists(st.integers(1, 5), min_size=0, max_size=4).map(
    lambda xs: tuple(sorted(xs, reverse=True)))


def test_small_enumerations():
    assert list(P.enumerate_partitions(0)) == [()]
    assert list(P.enumerate_partitions(3)) == [(3,), (2, 1), (1, 1, 1)]
    assert len(P.enumerate_partitions(6)) == 11


def test_counts_match_pentagonal_recurrence():
    ref = pentagonal_counts(15)
    assert [len(P.enumerate_partitions(n)) for n in range(16)] == ref


def test_hook_examples():
    assert sorted(P.hook_lengths((1,)).values()) == [1]
    assert sorted(P.hook_lengths((2, 1)).values()) == [1, 1, 3]
    assert sorted(P.hook_lengths((2, 2)).values()) == [1, 2, 2, 3]


def test_content_examples():
    assert sorted(P.contents((1,)).values()) == [0]
    assert sorted(P.contents((2, 1)).values()) == [-1, 0, 1]


def test_f2_examples():
    assert P.f2(()) == 0
    assert P.f2((2,)) == 1
    assert P.f2((2, 1)) == 0


def test_z_factor():
    assert P.z_factor((5,)) == 5
    assert P.z_factor((1, 1, 1)) == 6
    assert P.z_factor((2, 1, 1)) == 4


def test_character_values():
    assert all(P.character((4,), mu) == 1 for mu in P.enumerate_partitions(4))
    assert P.character((1, 1), (2,)) == -1
    assert P.character((2, 1), (3,)) == -1
    assert P.character((2, 1), (1, 1, 1)) == 2
    assert P.character((2, 2), (2, 1, 1)) == 0


def test_character_orthogonality():
    for n in range(1, 7):
        parts = P.enumerate_partitions(n)
        for a in parts:
            for b in parts:
                s = sum(mpq(P.character(a, mu) * P.character(b, mu)) / P.z_factor(mu)
                        for mu in parts)
                assert s == (1 if a == b else 0)


@given(partition_st)
def test_contents_sum_to_f2(nu):
    assert sum(P.contents(nu).values()) == P.f2(nu)


@given(partition_st)
def test_hook_formula_counts_tableaux(nu):
    n = sum(nu)
    hooks = math.prod(P.hook_lengths(nu).values()) if nu else 1
    assert math.factorial(n) // hooks == count_tableaux(nu) == P.dimension(nu)


@given(partition_st)
def test_conjugate_is_involution(nu):
    c = P.conjugate(nu)
    assert P.conjugate(c) == nu
    assert Counter(P.contents(c).values()) == Counter(-x for x in P.contents(nu).values())


@given(partition_st)
def test_frobenius_round_trip(nu):
    alpha, beta = P.frobenius(nu)
    assert P.from_frobenius(alpha, beta) == nu


def test_schur_in_powersums():
    assert P.schur_in_powersums((1,)).equals(PSeries(1, {((1,), 0): 1}))
    half = mpq(1, 2)
    assert P.schur_in_powersums((2,)).equals(PSeries(2, {((1, 1), 0): half, ((2,), 0): half}))
    assert P.schur_in_powersums((1, 1)).equals(PSeries(2, {((1, 1), 0): half, ((2,), 0): -half}))


def test_schur_specialize():
    c = HLaurent({-1: mpq(3, 7)})
    assert P.schur_specialize((1,), {1: c}) == c
    zero = {k: HLaurent({}) for k in range(1, 4)}
    assert P.schur_specialize((2, 1), zero).is_zero()
    one = HLaurent.const(1)
    assert P.schur_specialize((2,), {1: one, 2: one}) == one
