"""Partitions, characters of the symmetric group and Schur functions."""
from functools import lru_cache

from gmpy2 import mpq

from .series import HLaurent, PSeries, ZERO, HINF, fact


class PartitionError(ValueError):
    pass


def _check(nu):
    nu = tuple(int(x) for x in nu)
    if any(x <= 0 for x in nu) or any(nu[i] < nu[i + 1] for i in range(len(nu) - 1)):
        raise PartitionError("not a partition: %r" % (nu,))
    return nu


@lru_cache(maxsize=None)
def enumerate_partitions(n):
    """All partitions of n, in decreasing lexicographic order."""
    if n < 0:
        raise PartitionError("negative size")

    def rec(rest, bound):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, bound), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    return tuple(rec(n, n))


def partitions_upto(n):
    out = []
    for m in range(n + 1):
        out.extend(enumerate_partitions(m))
    return out


def conjugate(nu):
    nu = _check(nu)
    if not nu:
        return ()
    return tuple(sum(1 for x in nu if x > j) for j in range(nu[0]))


def hook_lengths(nu):
    """Hook length of every box, keyed by (row, col) from 0."""
    nu = _check(nu)
    conj = conjugate(nu)
    return {(i, j): nu[i] - j + conj[j] - i - 1 for i in range(len(nu)) for j in range(nu[i])}


def contents(nu):
    """Content col - row of every box."""
    nu = _check(nu)
    return {(i, j): j - i for i in range(len(nu)) for j in range(nu[i])}


def f2(nu):
    """Sum of contents."""
    return sum(contents(nu).values())


def z_factor(mu):
    """|Aut(μ)| · Π μ_i, the centraliser order."""
    mu = _check(mu)
    out = 1
    for k in set(mu):
        m = mu.count(k)
        out *= k ** m * int(fact(m))
    return out


def dimension(nu):
    """Number of standard tableaux via the hook formula."""
    nu = _check(nu)
    prod = 1
    for h in hook_lengths(nu).values():
        prod *= h
    return int(fact(sum(nu))) // prod


def _beta_set(nu, length):
    return tuple(nu[i] + length - 1 - i if i < len(nu) else length - 1 - i for i in range(length))


def _strip_removals(nu, r):
    """Partitions obtained by removing an r-border strip, with strip heights."""
    length = len(nu) + r
    beta = _beta_set(nu, length)
    bset = set(beta)
    out = []
    for idx, b in enumerate(beta):
        nb = b - r
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for x in beta if nb < x < b)
        new = sorted((x for x in beta if x != b), reverse=True)
        new.append(nb)
        new.sort(reverse=True)
        part = tuple(x - (length - 1 - i) for i, x in enumerate(new))
        out.append((tuple(p for p in part if p > 0), height))
    return out


@lru_cache(maxsize=None)
def _mn(nu, mu):
    if not mu:
        return 1 if not nu else 0
    r, rest = mu[0], mu[1:]
    total = 0
    for smaller, height in _strip_removals(nu, r):
        total += (-1) ** height * _mn(smaller, rest)
    return total


def character(nu, mu):
    """Irreducible character χ^ν evaluated on cycle type μ (Murnaghan-Nakayama)."""
    nu, mu = _check(nu), _check(mu)
    if sum(nu) != sum(mu):
        raise PartitionError("size mismatch %r vs %r" % (nu, mu))
    return _mn(nu, mu)


@lru_cache(maxsize=None)
def _schur_terms(nu):
    n = sum(nu)
    return tuple((mu, mpq(character(nu, mu), z_factor(mu))) for mu in enumerate_partitions(n))


def schur_in_powersums(nu, W=None, hcap=HINF, sigma=0):
    """s_ν = Σ_μ χ^ν_μ / z_μ · p_μ as a PSeries (ħ-exponent 0)."""
    nu = _check(nu)
    W = sum(nu) if W is None else W
    return PSeries(W, {(mu, 0): c for mu, c in _schur_terms(nu) if c}, hcap, sigma)


def schur_specialize(nu, values):
    """s_ν with p_k replaced by ``values[k]`` (HLaurent or rationals)."""
    nu = _check(nu)
    total = None
    for mu, c in _schur_terms(nu):
        if not c:
            continue
        term = HLaurent({0: c})
        for k in mu:
            v = values[k]
            term = term * (v if isinstance(v, HLaurent) else HLaurent({0: v}))
        total = term if total is None else total + term
    return total if total is not None else HLaurent({0: 1})


def schur_coefficients(Z, n):
    """Coefficients a_ν of Z = Σ a_ν s_ν for |ν| = n, as HLaurent values.

    Uses p_μ = Σ_ν χ^ν_μ s_ν.
    """
    out = {}
    coeffs = {mu: Z.coeff(mu) for mu in enumerate_partitions(n)}
    for nu in enumerate_partitions(n):
        acc = None
        for mu, c in coeffs.items():
            ch = character(nu, mu)
            if ch:
                t = c * ch
                acc = t if acc is None else acc + t
        out[nu] = acc if acc is not None else HLaurent({})
    return out


def frobenius(nu):
    """Frobenius coordinates (α | β)."""
    nu = _check(nu)
    conj = conjugate(nu)
    d = sum(1 for i, x in enumerate(nu) if x > i)
    return tuple(nu[i] - i - 1 for i in range(d)), tuple(conj[i] - i - 1 for i in range(d))


def from_frobenius(alpha, beta):
    """Inverse of :func:`frobenius`."""
    d = len(alpha)
    if d != len(beta):
        raise PartitionError("unequal Frobenius ranks")
    if not d:
        return ()
    rows = [alpha[i] + i + 1 for i in range(d)]
    cols = [beta[j] + j + 1 for j in range(d)]
    nrows = cols[0]
    part = []
    for i in range(nrows):
        if i < d:
            part.append(rows[i])
        else:
            part.append(sum(1 for j in range(d) if cols[j] > i))
    return _check(part)
