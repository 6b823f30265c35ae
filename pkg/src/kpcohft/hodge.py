"""Hodge integrals, CohFT generating functions and the triple Hodge theorem.

``G_Ω(T) = Σ ħ^{2g-2+n}/n! Σ_d ∫ Ω_{g,n} Π ψ_i^{d_i} T_{d_i}`` over the stable
range 2g-2+n > 0, with Ω a product of total Hodge classes Λ(t) = Σ t^i λ_i.
"""
import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from . import partitions as P
from ._parallel import pmap
from .changevars import (spectral_from_X, p_of_q, t_recursion, finiteness_check,
                         unstable_H02, build_X)
from .series import (HLaurent, PSeries, ZSeries, LinearForm, ZERO, ONE, Q, qstr,
                     h_exp, S_of, fact, compose, reversion)
from .tau import (naive_hodge_data, tau_from_schur, free_energy, stable_part, TauError)


class HodgeError(ValueError):
    pass


class TableCoverageError(HodgeError):
    pass


# ---------------------------------------------------------------------------
# intersection numbers

BASE_ENTRIES = {
    (0, 3, (0, 0, 0), ()): ONE,
    (1, 1, (1,), ()): mpq(1, 24),
    (1, 1, (0,), (1,)): mpq(1, 24),
}


def _norm_key(g, n, psi, lam):
    psi = tuple(sorted((int(a) for a in psi), reverse=True))
    lam = tuple(sorted((int(i) for i in lam), reverse=True))
    if len(psi) != n:
        raise HodgeError("need one ψ exponent per marked point")
    if any(a < 0 for a in psi) or any(i < 1 for i in lam):
        raise HodgeError("bad exponents")
    return (g, n, psi, lam)


def _degree_ok(g, n, psi, lam):
    return sum(psi) + sum(lam) == 3 * g - 3 + n


class IntersectionTable:
    """Exact ∫ ψ^a λ-monomial over M̄_{g,n}.

    Stored entries are extended by the string and dilaton equations, which
    hold for λ-classes since those pull back along forgetful maps.
    """

    def __init__(self, entries=None, rules=True):
        self.entries = {}
        for k, v in (entries or {}).items():
            g, n, psi, lam = k
            self.entries[_norm_key(g, n, psi, lam)] = Q(v)
        self.rules = rules
        self._cache = {}

    @classmethod
    def builtin(cls):
        return cls(BASE_ENTRIES)

    def __bool__(self):
        return bool(self.entries)

    def value(self, g, n, psi, lam=()):
        key = _norm_key(g, n, psi, lam)
        if 2 * g - 2 + n <= 0:
            raise HodgeError("unstable (g, n) = (%d, %d)" % (g, n))
        if not _degree_ok(*key):
            return ZERO
        return self._value(key)

    def _value(self, key):
        if key in self.entries:
            return self.entries[key]
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        g, n, psi, lam = key
        if not self.rules or 2 * g - 2 + n - 1 <= 0:
            raise TableCoverageError("no entry for %r" % (key,))
        if 0 in psi:
            rest = list(psi)
            rest.remove(0)
            val = ZERO
            for j, a in enumerate(rest):
                if a:
                    lowered = rest[:j] + [a - 1] + rest[j + 1:]
                    val += self._value(_norm_key(g, n - 1, lowered, lam))
        elif 1 in psi:
            rest = list(psi)
            rest.remove(1)
            val = (2 * g - 2 + n - 1) * self._value(_norm_key(g, n - 1, rest, lam))
        else:
            raise TableCoverageError("no entry for %r" % (key,))
        self._cache[key] = val
        return val

    def to_json(self):
        rows = []
        for (g, n, psi, lam), v in sorted(self.entries.items()):
            rows.append({"g": g, "n": n, "psi": list(psi), "lambda": list(lam), "value": qstr(v)})
        return {"rules": self.rules, "entries": rows}

    @classmethod
    def from_json(cls, d):
        if isinstance(d, str):
            d = json.loads(d)
        entries = {(r["g"], r["n"], tuple(r["psi"]), tuple(r["lambda"])): Q(r["value"])
                   for r in d["entries"]}
        return cls(entries, d.get("rules", True))


_DEFAULT = IntersectionTable.builtin()


def intersection_number(g, n, psi, lam=()):
    """∫_{M̄_{g,n}} Π ψ_i^{psi_i} · Π λ_{lam_j} from the built-in table."""
    return _DEFAULT.value(g, n, psi, lam)


def class_expansion(weights, g, max_degree):
    """Π_t Λ(t) on M̄_g as {λ-monomial: coefficient}, monomials as index tuples."""
    out = {(): ONE}
    for t in weights:
        t = Q(t)
        new = {}
        for mono, c in out.items():
            for i in range(0, g + 1):
                if sum(mono) + i > max_degree:
                    break
                nm = tuple(sorted(mono + ((i,) if i else ()), reverse=True))
                new[nm] = new.get(nm, ZERO) + c * t ** i
        out = {k: v for k, v in new.items() if v}
    return out


def _psi_multisets(n, deg):
    """Non-increasing n-tuples of non-negative integers summing to deg."""
    def rec(k, rest, bound):
        if k == 0:
            if rest == 0:
                yield ()
            return
        for a in range(min(rest, bound), -1, -1):
            for tail in rec(k - 1, rest - a, a):
                yield (a,) + tail
    return list(rec(n, deg, deg))


def _orbit_size(psi):
    out = int(fact(len(psi)))
    for a in set(psi):
        out //= int(fact(psi.count(a)))
    return out


def cohft_generating(table, weights, T, hbar_max, W):
    """G_Ω(T) with Ω = Π_t Λ(t), as a PSeries in q through ħ^hbar_max.

    ``T`` maps d to a LinearForm for T_d.  An empty table is the zero class.
    """
    out = PSeries(W, None, hbar_max, 0)
    if not table:
        return out
    lin = {}

    def tform(d):
        if d not in lin:
            if d not in T:
                raise HodgeError("T_%d not supplied" % d)
            lin[d] = PSeries.from_linear(T[d], W, hbar_max)
        return lin[d]

    for e in range(1, hbar_max + 1):
        for g in range(0, (e + 2) // 2 + 1):
            n = e - 2 * g + 2
            if n < 1:
                continue
            dim = 3 * g - 3 + n
            for lam, c in class_expansion(weights, g, dim).items():
                deg = dim - sum(lam)
                for psi in _psi_multisets(n, deg):
                    val = table.value(g, n, psi, lam)
                    if not val:
                        continue
                    coef = c * val * _orbit_size(psi) / fact(n)
                    term = PSeries.const(W, coef, hbar_max)
                    for d in psi:
                        term = term * tform(d)
                    out = out + _shift_hbar(term, e)
    return out


def _shift_hbar(s, e):
    out = PSeries(s.W, None, s.hcap, s.sigma, wcap=s.wcap)
    for (part, e0), v in s.items():
        out._add_term(part, e0 + e, v)
    return out


# ---------------------------------------------------------------------------
# naive single Hodge

def naive_hodge_T(kmax, M):
    sd = build_X(naive_hodge_data(order=M + 1), M + 1)
    return {k: t_recursion(sd, 0, k, M) for k in range(kmax + 1)}


def naive_hodge_G(hbar_max=2, W=8, table=None):
    """G_{Λ(-1)}(T(q)) with the Stirling T-forms."""
    table = _DEFAULT if table is None else table
    T = naive_hodge_T(3 * (hbar_max // 2 + 1) - 3 + hbar_max + 2, W)
    return cohft_generating(table, (-1,), T, hbar_max, W)


def naive_hodge_tau_route(hbar_max=2, W=8):
    """Stable part of log Z for ψ̂ = y, ŷ = z, with p replaced by p(q)."""
    from .tau import build_tau
    data = naive_hodge_data(order=W + 1, hbar2_order=hbar_max + 2)
    K = 2 * hbar_max + 2
    F = stable_part(free_energy(build_tau(data, W, K)))
    sd = build_X(data, W + 1)
    forms = {k: p_of_q(sd, k, W) for k in range(1, W + 1)}
    return F.regrade(0, hbar_max).substitute(forms)


# ---------------------------------------------------------------------------
# Mariño-Vafa hook product

def _mv_coefficient(args):
    w, beta, nu, hcap, relabel = args
    n = sum(nu)
    hi = hcap + n
    if relabel == "lemma":
        rate = 1 / w + mpq(1, 2)
        box_scale, box_num = ONE, beta * w
    else:
        rate = (1 + w / 2) * beta
        box_scale, box_num = beta * w, ONE
    acc = h_exp(HLaurent({1: rate * P.f2(nu)}, hi), hi) if nu else HLaurent({0: 1}, hi)
    for h in P.hook_lengths(nu).values():
        factor = S_of(box_scale * h, hi + 1, inverse=True) * HLaurent({-1: box_num / h})
        acc = acc * factor.truncate(hi)
    return nu, acc.truncate(hcap)


def mv_rhs(w, beta, m, hcap=4, relabel="lemma"):
    """Hook-product tau function, |μ| <= m, Euler-graded ħ cap ``hcap``.

    lemma:    Σ_ν e^{(1/w + 1/2)ħ f2(ν)} Π_□ βw/ς(ħ h(□)) · s_ν(p)
    extended: Σ_ν e^{(1 + w/2)ħβ f2(ν)} Π_□ 1/(ħ h(□) 𝒮(ħβw h(□))) · s_ν(p)

    with ς(t) = 2 sinh(t/2) = t 𝒮(t).  The extended form is the genus-graded
    version of the Mariño-Vafa right-hand side and is regular at w = 0.
    """
    w, beta = Q(w), Q(beta)
    if relabel not in ("lemma", "extended"):
        raise HodgeError("unknown relabelling %r" % relabel)
    if relabel == "lemma" and not w:
        raise HodgeError("w must be non-zero")
    jobs = [(w, beta, nu, hcap, relabel) for nu in P.partitions_upto(m)]
    coeffs = dict(pmap(_mv_coefficient, jobs))
    return tau_from_schur(coeffs, m, hcap)


# ---------------------------------------------------------------------------
# triple Hodge

@dataclass(frozen=True)
class TripleHodgeParams:
    """w = s² - 1 and β = u³/s, so √(w+1) = s stays rational."""

    u: object
    s: object

    def __post_init__(self):
        object.__setattr__(self, "u", Q(self.u))
        object.__setattr__(self, "s", Q(self.s))
        if not self.s:
            raise HodgeError("s must be non-zero (w = -1 is the Möbius case)")

    @property
    def w(self):
        return self.s ** 2 - 1

    @property
    def beta(self):
        return self.u ** 3 / self.s

    def triple(self):
        u2, w = self.u ** 2, self.w
        return (-u2, -u2 * w, u2 * w / (w + 1))

    def calabi_yau_residual(self):
        """ab + bc + ca, which is abc(1/a + 1/b + 1/c) and defined everywhere."""
        a, b, c = self.triple()
        return a * b + b * c + c * a

    @classmethod
    def from_w(cls, u, w):
        w = Q(w)
        s = _rational_sqrt(w + 1)
        if s is None:
            raise HodgeError("w + 1 = %s is not a rational square" % qstr(w + 1))
        return cls(u, s)


def _rational_sqrt(x):
    import gmpy2
    x = Q(x)
    if x <= 0:
        return None
    n, d = x.numerator, x.denominator
    if gmpy2.is_square(n) and gmpy2.is_square(d):
        return mpq(gmpy2.isqrt(n), gmpy2.isqrt(d))
    return None


def triple_hodge_T(params, k, M):
    """T_0 = q_1, T_{k+1} = Σ m(u² q_m + u(s²+1)/s q_{m+1} + q_{m+2}) ∂T_k/∂q_m."""
    u, s = params.u, params.s
    steps = (u * u, u * (s * s + 1) / s, ONE)
    form = {1: ONE}
    for _ in range(k):
        new = {}
        for m, a in form.items():
            for l, c in enumerate(steps):
                if c and m + l <= M:
                    new[m + l] = new.get(m + l, ZERO) + m * c * a
        form = new
    return LinearForm(form, M)


def triple_hodge_G(params, hbar_max=2, W=8, table=None):
    table = _DEFAULT if table is None else table
    dmax = 3 * (hbar_max // 2 + 1) + hbar_max
    T = {d: triple_hodge_T(params, d, W) for d in range(dmax + 1)}
    return cohft_generating(table, params.triple(), T, hbar_max, W)


def X_inverse(w, beta, order):
    """z/(1+(w+1)βz) · ((1+βz)/(1+(w+1)βz))^{1/w}; the w -> 0 limit is
    z/(1+βz) · exp(-βz/(1+βz))."""
    w, beta = Q(w), Q(beta)
    n = order - 1
    a = ZSeries.from_dict({0: 1, 1: beta}, n)
    b = ZSeries.from_dict({0: 1, 1: (w + 1) * beta}, n)
    if w:
        body = b.inverse() * a.pow_rational(1 / w) * b.pow_rational(-1 / w)
    else:
        body = a.inverse() * (-(ZSeries.var(n, beta) * a.inverse())).exp()
    return ZSeries([ZERO] + body.c)


def z_of_X_coefficients(w, beta, order):
    """C_m = Π_{j<m}(m + jw)/(m-1)! · β^{m-1}, m = 1..order."""
    w, beta = Q(w), Q(beta)
    out = [ZERO]
    for m in range(1, order + 1):
        prod = ONE
        for j in range(1, m):
            prod *= m + j * w
        out.append(prod / fact(m - 1) * beta ** (m - 1))
    return ZSeries(out)


def inversion_check(w, beta, order):
    """X(z(X)) - X through X^order (zero if the two series are inverse)."""
    X = X_inverse(w, beta, order)
    zX = z_of_X_coefficients(w, beta, order)
    return compose(X, zX) - ZSeries.var(order)


def X_mv(w, beta, order):
    """z(1 - βwz)^{1/w}; z e^{-βz} at w = 0."""
    w, beta = Q(w), Q(beta)
    n = order - 1
    if w:
        body = ZSeries.from_dict({0: 1, 1: -beta * w}, n).pow_rational(1 / w)
    else:
        body = ZSeries.var(n, -beta).exp()
    return ZSeries([ZERO] + body.c)


def moebius_relation_check(w, beta, order):
    """X_inverse(z) - X_mv(z/(1+(w+1)βz))."""
    w, beta = Q(w), Q(beta)
    mob = ZSeries([ZERO] + [(-(w + 1) * beta) ** (k - 1) for k in range(1, order + 1)])
    return X_inverse(w, beta, order) - compose(X_mv(w, beta, order), mob)


def xdiff_check(w, beta, order):
    """∂X/∂β + ((w+2)z + (w+1)βz²) z ∂X/∂z for the inversion-lemma X."""
    w, beta = Q(w), Q(beta)
    X1 = X_inverse(w, 1, order)
    X = ZSeries([v * beta ** (k - 1) if k else ZERO for k, v in enumerate(X1.c)])
    dX = ZSeries([v * (k - 1) * beta ** (k - 2) if k >= 2 else ZERO for k, v in enumerate(X1.c)])
    poly = ZSeries.from_dict({1: w + 2, 2: (w + 1) * beta}, order)
    return dX + poly * X.euler()


def triple_hodge_spectral(params, order):
    return spectral_from_X(X_inverse(params.w, params.beta, order))


def triple_hodge_finiteness(params, order=10):
    return finiteness_check(triple_hodge_spectral(params, order), 4)


@dataclass
class TripleHodgeRun:
    params: TripleHodgeParams
    table_route: PSeries
    tau_route: PSeries = None

    def agree(self):
        if self.tau_route is None:
            return None
        return (self.tau_route - self.table_route).is_zero()


def triple_hodge_tau_route(params, hbar_max=2, W=8):
    """Stable part of the genus-graded Mariño-Vafa free energy, in q.

    p_k -> p_k(q̃) through the inversion-lemma X, then q̃_m = u^{-4m} q_m.
    """
    u, w, beta = params.u, params.w, params.beta
    if not u:
        raise HodgeError("the tau route needs u != 0")
    K = 2 * hbar_max + 2
    Z = mv_rhs(w, beta, W, K, relabel="extended")
    F = stable_part(free_energy(Z)).regrade(0, hbar_max)
    sd = spectral_from_X(X_inverse(w, beta, W + 1))
    forms = {}
    for k in range(1, W + 1):
        f = p_of_q(sd, k, W)
        forms[k] = LinearForm({m: c * u ** (-4 * m) for m, c in f.c.items()}, W)
    return F.substitute(forms)


def triple_hodge_pipeline(params, hbar_max=2, W=8):
    G = triple_hodge_G(params, hbar_max, W)
    tau = triple_hodge_tau_route(params, hbar_max, W) if params.u else None
    return TripleHodgeRun(params, G, tau)


def odd_support(series):
    """True when every monomial uses only odd-indexed variables."""
    return all(all(k % 2 for k in part) for part in series.monomials())
