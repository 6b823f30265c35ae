"""Hypergeometric KP tau functions and their genus expansion.

The tau function of data (ψ̂, ŷ) is

    Z = Σ_ν exp(Σ_□ ψ̂(ħ², ħ·c(□))) · s_ν(p) · s_ν({ŷ_k(ħ²)/ħ}),

with c(□) the content of a box.  ``F = log Z`` expands as
Σ ħ^{2g-2+n} F_{g,n} with F_{g,n} homogeneous of degree n in the p_k, so all
series produced here use the Euler grading ``ord = e + len(μ)``.
"""
import itertools
import math
from dataclasses import dataclass, field
from functools import partial

from gmpy2 import mpq

from . import partitions as P
from ._parallel import pmap
from .series import (HLaurent, PSeries, ZSeries, ZERO, ONE, Q, h_exp, S_of,
                     apply_S, s_inv_series, qstr, SeriesError)

FAMILIES = ("generic", "family-one", "family-two", "family-two-extended")


class TauError(ValueError):
    pass


@dataclass
class TauData:
    """Coefficient tables of ψ̂ and ŷ.

    ``psi[(k, m)]`` is the coefficient of ħ^{2m} y^k in ψ̂ and ``yhat[(k, m)]``
    that of ħ^{2m} z^k in ŷ.  Tables are exact for k <= ``order`` and
    m <= ``hbar2_order`` unless the matching ``*_complete`` flag says the
    table is the whole (polynomial) function.
    """

    psi: dict
    yhat: dict
    order: int
    hbar2_order: int
    family: str = "generic"
    source: dict = field(default_factory=dict)
    psi_complete: bool = False
    y_complete: bool = False

    def __post_init__(self):
        self.psi = {(int(k), int(m)): Q(v) for (k, m), v in self.psi.items() if Q(v)}
        self.yhat = {(int(k), int(m)): Q(v) for (k, m), v in self.yhat.items() if Q(v)}
        if self.family not in FAMILIES:
            raise TauError("unknown family tag %r" % self.family)
        if (0, 0) in self.psi:
            raise TauError("ψ̂ must vanish at ħ = 0, y = 0")
        if any(k < 0 or m < 0 for k, m in self.psi) or any(k < 1 or m < 0 for k, m in self.yhat):
            raise TauError("ŷ needs positive z-powers and all indices must be non-negative")
        self.validate()

    def validate(self):
        """Re-derive the tables from the recorded family parameters."""
        if self.family == "generic":
            return
        src = dict(self.source)
        build = _family_one_tables if self.family == "family-one" else _family_two_tables
        psi, yhat = build(order=self.order, hbar2_order=self.hbar2_order, **src)[:2]
        # coefficients can cancel to zero, and those are not stored
        psi = {k: v for k, v in psi.items() if v}
        yhat = {k: v for k, v in yhat.items() if v}
        if psi != self.psi or yhat != self.yhat:
            raise TauError("tables do not have the structural shape of %s" % self.family)

    def y_coeff(self, k, hi):
        """ŷ_k(ħ²) as an HLaurent through ħ^hi."""
        self._need_y(k, hi)
        return HLaurent({2 * m: v for (kk, m), v in self.yhat.items() if kk == k}, hi)

    def _need_y(self, k, hi):
        if self.y_complete:
            return
        if k > self.order or hi > 2 * self.hbar2_order + 1:
            raise TauError("ŷ table too short for z^%d through ħ^%d" % (k, hi))

    def _need_psi(self, hi):
        if self.psi_complete:
            return
        if hi > self.order or hi > 2 * self.hbar2_order + 1:
            raise TauError("ψ̂ table too short for ħ^%d" % hi)

    def spectral_psi(self):
        """ψ(y) = ψ̂(0, y) as a coefficient dict."""
        return {k: v for (k, m), v in self.psi.items() if m == 0}

    def spectral_y(self):
        return {k: v for (k, m), v in self.yhat.items() if m == 0}

    def to_json(self):
        return {
            "family": self.family,
            "order": self.order,
            "hbar2_order": self.hbar2_order,
            "psi": {"%d,%d" % k: qstr(v) for k, v in sorted(self.psi.items())},
            "yhat": {"%d,%d" % k: qstr(v) for k, v in sorted(self.yhat.items())},
            "source": {k: _jsonable(v) for k, v in sorted(self.source.items())},
        }


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [qstr(x) for x in v]
    return qstr(v)


def _poly(p):
    return [Q(x) for x in p] if p is not None else [ONE]


def _ratio_series(num, den, n):
    num, den = _poly(num), _poly(den)
    if not den[0]:
        raise TauError("denominator vanishes at the origin")
    f = ZSeries(num + [ZERO] * (n + 1)).truncate(n)
    g = ZSeries(den + [ZERO] * (n + 1)).truncate(n)
    return f * g.inverse()


def _log_ratio_series(num, den, n):
    num, den = _poly(num), _poly(den)
    if num[0] != den[0] or not num[0]:
        raise TauError("log(A/B) needs A(0) = B(0) != 0")
    f = ZSeries([x / num[0] for x in num] + [ZERO] * (n + 1)).truncate(n)
    g = ZSeries([x / den[0] for x in den] + [ZERO] * (n + 1)).truncate(n)
    return f.log() - g.log()


def family_one(P1=(0,), P2=(1,), P3=(1,), R1=(0, 1), R2=(1,), order=8, hbar2_order=4):
    """ψ̂ = 𝒮(ħ d/dy) P1(y) + log(P2/P3), ŷ = R1/R2 (ħ-independent)."""
    psi, yhat, src, pc, yc = _family_one_tables(P1, P2, P3, R1, R2, order, hbar2_order)
    return TauData(psi, yhat, order, hbar2_order, "family-one", src, pc, yc)


def _family_one_tables(P1, P2, P3, R1, R2, order, hbar2_order):
    p1 = _poly(P1)
    if p1 and p1[0]:
        raise TauError("P1 must vanish at 0")
    psi = {}
    sp = apply_S(1, p1, "forward", 2 * hbar2_order, basis="derivative")
    for k, h in enumerate(sp):
        for e, v in h.items():
            psi[(k, e // 2)] = v
    lg = _log_ratio_series(P2, P3, order)
    for k, v in enumerate(lg.c):
        if v:
            psi[(k, 0)] = psi.get((k, 0), ZERO) + v
    ys = _ratio_series(R1, R2, order)
    if ys[0]:
        raise TauError("R1 must vanish at 0")
    yhat = {(k, 0): v for k, v in enumerate(ys.c) if v}
    src = {"P1": tuple(p1), "P2": tuple(_poly(P2)), "P3": tuple(_poly(P3)),
           "R1": tuple(_poly(R1)), "R2": tuple(_poly(R2))}
    return (psi, yhat, src, len(_poly(P2)) == 1 and len(_poly(P3)) == 1,
            len(_poly(R2)) == 1)


def family_two(alpha=1, R1=(0, 1), R2=(1,), R3=(1,), R4=(1,), lam=1, order=8, hbar2_order=4):
    """ψ̂ = α·y, ŷ = λR1/R2 + λ𝒮(λ⁻¹ħ z d/dz)⁻¹ log(R3/R4).

    ``lam = 1`` is the basic family, other values the torus-extended one.
    """
    psi, yhat, src, pc, yc = _family_two_tables(alpha, R1, R2, R3, R4, lam, order, hbar2_order)
    fam = "family-two" if src["lam"] == 1 else "family-two-extended"
    return TauData(psi, yhat, order, hbar2_order, fam, src, pc, yc)


def _family_two_tables(alpha, R1, R2, R3, R4, lam, order, hbar2_order):
    alpha, lam = Q(alpha), Q(lam)
    if not lam:
        raise TauError("λ must be non-zero")
    psi = {(1, 0): alpha} if alpha else {}
    rs = _ratio_series(R1, R2, order)
    if rs[0]:
        raise TauError("R1 must vanish at 0")
    ls = _log_ratio_series(R3, R4, order)
    inv = s_inv_series(hbar2_order)
    yhat = {}
    for k in range(1, order + 1):
        if rs[k]:
            yhat[(k, 0)] = lam * rs[k]
        if ls[k]:
            for m in range(hbar2_order + 1):
                v = lam * ls[k] * inv[m] * (Q(k) / lam) ** (2 * m)
                yhat[(k, m)] = yhat.get((k, m), ZERO) + v
    src = {"alpha": alpha, "R1": tuple(_poly(R1)), "R2": tuple(_poly(R2)),
           "R3": tuple(_poly(R3)), "R4": tuple(_poly(R4)), "lam": lam}
    trivial_log = len(_poly(R3)) == 1 and len(_poly(R4)) == 1
    return psi, yhat, src, True, len(_poly(R2)) == 1 and trivial_log


def naive_hodge_data(order=8, hbar2_order=4):
    """ψ̂ = y, ŷ = z."""
    return family_two(1, (0, 1), (1,), order=order, hbar2_order=hbar2_order)


def mv_tau_data(w, beta, order=8, hbar2_order=4, relabel="lemma"):
    """Data whose tau function has the hook-product form of :func:`mv_rhs`.

    ``relabel="lemma"``: ψ̂ = y/w, ŷ_k = (βw)^k / (k 𝒮(ħk)).
    ``relabel="extended"``: ψ̂ = βy, ŷ_k = (βw)^{k-1} / (k 𝒮(ħβwk)).
    """
    w, beta = Q(w), Q(beta)
    if not w or not beta:
        raise TauError("w and β must be non-zero")
    R4 = (ONE, -beta * w)
    if relabel == "lemma":
        return family_two(1 / w, (0,), (1,), (1,), R4, 1, order, hbar2_order)
    if relabel == "extended":
        return family_two(beta, (0,), (1,), (1,), R4, 1 / (beta * w), order, hbar2_order)
    raise TauError("unknown relabelling %r" % relabel)


def content_weight(data, nu, hbar_max):
    """exp(Σ_□ ψ̂(ħ², ħ c(□))) through ħ^hbar_max."""
    nu = tuple(nu)
    cs = list(P.contents(nu).values()) if nu else []
    if not data.psi_complete:
        data._need_psi(hbar_max)
    expo = {}
    for (k, m), v in data.psi.items():
        e = k + 2 * m
        if e > hbar_max:
            continue
        pk = sum(c ** k for c in cs)
        if pk:
            expo[e] = expo.get(e, ZERO) + v * pk
    return h_exp(HLaurent(expo, hbar_max), hbar_max)


def _tau_coefficient(args):
    data, nu, hcap, W = args
    hi = hcap + sum(nu)
    vals = {k: data.y_coeff(k, hi + 1) * HLaurent({-1: 1}) for k in range(1, sum(nu) + 1)}
    vals = {k: v.truncate(hi) for k, v in vals.items()}
    cw = content_weight(data, nu, hi)
    return nu, (cw * P.schur_specialize(nu, vals)).truncate(hcap)


def tau_coefficients(data, W, hcap):
    """a_ν in Z = Σ a_ν s_ν for |ν| <= W, exact through ħ^hcap."""
    data._need_y(W, hcap + W + 1)
    jobs = [(data, nu, hcap, W) for nu in P.partitions_upto(W)]
    return dict(pmap(_tau_coefficient, jobs))


def build_tau(data, W=8, hcap=6):
    """Z as a PSeries in p, weight <= W, Euler order e + len(μ) <= hcap."""
    coeffs = tau_coefficients(data, W, hcap)
    return tau_from_schur(coeffs, W, hcap)


def tau_from_schur(coeffs, W, hcap):
    terms = {}
    for nu, a in coeffs.items():
        for mu, c in P._schur_terms(nu):
            if not c:
                continue
            for e, v in a.items():
                if e + len(mu) <= hcap:
                    key = (mu, e)
                    terms[key] = terms.get(key, ZERO) + c * v
    return PSeries(W, terms, hcap, sigma=1)


def free_energy(Z):
    return Z.log()


def stable_part(F, check=True):
    """Drop the ħ^{-1} and ħ^0 parts of F = log Z.

    With ``check`` the dropped parts must be exactly the one- and two-point
    genus-zero terms.
    """
    if check:
        for (part, e), v in F.items():
            if e < -1 or (e == -1 and len(part) != 1) or (e == 0 and len(part) != 2):
                raise TauError("unexpected term ħ^%d p%s in the unstable range" % (e, part))
    return F.drop_hbar_below(1)


def unstable_parts(F):
    """(ħ^{-1} part, ħ^0 part) of F as ħ-free PSeries."""
    return F.hbar_part(-1), F.hbar_part(0)


def rescale_data(lam, data):
    """(ψ̂, ŷ) -> (ψ̂(λ⁻²ħ², λ⁻¹y), λŷ(λ⁻²ħ², z)); H_{g,n} scales by λ^{2-2g-n}."""
    lam = Q(lam)
    if not lam:
        raise TauError("λ must be non-zero")
    psi = {(k, m): v * lam ** (-k - 2 * m) for (k, m), v in data.psi.items()}
    yhat = {(k, m): v * lam ** (1 - 2 * m) for (k, m), v in data.yhat.items()}
    src = dict(data.source)
    fam = data.family
    if fam in ("family-two", "family-two-extended"):
        src["alpha"] = src["alpha"] / lam
        src["lam"] = src["lam"] * lam
        fam = "family-two" if src["lam"] == 1 else "family-two-extended"
    elif fam == "family-one":
        src["P1"] = tuple(v * lam ** (-k) for k, v in enumerate(src["P1"]))
        src["P2"] = tuple(v * lam ** (-k) for k, v in enumerate(src["P2"]))
        src["P3"] = tuple(v * lam ** (-k) for k, v in enumerate(src["P3"]))
        src["R1"] = tuple(v * lam for v in src["R1"])
    return TauData(psi, yhat, data.order, data.hbar2_order, fam, src,
                   data.psi_complete, data.y_complete)


def _multiset_factor(part):
    out = 1
    for k in set(part):
        out *= math.factorial(part.count(k))
    return out


def extract_Hgn(F, X, g, n, order, coords="X"):
    """H_{g,n} read off the ħ^{2g-2+n} part of F.

    Each p_μ with len(μ) = n contributes Σ_{σ∈S_n} Π_i X_i^{μ_σ(i)}, so the
    X-coefficient at (k_1..k_n) is the coefficient of p_{sort(k)} times the
    number of rearrangements fixing k.  ``order`` caps the total degree
    Σ k_i.  With ``coords="z"`` every X_i is replaced by the series X(z_i).
    Returns {(k_1..k_n): coefficient}.
    """
    if n < 1 or g < 0 or 2 * g - 2 + n < -1:
        raise TauError("need n >= 1 and 2g - 2 + n >= -1")
    if F.wcap < order:
        raise TauError("F known through weight %d only" % F.wcap)
    e = 2 * g - 2 + n
    if e + F.sigma * n > F.hcap:
        raise TauError("F truncated below ħ^%d for %d points" % (e, n))
    table = {}
    for (part, ee), v in F.items():
        if len(part) != n or sum(part) > order:
            continue
        if (ee - n) % 2 or ee - n < -2:
            raise TauError("residual ħ dependence: ħ^%d p%s" % (ee, list(part)))
        if ee != e:
            continue
        c = v * _multiset_factor(part)
        for perm in set(itertools.permutations(part)):
            table[perm] = table.get(perm, ZERO) + c
    if coords == "X":
        return {k: v for k, v in sorted(table.items()) if v}
    if coords == "z":
        return substitute_slots(table, X, order)
    raise TauError("coords must be 'X' or 'z'")


def substitute_slots(table, X, order):
    """Σ c Π_i X(z_i)^{k_i}, truncated at total z-degree ``order``."""
    if X.order < order:
        raise TauError("X known through z^%d only" % X.order)
    powers = {}
    Xt = X.truncate(order)
    out = {}
    for ks, c in table.items():
        acc = {(): c}
        for k in ks:
            if k not in powers:
                powers[k] = Xt ** k
            pk = powers[k]
            new = {}
            for m, a in acc.items():
                room = order - sum(m)
                for j in range(k, room + 1):
                    if pk[j]:
                        key = m + (j,)
                        new[key] = new.get(key, ZERO) + a * pk[j]
            acc = new
        for m, a in acc.items():
            out[m] = out.get(m, ZERO) + a
    return {k: v for k, v in sorted(out.items()) if v}
