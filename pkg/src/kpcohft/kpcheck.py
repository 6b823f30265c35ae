"""Integrability verdicts: KP equations, Hirota bilinear identity, Plücker relations.

Every check returns a :class:`ResidualReport`.  A report passes when each
residual coefficient inside the exact window of the input vanishes, and the
window is non-empty.
"""
import itertools
from dataclasses import dataclass, field

from gmpy2 import mpq

from . import partitions as P
from .series import PSeries, HLaurent, ZERO, ONE, HINF, Q, qstr, fact


class KPCheckError(ValueError):
    pass


@dataclass
class ResidualReport:
    label: str
    passed: bool
    weight_window: int
    hbar_window: object
    nonzero: list = field(default_factory=list)
    residual: object = None
    checked: int = 0

    def to_json(self, limit=20):
        return {
            "equation": self.label,
            "pass": self.passed,
            "window": {"weight": self.weight_window,
                       "hbar": None if self.hbar_window is None or self.hbar_window >= HINF
                       else self.hbar_window},
            "checked": self.checked,
            "nonzero": self.nonzero[:limit],
        }

    def __bool__(self):
        return self.passed


def _series_report(label, res):
    if res.wcap < 0:
        raise KPCheckError("%s: truncation too short to evaluate" % label)
    nonzero = [{"monomial": list(part), "hbar": e, "value": qstr(v)} for (part, e), v in res.items()]
    return ResidualReport(label, not nonzero, res.wcap, res.hcap, nonzero, res)


def _need(F, weight):
    if F.wcap < weight:
        raise KPCheckError("weight cap %d too small for this equation" % F.wcap)


def _kp1(F, scale):
    """c1 F_22 - c2 F_31 + c3 F_1111 + c4 (F_11)²; ``scale[k]`` converts ∂_p to ∂ of the
    variable the equation is written in."""
    s = scale
    F11 = F.deriv(1, 2).scale(s[1] ** 2)
    return (F.deriv(2, 2).scale(s[2] ** 2), F.deriv(3).deriv(1).scale(s[3] * s[1]),
            F.deriv(1, 4).scale(s[1] ** 4), F11)


def kp_residual_q1(F):
    """F_{q2q2} - F_{q3q1} + F_{q1⁴}/12 + (F_{q1q1})²/2."""
    _need(F, 4)
    a, b, c, d = _kp1(F, {1: 1, 2: 1, 3: 1})
    return _series_report("KP1(q)", a - b + c.scale(mpq(1, 12)) + (d * d).scale(mpq(1, 2)))


def kp_residual_q2(F):
    """F_{q3q2} - F_{q4q1} + F_{q2q1³}/6 + F_{q2q1} F_{q1q1}."""
    _need(F, 5)
    res = (F.deriv(3).deriv(2) - F.deriv(4).deriv(1) + F.deriv(2).deriv(1, 3).scale(mpq(1, 6))
           + F.deriv(2).deriv(1) * F.deriv(1, 2))
    return _series_report("KP2(q)", res)


def kp_residual_t(F, which=1):
    """The t-variable equations for F written in p_k = k t_k.

    1: 3F_{t2t2} - 4F_{t3t1} + F_{t1⁴} + 6(F_{t1t1})²
    2: 2F_{t3t2} - 3F_{t4t1} + F_{t2t1³} + 6F_{t2t1}F_{t1t1}
    """
    if which == 1:
        _need(F, 4)
        a, b, c, d = _kp1(F, {1: 1, 2: 2, 3: 3})
        res = a.scale(3) - b.scale(4) + c + (d * d).scale(6)
        return _series_report("KP1(t)", res)
    if which == 2:
        _need(F, 5)
        F21 = F.deriv(2).deriv(1).scale(2)
        res = (F.deriv(3).deriv(2).scale(2 * 6) - F.deriv(4).deriv(1).scale(3 * 4)
               + F.deriv(2).deriv(1, 3).scale(2) + (F21 * F.deriv(1, 2)).scale(6))
        return _series_report("KP2(t)", res)
    raise KPCheckError("which must be 1 or 2")


# ---------------------------------------------------------------------------
# Plücker relations on Schur coefficients

def _frob_relations(cap):
    """Index quadruples (α1 > α2 >= 0, β1 > β2 >= 0) with |ν| <= cap."""
    out = []
    for a1 in range(cap):
        for a2 in range(a1):
            for b1 in range(cap):
                for b2 in range(b1):
                    size = a1 + a2 + b1 + b2 + 2
                    if size <= cap:
                        out.append(((a1, a2), (b1, b2)))
    return out


def pluecker_check(Z, cap):
    """a_{(α1α2|β1β2)} a_∅ = a_{(α1|β1)} a_{(α2|β2)} - a_{(α1|β2)} a_{(α2|β1)}.

    The smallest instance is a_{22}a_∅ - a_{21}a_1 + a_2 a_{11} = 0; the others
    add hooks to the Frobenius coordinates.
    """
    if cap > Z.wcap:
        raise KPCheckError("size cap %d beyond the weight window %d" % (cap, Z.wcap))
    coeffs = {}
    for n in range(cap + 1):
        coeffs.update(P.schur_coefficients(Z, n))

    def a(alpha, beta):
        return coeffs[P.from_frobenius(alpha, beta)]

    empty = coeffs[()]
    nonzero = []
    checked = 0
    low_hi = None
    for (a1, a2), (b1, b2) in _frob_relations(cap):
        lhs = a((a1, a2), (b1, b2)) * empty
        rhs = a((a1,), (b1,)) * a((a2,), (b2,)) - a((a1,), (b2,)) * a((a2,), (b1,))
        diff = lhs - rhs
        checked += 1
        if diff.hi is not None:
            low_hi = diff.hi if low_hi is None else min(low_hi, diff.hi)
        if not diff.is_zero():
            nonzero.append({"nu": list(P.from_frobenius((a1, a2), (b1, b2))),
                            "value": diff.to_json()})
    return ResidualReport("Pluecker", not nonzero, cap, low_hi, nonzero, None, checked)


# ---------------------------------------------------------------------------
# Hirota bilinear identity

def _ymonos(C):
    """Multiplicity vectors (m_1..m_C) with Σ k m_k <= C."""
    out = []
    for part in P.partitions_upto(C):
        out.append(tuple(part.count(k) for k in range(1, C + 1)))
    return out


def _yweight(m):
    return sum((k + 1) * v for k, v in enumerate(m))


def _ymul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _elementary_schur(coeffs, C):
    """p_j(a) from exp(Σ a_k z^k) = Σ p_j z^j, a_k = coeffs[k] · (formal k-th symbol).

    Returns {j: {multiplicity vector: rational}}.
    """
    zero = (0,) * C
    out = {0: {zero: ONE}}
    # p_j = (1/j) Σ_k k a_k p_{j-k}
    for j in range(1, C + 1):
        acc = {}
        for k in range(1, j + 1):
            unit = tuple(1 if i == k - 1 else 0 for i in range(C))
            for m, c in out[j - k].items():
                nm = _ymul(m, unit)
                acc[nm] = acc.get(nm, ZERO) + mpq(k, j) * coeffs[k] * c
        out[j] = {m: c for m, c in acc.items() if c}
    return out


def hirota_residual(F, ycap=4):
    """Coefficients of Σ_j p_j(-2y) p_{j+1}(∂̃_y) [τ(t+y)τ(t-y)] / τ(t)².

    F = log τ is given in p_k = k t_k; ∂̃ = (∂_{y1}, ∂_{y2}/2, ...).  Each
    y-monomial coefficient is a series in p and must vanish.
    """
    C = ycap + 1
    if C > F.wcap:
        raise KPCheckError("y-cap %d needs weight cap >= %d" % (ycap, C))
    monos = _ymonos(C)
    zero = (0,) * C
    # S = F(t+y) + F(t-y) - 2F(t) = Σ_{|α| even > 0} 2 y^α/α! ∂_t^α F
    S = {}
    for m in monos:
        deg = sum(m)
        if deg == 0 or deg % 2:
            continue
        d = F
        denom = ONE
        for k, mk in enumerate(m, start=1):
            if mk:
                d = d.deriv(k, mk).scale(mpq(k) ** mk)
                denom *= fact(mk)
        S[m] = d.scale(2 / denom)
    # E = exp(S) as a y-polynomial truncated at y-weight C
    one = PSeries.const(F.W, 1, F.hcap, F.sigma)
    E = {zero: one}
    power = {zero: one}
    for n in range(1, C // 2 + 1):
        new = {}
        for m1, v1 in power.items():
            for m2, v2 in S.items():
                m = _ymul(m1, m2)
                if _yweight(m) <= C:
                    t = v1 * v2
                    new[m] = new[m] + t if m in new else t
        power = new
        for m, v in power.items():
            t = v.scale(1 / fact(n))
            E[m] = E[m] + t if m in E else t
    minus2 = {k: mpq(-2) for k in range(1, C + 1)}
    tilde = {k: mpq(1, k) for k in range(1, C + 1)}
    pj_y = _elementary_schur(minus2, C)
    pj_d = _elementary_schur(tilde, C)
    H = {}
    for j in range(0, C):
        for dm, dc in pj_d[j + 1].items():
            # apply dc · ∂^dm to E
            for em, ev in E.items():
                if any(e < d for e, d in zip(em, dm)):
                    continue
                rest = tuple(e - d for e, d in zip(em, dm))
                fall = ONE
                for e, d in zip(em, dm):
                    fall *= fact(e) / fact(e - d)
                for ym, yc in pj_y[j].items():
                    m = _ymul(rest, ym)
                    if _yweight(m) > ycap:
                        continue
                    t = ev.scale(dc * fall * yc)
                    H[m] = H[m] + t if m in H else t
    nonzero = []
    wmin, hmin = F.wcap, F.hcap
    for m in sorted(H, key=lambda m: (_yweight(m), m)):
        v = H[m]
        wmin, hmin = min(wmin, v.wcap), min(hmin, v.hcap)
        if not v.is_zero():
            nonzero.append({"y": _ylabel(m), "terms": len(v.terms)})
    return ResidualReport("Hirota", not nonzero, wmin, hmin, nonzero, H, len(H))


def _ylabel(m):
    return "*".join("y%d^%d" % (k, v) if v > 1 else "y%d" % k
                    for k, v in enumerate(m, start=1) if v) or "1"


def hirota_coefficient(report, m):
    """The residual series attached to the y-monomial with multiplicities m."""
    m = tuple(m) + (0,) * (len(next(iter(report.residual))) - len(m))
    return report.residual.get(m)
