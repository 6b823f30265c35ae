"""Topological recursion on rational spectral curves with simple ramification.

A curve is a pair of rational differentials dx = f(z) dz, dy = g(z) dz on the
projective line, with B = dz₁dz₂/(z₁ - z₂)².  For 2g - 2 + n > 0 the
correlators are stored exactly as finite sums

    ω_{g,n} = Σ c · Π_i dz_i / (z_i - a_i)^{k_i},     k_i >= 2,

each a_i a ramification point.  Residues are taken on truncated Laurent
series in the local coordinate ε = z - a, never on symbolic global forms.
The recursion kernel at a is ∫_a^z B(·, z₀) / ((y(z) - y(σ(z))) dx(z)).
"""
import itertools
import re
from dataclasses import dataclass, field

from gmpy2 import mpq

from .series import (RatFn, LocalSeries, ZSeries, BiSeries, ZERO, ONE, Q, qstr,
                     compose, reversion, all_residues, SeriesError)


class SpectralError(ValueError):
    pass


class DepthError(SpectralError):
    """The local expansions are too short for the requested residues."""


# ---------------------------------------------------------------------------
# curves

def _rat(f):
    if isinstance(f, RatFn):
        return f
    return RatFn((Q(f),))


def _order_at_infinity(f):
    """Order of vanishing of f(z)dz at z = ∞ (negative for a pole)."""
    return -f.degree_at_infinity() - 2


class SpectralCurve:
    """dx = ``dx``·dz, dy = ``dy``·dz with every zero of dx rational and simple."""

    def __init__(self, dx, dy, name="custom"):
        self.dx, self.dy = _rat(dx), _rat(dy)
        self.name = name
        if self.dx.is_zero() or self.dy.is_zero():
            raise SpectralError("dx and dy must be non-zero")
        try:
            zx = self.dx.zeros()
            zy = self.dy.zeros()
            py = self.dy.poles()
        except SeriesError as exc:
            raise SpectralError("rejected curve: %s" % exc) from None
        for a, mult in zx.items():
            if mult != 1:
                raise SpectralError("dx has a zero of order %d at %s" % (mult, qstr(a)))
            if a in zy:
                raise SpectralError("dx and dy share the zero %s" % qstr(a))
            if a in py:
                raise SpectralError("dy has a pole at the ramification point %s" % qstr(a))
        self.ramification = sorted(zx)
        ox = _order_at_infinity(self.dx)
        if ox > 1:
            raise SpectralError("dx has a zero of order %d at infinity" % ox)
        self.ramified_at_infinity = ox == 1
        if self.ramified_at_infinity:
            oy = _order_at_infinity(self.dy)
            if oy > 0:
                raise SpectralError("dx and dy share the zero at infinity")
            if oy < 0:
                raise SpectralError("dy has a pole at the ramification point at infinity")

    def points(self):
        out = list(self.ramification)
        if self.ramified_at_infinity:
            out.append("inf")
        return out

    def scaled_dy(self, lam):
        return SpectralCurve(self.dx, self.dy * Q(lam), self.name)

    def to_json(self):
        return {"name": self.name,
                "dx": {"num": [qstr(v) for v in self.dx.num], "den": [qstr(v) for v in self.dx.den]},
                "dy": {"num": [qstr(v) for v in self.dy.num], "den": [qstr(v) for v in self.dy.den]},
                "ramification": [p if p == "inf" else qstr(p) for p in self.points()]}

    def __repr__(self):
        return "SpectralCurve(%s, dx=%r, dy=%r)" % (self.name, self.dx, self.dy)


_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)\*?)?(?:z(?:(?:\^|\*\*)(\d+))?)?$")


def parse_polynomial(text):
    """Coefficient tuple of a polynomial in z written as a sum of monomials."""
    s = text.replace(" ", "")
    if not s:
        raise SpectralError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    coeffs = {}
    pieces = re.findall(r"([+-])([^+-]*)", s)
    if "".join(a + b for a, b in pieces) != s:
        raise SpectralError("cannot parse polynomial %r" % text)
    for sign, body in pieces:
        m = _TERM.match(body)
        if not body or not m or (m.group(1) is None and "z" not in body):
            raise SpectralError("cannot parse term %r in %r" % (sign + body, text))
        c = mpq(m.group(1)) if m.group(1) else ONE
        if "z" in body:
            deg = int(m.group(2)) if m.group(2) else 1
        else:
            deg = 0
        if sign == "-":
            c = -c
        coeffs[deg] = coeffs.get(deg, ZERO) + c
    top = max(coeffs)
    return tuple(coeffs.get(k, ZERO) for k in range(top + 1))


def parse_curve(dx_num, dx_den="1", dy_num="1", dy_den="1", name="custom"):
    dx = RatFn(parse_polynomial(dx_num), parse_polynomial(dx_den))
    dy = RatFn(parse_polynomial(dy_num), parse_polynomial(dy_den))
    return SpectralCurve(dx, dy, name)


def airy_curve():
    """x = z², y = z."""
    return SpectralCurve(RatFn((0, 2)), RatFn((1,)), "airy")


def naive_hodge_curve():
    """x = log z - z, y = z."""
    return SpectralCurve(RatFn((1, -1), (0, 1)), RatFn((1,)), "naive-hodge")


def triple_hodge_curve(w, beta):
    """dx = dz/(z(1+βz)(1+(w+1)βz)), dy = dz/((1+βz)(1+(w+1)βz)).

    These are the coordinates in which X is the inverse of the binomial
    series; the only ramification point is z = ∞.
    """
    w, beta = Q(w), Q(beta)
    b2 = (w + 1) * beta
    den = (ONE, beta + b2, beta * b2)
    return SpectralCurve(RatFn((1,), (ZERO,) + den), RatFn((1,), den), "triple-hodge")


NAMED_CURVES = {"airy": airy_curve, "naive-hodge": naive_hodge_curve,
                "triple-hodge": triple_hodge_curve}


def named_curve(name, **params):
    try:
        build = NAMED_CURVES[name]
    except KeyError:
        raise SpectralError("unknown curve %r" % name) from None
    return build(**params)


def _compose_rat(f, g):
    """f(g(z)) for rational f and g."""
    def poly_at(p):
        out = RatFn((ZERO,))
        for c in reversed(p):
            out = out * g + c
        return out
    num, den = poly_at(f.num), poly_at(f.den)
    return num / den


def curve_from_data(data):
    """Spectral curve of family-one or family-two tau data at ħ = 0."""
    src = data.source
    z = RatFn((0, 1))
    if data.family == "family-one":
        y = RatFn(src["R1"], src["R2"])
        P1, P2, P3 = (RatFn(src[k]) for k in ("P1", "P2", "P3"))
        dpsi = P1.deriv() + P2.deriv() / P2 - P3.deriv() / P3
        dy = y.deriv()
        dx = 1 / z - _compose_rat(dpsi, y) * dy
    elif data.family in ("family-two", "family-two-extended"):
        lam = src["lam"]
        R3, R4 = RatFn(src["R3"]), RatFn(src["R4"])
        dy = (RatFn(src["R1"], src["R2"]).deriv() + R3.deriv() / R3 - R4.deriv() / R4) * lam
        dx = 1 / z - dy * src["alpha"]
    else:
        raise SpectralError("no closed-form curve for %s data" % data.family)
    return SpectralCurve(dx, dy, data.family)


# ---------------------------------------------------------------------------
# local data at a ramification point

def _zs(ls, n):
    """Coefficients ε^0..ε^n of a series without poles."""
    if ls.val < 0:
        raise SpectralError("unexpected pole")
    return ZSeries([ls.coeff(e) for e in range(n + 1)])


def local_involution(curve, a, depth):
    """σ(a+ε) - a as a ZSeries in ε through ε^depth.

    With x(a+ε) - x(a) = c ε²(1 + O(ε)) = c ζ², ζ = ε·(1+O(ε))^{1/2} is a
    series and σ sends ζ to -ζ, so σ = ζ⁻¹(-ζ(ε)).
    """
    a = Q(a)
    f = curve.dx.local(a, depth + 1)
    if f.val != 1:
        raise SpectralError("%s is not a simple zero of dx" % qstr(a))
    h = _zs(f, depth).integrate()  # x(a+ε) - x(a), through ε^{depth+1}
    g = ZSeries(h.c[2:])
    c2 = g[0]
    u = (g * (1 / c2)).pow_rational(mpq(1, 2))
    zeta = ZSeries([ZERO] + u.c)
    return compose(reversion(zeta), -zeta).truncate(depth)


@dataclass
class LocalData:
    a: object
    depth: int
    eps: LocalSeries
    sig: LocalSeries
    dsig: LocalSeries
    xr: LocalSeries
    Y: ZSeries
    Ysig: LocalSeries
    kernel: LocalSeries  # 1 / ((y(ε) - y(σ(ε))) · x'(ε))
    cache: dict = field(default_factory=dict)


def local_data(curve, a, depth):
    a = Q(a)
    n = depth + 2
    sigma = local_involution(curve, a, n)
    eps = LocalSeries(1, [ONE], n + 1)
    sig = LocalSeries.from_zseries(sigma)
    dsig = LocalSeries.from_zseries(sigma.deriv())
    xr = curve.dx.local(a, n)
    Y = _zs(curve.dy.local(a, n), n - 1).integrate()
    Ysig = compose(Y, sigma)
    ydiff = LocalSeries.from_zseries(Y.truncate(Ysig.order) - Ysig)
    kernel = (ydiff * xr).inverse()
    return LocalData(a, depth, eps, sig, dsig, xr, Y, LocalSeries.from_zseries(Ysig), kernel)


# ---------------------------------------------------------------------------
# correlators

@dataclass
class Correlator:
    """ω_{g,n} = Σ terms[labels] Π_i dz_i/(z_i - a_i)^{k_i}, labels[i] = (a_i, k_i)."""

    g: int
    n: int
    terms: dict

    def __call__(self, *zs):
        """The coefficient of dz₁⋯dz_n at a point."""
        if len(zs) != self.n:
            raise SpectralError("ω_{%d,%d} takes %d points" % (self.g, self.n, self.n))
        zs = [Q(z) for z in zs]
        total = ZERO
        for labels, c in self.terms.items():
            v = c
            for z, (a, k) in zip(zs, labels):
                v /= (z - a) ** k
            total += v
        return total

    def scale(self, s):
        s = Q(s)
        return Correlator(self.g, self.n, {k: v * s for k, v in self.terms.items() if v * s})

    def is_symmetric(self):
        for perm in itertools.permutations(range(self.n)):
            for labels, c in self.terms.items():
                if self.terms.get(tuple(labels[i] for i in perm)) != c:
                    return False
        return True

    def max_pole(self):
        return max((k for labels in self.terms for _, k in labels), default=0)

    def to_json(self):
        rows = []
        for labels, c in sorted(self.terms.items()):
            rows.append({"poles": [[qstr(a), k] for a, k in labels], "coeff": qstr(c)})
        return {"g": self.g, "n": self.n, "terms": rows}


def _merge(k1, k2):
    return tuple(b if a is None else a for a, b in zip(k1, k2))


def _acc(out, key, val):
    out[key] = out[key] + val if key in out else val


def default_depth(g, n):
    return 6 * (2 * g - 2 + n) + 10


class CorrelatorTable:
    """Lazily computed ω_{g,n} of a curve, memoised."""

    def __init__(self, curve, depth=None):
        if curve.ramified_at_infinity:
            raise SpectralError("recursion at the point at infinity is not supported; "
                                "move it to a finite point by a Möbius change of z")
        if not curve.ramification:
            raise SpectralError("the curve has no ramification points")
        self.curve = curve
        self.depth = depth
        self._omega = {}
        self._local = {}
        self.override = {}

    def local(self, a, depth):
        key = (a, depth)
        if key not in self._local:
            self._local[key] = local_data(self.curve, a, depth)
        return self._local[key]

    def _depth(self, g, n):
        return self.depth if self.depth is not None else default_depth(g, n)

    def omega(self, g, n):
        if (g, n) in self.override:
            return self.override[(g, n)]
        if 2 * g - 2 + n <= 0:
            raise SpectralError("ω_{%d,%d} is unstable" % (g, n))
        if (g, n) not in self._omega:
            self._omega[(g, n)] = self._recurse(g, n)
        return self._omega[(g, n)]

    # -- local evaluation ----------------------------------------------

    def _slot(self, ld, label, which):
        key = (label, which)
        if key not in ld.cache:
            b, k = label
            s, ds = (ld.eps, None) if which == "e" else (ld.sig, ld.dsig)
            c = ld.a - b
            base = s ** (-k) if c == 0 else (s + c).inverse() ** k
            ld.cache[key] = base if ds is None else base * ds
        return ld.cache[key]

    def _bergman_local(self, ld, which, target, n):
        """B(point, z_target) expanded in ε: Σ_m (m+1) s^m s' dz_t/(z_t - a)^{m+2}."""
        s, ds = (ld.eps, None) if which == "e" else (ld.sig, ld.dsig)
        out = {}
        power = LocalSeries(0, [ONE], s.prec)
        for m in range(ld.depth + 1):
            v = power * (m + 1) if ds is None else power * ds * (m + 1)
            key = [None] * n
            key[target] = (ld.a, m + 2)
            out[tuple(key)] = v
            power = power * s
        return out

    def _local_eval(self, ld, g, m, points, targets, n):
        """ω_{g,m} with its first slots at the local points ('e' for ε, 's' for
        σ(ε)) and the remaining ones at the global slots ``targets``."""
        if (g, m) == (0, 1):
            which, = points
            ys = LocalSeries.from_zseries(ld.Y) if which == "e" else ld.Ysig
            return {(None,) * n: ys * ld.xr}
        if (g, m) == (0, 2):
            if len(points) == 2:
                return {(None,) * n: (ld.eps - ld.sig) ** (-2) * ld.dsig}
            return self._bergman_local(ld, points[0], targets[0], n)
        out = {}
        for labels, c in self.omega(g, m).terms.items():
            f = None
            for lab, p in zip(labels, points):
                t = self._slot(ld, lab, p)
                f = t if f is None else f * t
            key = [None] * n
            for lab, t in zip(labels[len(points):], targets):
                key[t] = lab
            _acc(out, tuple(key), f * c)
        return out

    def _product(self, A, B):
        out = {}
        for k1, v1 in A.items():
            for k2, v2 in B.items():
                _acc(out, _merge(k1, k2), v1 * v2)
        return out

    def recursion_input(self, ld, g, n, unstable=False):
        """ω_{g-1,n+2}(ε, σε, z) + Σ' ω_{g1}(ε, z_I) ω_{g2}(σε, z_J) over the n global
        slots; ``unstable`` adds the terms with an ω_{0,1} factor."""
        out = {}
        slots = list(range(n))
        if g >= 1 and 2 * (g - 1) + n >= 0:
            for k, v in self._local_eval(ld, g - 1, n + 2, ("e", "s"), slots, n).items():
                _acc(out, k, v)
        for g1 in range(g + 1):
            g2 = g - g1
            for r in range(n + 1):
                for I in itertools.combinations(slots, r):
                    J = [s for s in slots if s not in I]
                    m1, m2 = len(I) + 1, len(J) + 1
                    if not unstable and ((g1, m1) == (0, 1) or (g2, m2) == (0, 1)):
                        continue
                    A = self._local_eval(ld, g1, m1, ("e",), list(I), n)
                    B = self._local_eval(ld, g2, m2, ("s",), J, n)
                    for k, v in self._product(A, B).items():
                        _acc(out, k, v)
        return out

    def _recurse(self, g, m):
        n = m - 1
        depth = self._depth(g, m)
        terms = {}
        for a in self.curve.ramification:
            ld = self.local(a, depth)
            for key, series in self.recursion_input(ld, g, n).items():
                R = series * ld.kernel
                if R.prec < -1:
                    raise DepthError("depth %d insufficient for ω_{%d,%d}" % (depth, g, m))
                for j in range(1, -R.val):
                    c = R.coeff(-1 - j)
                    if c:
                        _acc(terms, key + ((a, j + 1),), c)
        return Correlator(g, m, {k: v for k, v in terms.items() if v})


def tr_correlator(curve, g, n, depth=None, table=None):
    """ω_{g,n} of the curve by topological recursion."""
    table = table or CorrelatorTable(curve, depth)
    return table.omega(g, n)


# ---------------------------------------------------------------------------
# loop equations

@dataclass
class LoopReport:
    g: int
    n: int
    linear: bool
    quadratic: bool
    failures: list
    checked: int

    @property
    def passed(self):
        return self.linear and self.quadratic

    def to_json(self):
        return {"g": self.g, "n": self.n, "linear": self.linear, "quadratic": self.quadratic,
                "checked": self.checked, "failures": self.failures[:20]}


def _zero_order(series, need):
    """True / False for valuation >= need, None when precision runs out first."""
    if series.val < need and series.val < series.prec:
        return False
    if series.prec < need:
        return None
    return True


def loop_equation_check(table, g, n, corrupt=None):
    """Linear and quadratic loop equations for ω_{g,n} at every ramification point.

    Linear: ω_{g,n}(ε, z) + ω_{g,n}(σε, z) vanishes at ε = 0.
    Quadratic: ω_{g-1,n+1}(ε, σε, z) + Σ ω(ε, z_I) ω(σε, z_J), including the
    ω_{0,1} terms, vanishes to second order.  ``corrupt`` replaces ω_{g,n} by
    the given Correlator (a negative control).
    """
    if corrupt is not None:
        table.override[(g, n)] = corrupt
    try:
        failures = []
        checked = 0
        lin_ok = quad_ok = True
        for a in table.curve.ramification:
            ld = table.local(a, table._depth(g, n))
            others = list(range(n - 1))
            lin = {}
            for which in ("e", "s"):
                for k, v in table._local_eval(ld, g, n, (which,), others, n - 1).items():
                    _acc(lin, k, v)
            for key, v in lin.items():
                checked += 1
                ok = _zero_order(v, 1)
                if not ok:
                    lin_ok = False
                    failures.append({"equation": "linear", "point": qstr(a),
                                     "poles": _key_json(key),
                                     "status": "undetermined" if ok is None else "nonzero"})
            quad = table.recursion_input(ld, g, n - 1, unstable=True)
            for key, v in quad.items():
                checked += 1
                ok = _zero_order(v, 2)
                if not ok:
                    quad_ok = False
                    failures.append({"equation": "quadratic", "point": qstr(a),
                                     "poles": _key_json(key),
                                     "status": "undetermined" if ok is None else "nonzero"})
        return LoopReport(g, n, lin_ok, quad_ok, failures, checked)
    finally:
        if corrupt is not None:
            del table.override[(g, n)]
            for ld in table._local.values():
                ld.cache.clear()


def _key_json(key):
    return [[qstr(lab[0]), lab[1]] for lab in key]


# ---------------------------------------------------------------------------
# structural properties

def projection(curve, omega):
    """Σ_a Res_{ζ=a} ∫_a^{z_i} B(·, ζ) ω(…, ζ, …) applied in every slot.

    For a correlator this reproduces ω; it kills simple poles, holomorphic
    parts and poles away from the ramification points.
    """
    cache = {}

    def project(label):
        if label not in cache:
            b, k = label
            base = RatFn((ONE,), tuple(_binomial_poly(b, k)))
            out = {}
            for a in curve.ramification:
                loc = base.local(a, 0)  # only ε^{<0} needed
                for j in range(1, -loc.val):
                    c = loc.coeff(-1 - j)
                    if c:
                        out[(a, j + 1)] = out.get((a, j + 1), ZERO) + c
            cache[label] = out
        return cache[label]

    terms = {}
    for labels, c in omega.terms.items():
        partial = {(): c}
        for lab in labels:
            proj = project(lab)
            partial = {key + (nl,): v * w for key, v in partial.items() for nl, w in proj.items()}
        for key, v in partial.items():
            _acc(terms, key, v)
    return Correlator(omega.g, omega.n, {k: v for k, v in terms.items() if v})


def _binomial_poly(b, k):
    """Coefficients of (z - b)^k."""
    p = [ONE]
    for _ in range(k):
        p = [(-b) * p[0]] + [p[i - 1] - b * p[i] for i in range(1, len(p))] + [p[-1]]
    return p


def homogeneity_ratio(curve, g, n, lam, depth=None):
    """(ω_{g,n} of the curve with dy scaled by λ, predicted factor λ^{2-2g-n})."""
    lam = Q(lam)
    base = tr_correlator(curve, g, n, depth)
    scaled = tr_correlator(curve.scaled_dy(lam), g, n, depth)
    factor = lam ** (2 - 2 * g - n)
    return scaled, base.scale(factor)


@dataclass
class XiForm:
    """dξ at ``point``: ``forms[k]`` is the dz-coefficient of (d∘(1/dx))^k dξ."""

    point: object
    forms: list

    def residue_free(self):
        return all(v == 0 for f in self.forms for v in all_residues(f).values())


def xi_basis(curve, kmax=2):
    """One residueless form per ramification point, with a double pole there
    and nothing else, followed by its images under d∘(1/dx)."""
    out = []
    for p in curve.points():
        if p == "inf":
            f = RatFn((ONE,))
        else:
            f = RatFn((ONE,), tuple(_binomial_poly(p, 2)))
        forms = [f]
        for _ in range(kmax):
            forms.append((forms[-1] / curve.dx).deriv())
        out.append(XiForm(p, forms))
    return out


# ---------------------------------------------------------------------------
# expansion at z = 0 in the X coordinate

def X_from_curve(curve, order):
    """X = exp(x) normalised as z·exp(∫₀^z (dx/dz - 1/t) dt)."""
    loc = curve.dx.local(ZERO, 1)
    if loc.val != -1 or loc.coeff(-1) != 1:
        raise SpectralError("dx is not dz/z plus a regular form at z = 0")
    reg = curve.dx - RatFn((0, 1)) ** -1
    ints = reg.taylor(order - 1).integrate()
    return ZSeries([ZERO] + ints.exp().c)


def _primitive(label, order):
    """∫₀^z dt/(t - a)^k as a z-series."""
    a, k = label
    if a == 0:
        raise SpectralError("the expansion point z = 0 is a ramification point")
    t = RatFn((ONE,), tuple(_binomial_poly(a, k - 1))).taylor(order)
    return ZSeries([ZERO] + [v / (1 - k) for v in t.c[1:]])


def doss_expand(table, g, n, order, coords="X"):
    """H_{g,n} with ω_{g,n} = d₁⋯d_n H_{g,n}, expanded at z_i = 0.

    Returns {(k_1..k_n): coefficient} with total degree at most ``order`` in
    X (``coords="X"``) or in z.
    """
    omega = table.omega(g, n)
    curve = table.curve
    if coords == "X":
        zX = reversion(X_from_curve(curve, order))
    elif coords != "z":
        raise SpectralError("coords must be 'X' or 'z'")
    prims = {}
    out = {}
    for labels, c in omega.terms.items():
        acc = {(): c}
        for lab in labels:
            if lab not in prims:
                p = _primitive(lab, order)
                prims[lab] = compose(p, zX) if coords == "X" else p
            ps = prims[lab]
            new = {}
            for key, v in acc.items():
                for j in range(1, order - sum(key) + 1):
                    if ps[j]:
                        _acc(new, key + (j,), v * ps[j])
            acc = new
        for key, v in acc.items():
            _acc(out, key, v)
    return {k: v for k, v in sorted(out.items()) if v}


def doss_expand_02(curve, order):
    """(B - dX₁dX₂/(X₁ - X₂)²)/(dz₁dz₂) as a series in z₁, z₂ of total degree <= order."""
    n = order + 2
    X = X_from_curve(curve, n + 1)
    dX = X.deriv()
    # X₁ - X₂ = (z₁ - z₂) E(z₁, z₂), E = Σ_k X_k h_{k-1}(z₁, z₂)
    E = {}
    for k in range(1, n + 2):
        for a in range(k):
            _acc(E, (a, k - 1 - a), X[k])
    E = BiSeries(E, n)
    Einv = _bi_inverse(E, n)
    num = BiSeries({(0, 0): 1}, n) - BiSeries(
        {(i, j): dX[i] * dX[j] for i in range(n + 1) for j in range(n + 1 - i)}, n) * Einv * Einv
    q = _divide_by_difference(_divide_by_difference(num, n), n - 1)
    return BiSeries(q.c, order)


def _bi_inverse(E, n):
    c0 = E.coeff(0, 0)
    rest = BiSeries({k: v / c0 for k, v in E.c.items() if k != (0, 0)}, n)
    out = BiSeries({(0, 0): 1}, n)
    power = BiSeries({(0, 0): 1}, n)
    for k in range(1, n + 1):
        power = power * rest * -1
        out = out + power
    return out * (1 / c0)


def _divide_by_difference(f, n):
    """f/(z₁ - z₂) for f vanishing on the diagonal, degree by degree."""
    out = {}
    for d in range(n + 1):
        a = [f.coeff(i, d - i) for i in range(d + 1)]
        b = []
        prev = ZERO
        for i in range(d):
            prev = prev - a[i]
            b.append(prev)
        if (b[-1] if b else ZERO) != a[d]:
            raise SpectralError("not divisible by z₁ - z₂ in degree %d" % d)
        for i, v in enumerate(b):
            if v:
                out[(i, d - 1 - i)] = v
    return BiSeries(out, n - 1)


# ---------------------------------------------------------------------------
# Airy calibration

def airy_descendants(kmax):
    """Coefficient c_d with dξ_d = c_d dz/z^{2d+2} on the Airy curve, dξ_0 = dz/z²."""
    curve = airy_curve()
    forms = xi_basis(curve, kmax)[0].forms
    out = []
    for d, f in enumerate(forms):
        loc = f.local(ZERO, 1)
        if loc.val != -(2 * d + 2) or any(loc.coeff(e) for e in range(loc.val + 1, 1)):
            raise SpectralError("unexpected shape of dξ_%d" % d)
        out.append(loc.coeff(loc.val))
    return out


def airy_calibration(table):
    """(κ, s) fixed by ⟨τ₀³⟩₀ = 1 and ⟨τ₁⟩₁ = 1/24.

    The dictionary is ω_{g,n} = κ^{2g-2+n} Σ ⟨Π τ_{d_i}⟩ Π s^{d_i} dξ_{d_i}
    with dξ_0 = dz/z² and dξ_{d+1} = d(dξ_d/dx).
    """
    c03 = table.omega(0, 3).terms.get(((ZERO, 2),) * 3)
    c11 = table.omega(1, 1).terms.get(((ZERO, 4),))
    if not c03 or not c11:
        raise SpectralError("ω_{0,3} or ω_{1,1} lacks its leading Airy term")
    kappa = c03
    step = c11 / (kappa * airy_descendants(1)[1] * mpq(1, 24))
    return kappa, step


def airy_intersections(table, g, n, calibration=None):
    """Read ⟨τ_{d_1}⋯τ_{d_n}⟩_g off ω_{g,n} on the Airy curve.

    Returns {sorted (d_1..d_n): value}; ``calibration`` defaults to
    :func:`airy_calibration`.
    """
    kappa, step = calibration or airy_calibration(table)
    omega = table.omega(g, n)
    kmax = max(k for labels in omega.terms for _, k in labels)
    cs = airy_descendants(kmax // 2)
    out = {}
    for labels, c in omega.terms.items():
        ds = []
        for a, k in labels:
            if a != 0 or k % 2:
                raise SpectralError("pole %s^%d outside the descendant basis" % (qstr(a), k))
            ds.append(k // 2 - 1)
        v = c / kappa ** (2 * g - 2 + n)
        for d in ds:
            v /= cs[d] * step ** d
        key = tuple(sorted(ds))
        if key in out and out[key] != v:
            raise SpectralError("ω_{%d,%d} is not symmetric" % (g, n))
        out[key] = v
    return dict(sorted(out.items()))
