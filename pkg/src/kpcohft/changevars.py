"""Spectral data X(z), the linear change of variables p(q) and its companions.

Conventions: x(z) = log z - ψ(y(z)), X = e^x, Q = z dx/dz and
D = d/dx = Q⁻¹ z d/dz.  The coefficients 𝒯_l of 1/Q drive the recursion
for the T-forms.  Under the correspondence q_m <-> z^m the T-forms are
T^j_k <-> D^{k+1} z^{j+1}/(j+1).
"""
from dataclasses import dataclass

from gmpy2 import mpq

from .series import (ZSeries, BiSeries, LinearForm, ZERO, ONE, Q, rational_roots,
                     compose, reversion, qstr)


class ChangeVarsError(ValueError):
    pass


@dataclass
class SpectralData:
    """X(z) with derived Q and 𝒯; ``psi_of_y`` is ψ(y(z)) when known."""

    X: ZSeries
    Q: ZSeries
    Tcal: list
    psi_of_y: ZSeries = None
    y: ZSeries = None

    @property
    def order(self):
        return self.X.order

    @property
    def lead(self):
        return self.X[1]

    def tcal_series(self, n=None):
        n = self.order - 1 if n is None else n
        if n > len(self.Tcal) - 1:
            raise ChangeVarsError("𝒯 known only through l = %d" % (len(self.Tcal) - 1))
        return ZSeries(self.Tcal[: n + 1])

    def D(self, f):
        """d/dx = Q⁻¹ z d/dz on a z-series."""
        n = min(f.order, len(self.Tcal) - 1)
        return (self.tcal_series(n) * f.truncate(n).euler())


def tcal_coeffs(Qs, order=None):
    """Coefficients of 1/Q."""
    if Qs[0] != 1:
        raise ChangeVarsError("Q(0) must be 1")
    n = Qs.order if order is None else order
    return list(Qs.truncate(n).inverse().c)


def spectral_from_X(X):
    """SpectralData for an explicit X = a z + O(z²), a != 0."""
    if X[0] or not X[1]:
        raise ChangeVarsError("X must vanish simply at z = 0")
    u = X.shift(-1)  # X / z, known one order less
    Qs = ONE + u.euler() * u.inverse()
    return SpectralData(X.truncate(X.order), Qs, tcal_coeffs(Qs))


def build_X(data, order=8):
    """X = z exp(-ψ(y(z))) from the ħ = 0 parts of the tau data."""
    psi = data.spectral_psi()
    ycoef = data.spectral_y()
    if psi.get(0) or ycoef.get(0):
        raise ChangeVarsError("ψ and y must have zero constant terms")
    if not data.y_complete and order - 1 > data.order:
        raise ChangeVarsError("tau data tables shorter than the requested order")
    n = order - 1
    y = ZSeries.from_dict(ycoef, n)
    ps = ZSeries.from_dict(psi, n)
    comp = compose(ps, y)
    X = ZSeries([ZERO] + (-comp).exp().c)  # order n + 1
    sd = spectral_from_X(X)
    # Q = 1 - z d/dz (ψ∘y), exact through z^n
    sd.Q = ONE - comp.euler()
    sd.Tcal = tcal_coeffs(sd.Q)
    sd.psi_of_y = comp
    sd.y = ZSeries.from_dict(ycoef, order)
    return sd


def p_of_q(sd, k, M):
    """p_k(q) = Σ c_k^m q_m from X^k = Σ c_k^m z^m, m <= M."""
    if k < 1:
        raise ChangeVarsError("k must be positive")
    if M > sd.order + k - 1:
        raise ChangeVarsError("X known through z^%d only" % sd.order)
    u = sd.X.shift(-1).truncate(max(M - k, 0))
    uk = u ** k
    return LinearForm({m: uk[m - k] for m in range(k, M + 1)}, M)


def p_forms(sd, W):
    """{k: p_k(q)} for 1 <= k <= W, all with cap W."""
    return {k: p_of_q(sd, k, W) for k in range(1, W + 1)}


def t_recursion(sd, j, k, M, method="q"):
    """T^j_k as a LinearForm with cap M.

    ``method="q"`` applies Σ m 𝒯_l q_{m+l} ∂/∂q_m to T^j_{-1} = q_{j+1}/(j+1);
    ``method="z"`` computes D^{k+1} z^{j+1}/(j+1) and reads z^m as q_m.
    """
    if j < 0 or k < -1:
        raise ChangeVarsError("need j >= 0 and k >= -1")
    if M > len(sd.Tcal) - 1 + j + 1 and k >= 0:
        raise ChangeVarsError("𝒯 too short for cap %d" % M)
    if method == "q":
        form = {j + 1: mpq(1, j + 1)}
        for _ in range(k + 1):
            new = {}
            for m, a in form.items():
                for l in range(0, M - m + 1):
                    t = sd.Tcal[l]
                    if t:
                        new[m + l] = new.get(m + l, ZERO) + m * t * a
            form = new
        return LinearForm(form, M)
    if method == "z":
        f = ZSeries.from_dict({j + 1: mpq(1, j + 1)}, M)
        tc = ZSeries([sd.Tcal[l] if l < len(sd.Tcal) else ZERO for l in range(M + 1)])
        for _ in range(k + 1):
            f = tc * f.euler()
        return LinearForm.from_zseries(f)
    raise ChangeVarsError("unknown method %r" % method)


def t_forms(sd, kmax, M, j=0):
    return {k: t_recursion(sd, j, k, M) for k in range(kmax + 1)}


def unstable_H01(sd, y, order):
    """H with X dH/dX = y(z(X)), H(0) = 0, as a series in X."""
    if order > min(sd.order, y.order):
        raise ChangeVarsError("X or y known only through z^%d" % min(sd.order, y.order))
    zX = reversion(sd.X.truncate(order))
    yX = compose(y.truncate(order), zX)
    if yX[0]:
        raise ChangeVarsError("y(0) must vanish so that D⁻¹ is defined")
    return ZSeries([ZERO] + [yX[k] / k for k in range(1, order + 1)])


def H01_residual(sd, H, y):
    """D(H(X(z))) - y(z) as a z-series (zero for a correct H₀,₁)."""
    n = min(H.order, sd.order, y.order, len(sd.Tcal) - 1)
    Hz = compose(H.truncate(n), sd.X.truncate(n))
    return sd.D(Hz) - y.truncate(n)


@dataclass
class H02Series:
    """log(log_arg) + series, the constant kept symbolic."""

    log_arg: object
    series: BiSeries

    def is_zero(self):
        return self.log_arg == 1 and self.series.is_zero()

    def to_json(self):
        return {"log_arg": qstr(self.log_arg), "series": self.series.to_json()}


def unstable_H02(sd, order):
    """log((1/z₁ - 1/z₂)/(1/X₁ - 1/X₂)) as a symmetric series in z₁, z₂."""
    if order > sd.order - 1:
        raise ChangeVarsError("order %d needs X through z^%d" % (order, order + 1))
    u = sd.X.shift(-1)
    v = u.inverse()
    v0 = v[0]
    # (z2 v1 - z1 v2)/(z2 - z1) = v0 - Σ_{k>=2} v_k z1 z2 h_{k-2}(z1, z2)
    inner = {}
    for k in range(2, order + 1):
        if not v[k]:
            continue
        for a in range(k - 1):
            b = k - 2 - a
            key = (a + 1, b + 1)
            inner[key] = inner.get(key, ZERO) - v[k] / v0
    series = BiSeries(inner, order).log1p() * -1
    return H02Series(1 / v0, series)


def h02_from_X_coefficients(coeffs, sd, order):
    """Turn {(k1,k2): c} (coefficients of X1^k1 X2^k2) into a z-series."""
    return BiSeries(coeffs, order).substitute(sd.X.truncate(order))


def moebius_X(a, b, order):
    """X = a z / (1 + b z)."""
    a, b = Q(a), Q(b)
    return ZSeries([ZERO] + [a * (-b) ** (k - 1) for k in range(1, order + 1)])


def scaled_X(sd, beta):
    """X_β(z) = X(βz)/β."""
    beta = Q(beta)
    return ZSeries([v * beta ** (k - 1) for k, v in enumerate(sd.X.c)])


@dataclass
class FlowGenerator:
    """A = Σ_m f_m L_m: ``euler`` holds f(z) with f(z) z d/dz the
    differential part, ``quadratic`` the multiplication part
    Σ_m f_m · ½ Σ_{i=1}^{m-1} z₁^i z₂^{m-i}."""

    euler: ZSeries
    quadratic: BiSeries

    def is_zero(self):
        return not any(self.euler.c) and self.quadratic.is_zero()


def flow_generator(sd, beta, order):
    """Generator of the flow X_β along β (differential and quadratic parts)."""
    beta = Q(beta)
    if not beta:
        raise ChangeVarsError("β must be non-zero")
    n = min(order, len(sd.Tcal) - 1)
    tb = ZSeries(sd.Tcal[: n + 1]).scale_var(beta)
    f = (ONE - tb) * (1 / beta)
    quad = {}
    for m in range(2, n + 1):
        if not f[m]:
            continue
        for i in range(1, m):
            key = (i, m - i)
            quad[key] = quad.get(key, ZERO) + f[m] / 2
    return FlowGenerator(f, BiSeries(quad, n))


def flow_euler_residual(sd, beta, order):
    """∂_β X_β - f(z) z ∂_z X_β, with ∂_β taken coefficientwise."""
    beta = Q(beta)
    n = min(order, sd.order, len(sd.Tcal) - 1)
    Xb = scaled_X(sd, beta).truncate(n)
    dXb = ZSeries([v * (k - 1) * beta ** (k - 2) if k >= 2 else ZERO
                   for k, v in enumerate(sd.X.c[: n + 1])])
    gen = flow_generator(sd, beta, n)
    return dXb - gen.euler * Xb.euler()


def h02_beta_derivative(sd, beta, order):
    """∂H₀,₂/∂β at fixed X, for X_β, expressed in z₁, z₂.

    H₀,₂ of X_β at (X₁, X₂) equals H₀,₂ of X at (βX₁, βX₂), so the derivative
    is β⁻¹ times the total Euler operator in the X-coordinates.
    """
    beta = Q(beta)
    if order > sd.order - 1:
        raise ChangeVarsError("order %d needs X through z^%d" % (order, order + 1))
    sdb = spectral_from_X(scaled_X(sd, beta).truncate(order + 1))
    h = unstable_H02(sdb, order).series
    zX = reversion(sdb.X.truncate(order))
    inX = h.substitute(zX)
    return inX.euler_total().substitute(sdb.X.truncate(order)) * (1 / beta)


@dataclass
class FinitenessReport:
    polynomial: bool
    degree: int = None
    coeffs: list = None
    roots: list = None
    log_weights: dict = None

    def to_json(self):
        return {
            "polynomial": self.polynomial,
            "degree": self.degree,
            "coeffs": None if self.coeffs is None else [qstr(c) for c in self.coeffs],
            "roots": None if self.roots is None else [qstr(c) for c in self.roots],
            "log_weights": None if self.log_weights is None else
            {qstr(k): qstr(v) for k, v in sorted(self.log_weights.items())},
        }


def finiteness_check(sd, d):
    """Is 1/Q a polynomial of degree <= d (within the known 𝒯_l)?

    For a polynomial 1/Q = Π(1 - c_j z) the c_j are reported as ``roots`` and
    x(z) = log z - Σ_j κ_j log(1 - c_j z) with κ_j = Π_{k≠j}(1 - c_k/c_j)⁻¹.
    """
    T = sd.Tcal
    last = max((l for l, v in enumerate(T) if v), default=0)
    if last > d or last >= len(T) - 1:
        return FinitenessReport(False)
    poly = list(T[: last + 1])
    roots_z = rational_roots(poly) if last else {}
    cs = None
    kappa = None
    if sum(roots_z.values()) == last:
        cs = []
        for r, mult in sorted(roots_z.items()):
            cs.extend([1 / r] * mult)
        if len(set(cs)) == len(cs) and all(cs):
            kappa = {}
            for c in cs:
                prod = ONE
                for c2 in cs:
                    if c2 != c:
                        prod *= 1 - c2 / c
                kappa[c] = 1 / prod
    return FinitenessReport(True, last, poly, cs, kappa)
