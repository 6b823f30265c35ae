"""Exact truncated series over the rationals.

Four containers live here:

* ``HLaurent``   Laurent polynomial in ħ, known up to a truncation order.
* ``ZSeries``    dense power series in one variable (z or X).
* ``PSeries``    sparse series in power sums p_k (or q_m) with ħ-Laurent
                 coefficients, truncated by weight and by a graded ħ-order.
* ``RatFn``      univariate rational function with residue support.

plus ``LocalSeries`` (Laurent series with tracked precision) for local
expansions, ``BiSeries`` for symmetric two-variable expansions and
``LinearForm`` for linear combinations of the q_m.

All coefficients are ``gmpy2.mpq``.
"""
from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpq, mpz

from . import kernels

ZERO = mpq(0)
ONE = mpq(1)
HINF = 10 ** 6  # stands for "no ħ truncation"


class SeriesError(ValueError):
    """Raised on ill-posed series operations."""


def Q(x):
    """Coerce ints, strings like ``"3/4"``, Fractions and mpq to ``mpq``."""
    if isinstance(x, str):
        return mpq(x.strip())
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float) or type(x).__name__ == "mpfr":
        raise SeriesError("floating-point value %r in exact arithmetic" % (x,))
    return mpq(x)


def qstr(x):
    """Render a rational as ``num/den`` (or an integer string)."""
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def _minh(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# ---------------------------------------------------------------------------
# ħ-Laurent polynomials


class HLaurent:
    """Finite Laurent series in ħ, exact for exponents ``<= hi``.

    ``hi is None`` means the polynomial is exact (no truncation).
    """

    __slots__ = ("c", "hi")

    def __init__(self, coeffs=None, hi=None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                if hi is not None and e > hi:
                    continue
                v = Q(v)
                if v:
                    c[int(e)] = v
        self.c = c
        self.hi = hi

    @classmethod
    def const(cls, x, hi=None):
        return cls({0: x}, hi)

    @classmethod
    def mono(cls, e, x=1, hi=None):
        return cls({e: x}, hi)

    @property
    def lo(self):
        """Lowest exponent present, ``None`` for zero."""
        return min(self.c) if self.c else None

    @property
    def top(self):
        return max(self.c) if self.c else None

    def _lo_eff(self):
        # a truncated zero has valuation above its window
        if self.c:
            return min(self.c)
        return None if self.hi is None else self.hi + 1

    def coeff(self, e):
        if self.hi is not None and e > self.hi:
            raise SeriesError("coefficient of ħ^%d beyond window %d" % (e, self.hi))
        return self.c.get(e, ZERO)

    def items(self):
        return sorted(self.c.items())

    def is_zero(self):
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def truncate(self, hi):
        h = hi if self.hi is None else min(hi, self.hi)
        return HLaurent(self.c, h)

    def _coerce(self, other):
        if isinstance(other, HLaurent):
            return other
        return HLaurent({0: other})

    def __add__(self, other):
        if not isinstance(other, HLaurent):
            try:
                other = HLaurent({0: other})
            except TypeError:
                return NotImplemented
        hi = _minh(self.hi, other.hi)
        c = dict(self.c)
        for e, v in other.c.items():
            c[e] = c.get(e, ZERO) + v
        return HLaurent(c, hi)

    __radd__ = __add__

    def __neg__(self):
        return HLaurent({e: -v for e, v in self.c.items()}, self.hi)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, HLaurent):
            try:
                s = Q(other)
            except TypeError:
                return NotImplemented
            if not s:
                return HLaurent({}, self.hi)
            return HLaurent({e: v * s for e, v in self.c.items()}, self.hi)
        la, lb = self._lo_eff(), other._lo_eff()
        hi = None
        if self.hi is not None and lb is not None:
            hi = self.hi + lb
        if other.hi is not None and la is not None:
            hi = _minh(hi, other.hi + la)
        if self.hi is not None and other.hi is not None and (la is None or lb is None):
            hi = _minh(hi, min(self.hi, other.hi))
        c = {}
        for ea, va in self.c.items():
            for eb, vb in other.c.items():
                e = ea + eb
                if hi is not None and e > hi:
                    continue
                c[e] = c.get(e, ZERO) + va * vb
        return HLaurent(c, hi)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = HLaurent({0: 1})
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, HLaurent):
            try:
                other = HLaurent({0: other})
            except TypeError:
                return NotImplemented
        return self.c == other.c and self.hi == other.hi

    def __hash__(self):
        return hash((tuple(sorted(self.c.items())), self.hi))

    def agrees(self, other, upto=None):
        """Coefficientwise equality through ħ^upto (default: common window)."""
        other = self._coerce(other)
        h = _minh(self.hi, other.hi)
        if upto is not None:
            h = upto if h is None else min(h, upto)
        keys = set(self.c) | set(other.c)
        return all(self.c.get(e, ZERO) == other.c.get(e, ZERO)
                   for e in keys if h is None or e <= h)

    def subs_scale(self, lam):
        """ħ -> lam·ħ."""
        lam = Q(lam)
        return HLaurent({e: v * lam ** e for e, v in self.c.items()}, self.hi)

    def inverse(self, hi=None):
        """Multiplicative inverse; needs an explicit window if self is exact."""
        if not self.c:
            raise SeriesError("inverse of zero")
        v = self.lo
        lead = self.c[v]
        if hi is None:
            if self.hi is None:
                if len(self.c) == 1:
                    return HLaurent({-v: 1 / lead})
                raise SeriesError("inverse of an exact non-monomial needs a window")
            hi = self.hi - 2 * v
        n = hi + v  # number of relative orders
        if n < 0:
            return HLaurent({}, hi)
        rel = [self.c.get(v + i, ZERO) / lead for i in range(n + 1)]
        inv = [ONE] + [ZERO] * n
        for k in range(1, n + 1):
            s = ZERO
            for i in range(1, k + 1):
                if rel[i]:
                    s += rel[i] * inv[k - i]
            inv[k] = -s
        return HLaurent({i - v: x / lead for i, x in enumerate(inv)}, hi)

    def to_json(self):
        return {"hi": self.hi, "coeffs": {str(e): qstr(v) for e, v in sorted(self.c.items())}}

    def __repr__(self):
        if not self.c:
            body = "0"
        else:
            body = " + ".join("%s*h^%d" % (qstr(v), e) for e, v in sorted(self.c.items()))
        tail = "" if self.hi is None else " + O(h^%d)" % (self.hi + 1)
        return "HLaurent(%s%s)" % (body, tail)


def h_exp(a, hi):
    """exp of an ħ-series with strictly positive valuation, through ħ^hi."""
    a = a.truncate(hi)
    if a.c and a.lo <= 0:
        raise SeriesError("exp needs positive ħ-valuation")
    out = [ONE] + [ZERO] * hi if hi >= 0 else []
    coef = [a.c.get(e, ZERO) for e in range(hi + 1)]
    for n in range(1, hi + 1):
        s = ZERO
        for k in range(1, n + 1):
            if coef[k]:
                s += k * coef[k] * out[n - k]
        out[n] = s / n
    return HLaurent({e: v for e, v in enumerate(out)}, hi)


# ---------------------------------------------------------------------------
# the S-function


@lru_cache(maxsize=None)
def s_series(n):
    """Taylor coefficients of 𝒮(t) = sinh(t/2)/(t/2) in t^2, j = 0..n."""
    return tuple(mpq(1, 4 ** j * _fact(2 * j + 1)) for j in range(n + 1))


@lru_cache(maxsize=None)
def s_inv_series(n):
    """Taylor coefficients of 1/𝒮(t) in t^2, j = 0..n."""
    a = s_series(n)
    inv = [ONE] + [ZERO] * n
    for k in range(1, n + 1):
        inv[k] = -sum((a[i] * inv[k - i] for i in range(1, k + 1)), ZERO)
    return tuple(inv)


@lru_cache(maxsize=None)
def _fact(n):
    return mpz(1) if n < 2 else n * _fact(n - 1)


def fact(n):
    """n! as an exact rational, so that 1/fact(n) stays exact."""
    return mpq(_fact(n))


def S_of(arg, hi, inverse=False):
    """𝒮(arg·ħ)^{±1} as an HLaurent through ħ^hi."""
    arg = Q(arg)
    table = s_inv_series(hi // 2) if inverse else s_series(hi // 2)
    return HLaurent({2 * j: table[j] * arg ** (2 * j) for j in range(hi // 2 + 1)}, hi)


def apply_S(scale, f, mode="forward", hbar_max=4, basis="euler"):
    """Apply 𝒮(scale·ħ·op)^{±1} termwise.

    ``basis="euler"``: op = z d/dz on a ZSeries (or a coefficient list); the
    z^k coefficient is multiplied by 𝒮(scale·ħk)^{±1}.
    ``basis="derivative"``: op = d/dy on a polynomial given as a coefficient
    list; the result is a list of HLaurent coefficients.
    """
    if mode not in ("forward", "inverse"):
        raise SeriesError("mode must be 'forward' or 'inverse'")
    inverse = mode == "inverse"
    scale = Q(scale)
    if basis == "euler":
        coeffs = f.c if isinstance(f, ZSeries) else list(f)
        out = []
        for k, v in enumerate(coeffs):
            out.append(S_of(scale * k, hbar_max, inverse) * v)
        return ZSeries(out) if isinstance(f, ZSeries) else out
    if basis == "derivative":
        if inverse:
            raise SeriesError("inverse derivative-basis 𝒮 is not polynomial")
        poly = [Q(v) for v in f]
        table = s_series(hbar_max // 2)
        out = [HLaurent({}, hbar_max) for _ in poly]
        cur = list(poly)
        for j in range(hbar_max // 2 + 1):
            for i, v in enumerate(cur):
                if v:
                    out[i] = out[i] + HLaurent({2 * j: table[j] * scale ** (2 * j) * v}, hbar_max)
            # two derivatives
            for _ in range(2):
                cur = [cur[i + 1] * (i + 1) for i in range(len(cur) - 1)]
            if not cur:
                break
        return out
    raise SeriesError("unknown basis %r" % basis)


# ---------------------------------------------------------------------------
# dense univariate series


def _zero_like(x):
    if isinstance(x, HLaurent):
        return HLaurent({}, x.hi)
    return ZERO


class ZSeries:
    """Power series c[0] + c[1] z + ... + c[N] z^N + O(z^{N+1})."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = [v if isinstance(v, HLaurent) else Q(v) for v in coeffs]
        if not self.c:
            self.c = [ZERO]

    @classmethod
    def zero(cls, n):
        return cls([ZERO] * (n + 1))

    @classmethod
    def var(cls, n, scale=1):
        c = [ZERO] * (n + 1)
        if n >= 1:
            c[1] = Q(scale)
        return cls(c)

    @classmethod
    def from_dict(cls, d, n):
        c = [ZERO] * (n + 1)
        for k, v in d.items():
            if k <= n:
                c[k] = Q(v)
        return cls(c)

    @property
    def order(self):
        return len(self.c) - 1

    def __len__(self):
        return len(self.c)

    def __getitem__(self, k):
        return self.c[k] if 0 <= k < len(self.c) else ZERO

    def truncate(self, n):
        if n <= self.order:
            return ZSeries(self.c[: n + 1])
        return ZSeries(self.c + [ZERO] * (n - self.order))

    def valuation(self):
        for k, v in enumerate(self.c):
            if v:
                return k
        return None

    def __add__(self, other):
        if not isinstance(other, ZSeries):
            c = list(self.c)
            c[0] = c[0] + other
            return ZSeries(c)
        n = min(self.order, other.order)
        return ZSeries([self.c[k] + other.c[k] for k in range(n + 1)])

    __radd__ = __add__

    def __neg__(self):
        return ZSeries([-v for v in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ZSeries):
            n = min(self.order, other.order)
            return ZSeries(kernels.conv_trunc(self.c, other.c, n, ZERO))
        return ZSeries([v * other for v in self.c])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ZSeries):
            return NotImplemented
        return self.c == other.c

    def scale_var(self, lam):
        """f(z) -> f(lam·z)."""
        lam = Q(lam)
        return ZSeries([v * lam ** k for k, v in enumerate(self.c)])

    def deriv(self):
        return ZSeries([self.c[k] * k for k in range(1, len(self.c))] or [ZERO])

    def euler(self):
        """z d/dz."""
        return ZSeries([v * k for k, v in enumerate(self.c)])

    def integrate(self):
        """Primitive with zero constant term (one order longer)."""
        return ZSeries([ZERO] + [v / (k + 1) for k, v in enumerate(self.c)])

    def shift(self, m):
        """Multiply by z^m (m may be negative if the low terms vanish)."""
        if m >= 0:
            return ZSeries(([ZERO] * m + self.c)[: len(self.c)])
        if any(self.c[:-m]):
            raise SeriesError("division by z of a series with low terms")
        return ZSeries(self.c[-m:])

    def inverse(self):
        c0 = self.c[0]
        if not c0:
            raise SeriesError("reciprocal of a series without constant term")
        n = self.order
        inv0 = 1 / c0 if not isinstance(c0, HLaurent) else c0.inverse()
        out = [inv0] + [ZERO] * n
        for k in range(1, n + 1):
            s = _zero_like(c0)
            for i in range(1, k + 1):
                if self.c[i]:
                    s = s + self.c[i] * out[k - i]
            out[k] = -(s * inv0)
        return ZSeries(out)

    def __truediv__(self, other):
        if isinstance(other, ZSeries):
            return self * other.inverse()
        return ZSeries([v / Q(other) for v in self.c])

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = ZSeries([ONE] + [ZERO] * self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def exp(self):
        return exp_series(self)

    def log(self):
        return log_series(self)

    def pow_rational(self, r):
        """f^r for rational r, needs f(0) = 1."""
        if self.c[0] != 1:
            raise SeriesError("rational power needs constant term 1")
        r = Q(r)
        n = self.order
        g = [ONE] + [ZERO] * n
        # f g' = r f' g
        for m in range(1, n + 1):
            s = ZERO
            for k in range(1, m + 1):
                s += (r * k - (m - k)) * self.c[k] * g[m - k]
            g[m] = s / m
        return ZSeries(g)

    def compose(self, g):
        return compose(self, g)

    def reversion(self):
        return reversion(self)

    def to_list(self):
        return list(self.c)

    def __repr__(self):
        terms = ["%s*z^%d" % (v if isinstance(v, HLaurent) else qstr(v), k)
                 for k, v in enumerate(self.c) if v]
        return "ZSeries(%s + O(z^%d))" % (" + ".join(terms) or "0", self.order + 1)


def exp_series(f):
    """exp(f) for a ZSeries with zero constant term."""
    if f.c[0]:
        raise SeriesError("exp needs a vanishing constant term")
    n = f.order
    g = [ONE] + [ZERO] * n
    for m in range(1, n + 1):
        s = ZERO
        for k in range(1, m + 1):
            if f.c[k]:
                s = s + f.c[k] * g[m - k] * k
        g[m] = s * mpq(1, m)
    return ZSeries(g)


def log_series(f):
    """log(f) for a ZSeries with constant term 1."""
    if f.c[0] != 1:
        raise SeriesError("log needs constant term 1")
    n = f.order
    g = [ZERO] * (n + 1)
    for m in range(1, n + 1):
        s = f.c[m] * m
        for k in range(1, m):
            if g[k]:
                s = s - g[k] * f.c[m - k] * k
        g[m] = s * mpq(1, m)
    return ZSeries(g)


def compose(f, g):
    """f(g(z)) for g with zero constant term; order = min of the two."""
    if g.c[0]:
        raise SeriesError("inner series must have zero constant term")
    n = min(f.order, g.order)
    g = g.truncate(n)
    out = ZSeries([f.c[n]] + [ZERO] * n) if n <= f.order else ZSeries.zero(n)
    for k in range(n - 1, -1, -1):
        out = out * g
        out.c[0] = out.c[0] + f.c[k]
    return out


def reversion(f):
    """Compositional inverse of f = a z + ..., a != 0, by Newton iteration."""
    if f.c[0] or f.order < 1 or not f.c[1]:
        raise SeriesError("reversion needs f(0) = 0 and f'(0) != 0")
    n = f.order
    fp = f.deriv()
    g = ZSeries.var(n, 1 / f.c[1])
    ident = ZSeries.var(n)
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        gt = g.truncate(prec)
        err = compose(f.truncate(prec), gt) - ident.truncate(prec)
        step = err * compose(fp.truncate(prec), gt).inverse()
        g = (gt - step).truncate(n)
    return g


# ---------------------------------------------------------------------------
# Laurent series with tracked precision


class LocalSeries:
    """Σ c[i] ε^{val+i} + O(ε^prec)."""

    __slots__ = ("val", "c", "prec")

    def __init__(self, val, coeffs, prec):
        coeffs = [Q(v) for v in coeffs[: max(prec - val, 0)]]
        # normalise: strip leading zeros
        i = 0
        while i < len(coeffs) and not coeffs[i]:
            i += 1
        self.val = val + i
        self.c = coeffs[i:]
        self.prec = prec
        if not self.c:
            self.val = prec

    @classmethod
    def from_zseries(cls, f, shift=0):
        return cls(shift, f.c, shift + len(f.c))

    @classmethod
    def exact_zero(cls, prec):
        return cls(prec, [], prec)

    def coeff(self, e):
        if e >= self.prec:
            raise SeriesError("coefficient of ε^%d beyond precision %d" % (e, self.prec))
        i = e - self.val
        return self.c[i] if 0 <= i < len(self.c) else ZERO

    def is_zero(self):
        return not self.c

    def __add__(self, other):
        if not isinstance(other, LocalSeries):
            other = LocalSeries(0, [other], HINF)
        prec = min(self.prec, other.prec)
        val = min(self.val, other.val)
        coeffs = [self.coeff(e) if e < self.prec else ZERO for e in range(val, prec)]
        for e in range(max(other.val, val), prec):
            coeffs[e - val] += other.coeff(e)
        return LocalSeries(val, coeffs, prec)

    __radd__ = __add__

    def __neg__(self):
        return LocalSeries(self.val, [-v for v in self.c], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LocalSeries):
            s = Q(other)
            return LocalSeries(self.val, [v * s for v in self.c], self.prec)
        prec = min(self.val + other.prec, other.val + self.prec)
        val = self.val + other.val
        n = prec - val
        if n <= 0:
            return LocalSeries(prec, [], prec)
        c = kernels.conv_trunc(self.c, other.c, n - 1, ZERO)
        return LocalSeries(val, c, prec)

    __rmul__ = __mul__

    def inverse(self):
        if not self.c:
            raise SeriesError("inverse of a series that vanishes to its precision")
        rel = self.prec - self.val
        f = ZSeries(self.c + [ZERO] * (rel - len(self.c))).truncate(rel - 1)
        inv = f.inverse()
        return LocalSeries(-self.val, inv.c, -self.val + rel)

    def __truediv__(self, other):
        if isinstance(other, LocalSeries):
            return self * other.inverse()
        return self * (1 / Q(other))

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = LocalSeries(0, [ONE], HINF)
        for _ in range(n):
            out = out * self
        return out

    def residue(self):
        return self.coeff(-1)

    def __repr__(self):
        return "LocalSeries(val=%d, %s, O(eps^%d))" % (self.val, [qstr(v) for v in self.c], self.prec)


# ---------------------------------------------------------------------------
# polynomials and rational functions


def p_trim(p):
    p = [Q(v) for v in p]
    while p and not p[-1]:
        p.pop()
    return tuple(p)


def p_add(a, b):
    n = max(len(a), len(b))
    return p_trim([(a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO) for i in range(n)])


def p_neg(a):
    return tuple(-v for v in a)


def p_mul(a, b):
    if not a or not b:
        return ()
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return p_trim(out)


def p_divmod(a, b):
    b = p_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p_trim(a))
    q = [ZERO] * max(len(r) - len(b) + 1, 0)
    lead = b[-1]
    while len(r) >= len(b) and r:
        d = len(r) - len(b)
        f = r[-1] / lead
        q[d] = f
        for i, v in enumerate(b):
            r[i + d] -= f * v
        r = list(p_trim(r))
    return p_trim(q), p_trim(r)


def p_gcd(a, b):
    a, b = p_trim(a), p_trim(b)
    while b:
        a, b = b, p_divmod(a, b)[1]
    if not a:
        return ()
    return tuple(v / a[-1] for v in a)


def p_eval(p, x):
    acc = ZERO
    for v in reversed(p):
        acc = acc * x + v
    return acc


def p_deriv(p):
    return p_trim([p[i] * i for i in range(1, len(p))])


def p_shift(p, a):
    """Coefficients of p(a + t) in t."""
    out = [ZERO] * len(p)
    a = Q(a)
    for v in reversed(p):
        # out = out * (a + t) + v
        new = [ZERO] * len(p)
        for i, x in enumerate(out):
            if x:
                new[i] += x * a
                if i + 1 < len(new):
                    new[i + 1] += x
        new[0] += v
        out = new
    return p_trim(out)


def _divisors(n):
    n = abs(int(n))
    ds = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            ds.append(i)
            if i * i != n:
                ds.append(n // i)
        i += 1
    return ds


def rational_roots(p):
    """Rational roots of p with multiplicity, as a dict root -> multiplicity."""
    p = p_trim(p)
    if not p:
        raise SeriesError("roots of the zero polynomial")
    roots = {}
    # clear denominators
    den = 1
    for v in p:
        den = den * v.denominator // _gcd_int(den, v.denominator)
    ip = [int(v * den) for v in p]
    while ip and ip[0] == 0:
        roots[ZERO] = roots.get(ZERO, 0) + 1
        ip = ip[1:]
    cur = p_trim([mpq(v) for v in ip])
    if len(cur) <= 1:
        return roots
    cands = set()
    for a in _divisors(ip[0]):
        for b in _divisors(ip[-1]):
            cands.add(mpq(a, b))
            cands.add(mpq(-a, b))
    for r in sorted(cands):
        while len(cur) > 1 and p_eval(cur, r) == 0:
            roots[r] = roots.get(r, 0) + 1
            cur = p_divmod(cur, (-r, ONE))[0]
    return roots


def _gcd_int(a, b):
    a, b = abs(int(a)), abs(int(b))
    while b:
        a, b = b, a % b
    return a


def _series_of_quotient(num, den, n):
    """Taylor coefficients (through t^n) of num(t)/den(t), den(0) != 0."""
    f = ZSeries(list(num) + [ZERO] * (n + 1))
    g = ZSeries(list(den) + [ZERO] * (n + 1))
    return (f.truncate(n) * g.truncate(n).inverse())


class RatFn:
    """Univariate rational function num/den in lowest terms, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,)):
        num, den = p_trim(num), p_trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = p_gcd(num, den) if num else (ONE,)
        if len(g) > 1:
            num = p_divmod(num, g)[0]
            den = p_divmod(den, g)[0]
        lead = den[-1]
        self.num = tuple(v / lead for v in num)
        self.den = tuple(v / lead for v in den)

    @classmethod
    def poly(cls, p):
        return cls(p, (ONE,))

    def __add__(self, other):
        other = _as_rat(other)
        return RatFn(p_add(p_mul(self.num, other.den), p_mul(other.num, self.den)),
                     p_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFn(p_neg(self.num), self.den)

    def __sub__(self, other):
        return self + (-_as_rat(other))

    def __rsub__(self, other):
        return _as_rat(other) - self

    def __mul__(self, other):
        other = _as_rat(other)
        return RatFn(p_mul(self.num, other.num), p_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rat(other)
        if not other.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFn(p_mul(self.num, other.den), p_mul(self.den, other.num))

    def __rtruediv__(self, other):
        return _as_rat(other) / self

    def __pow__(self, n):
        out = RatFn((ONE,))
        base = self if n >= 0 else RatFn((ONE,)) / self
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, other):
        if not isinstance(other, RatFn):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        d = p_eval(self.den, x)
        if not d:
            raise ZeroDivisionError("pole at %s" % x)
        return p_eval(self.num, x) / d

    def deriv(self):
        return RatFn(p_add(p_mul(p_deriv(self.num), self.den), p_neg(p_mul(self.num, p_deriv(self.den)))),
                     p_mul(self.den, self.den))

    def is_zero(self):
        return not self.num

    def degree_at_infinity(self):
        """deg(num) - deg(den); zero function gives None."""
        if not self.num:
            return None
        return len(self.num) - len(self.den)

    def poles(self):
        """Rational poles with orders; raises if some pole is irrational."""
        roots = rational_roots(self.den)
        if sum(roots.values()) != len(self.den) - 1:
            raise SeriesError("irrational pole location not representable")
        return roots

    def zeros(self):
        roots = rational_roots(self.num) if self.num else {}
        if sum(roots.values()) != max(len(self.num) - 1, 0):
            raise SeriesError("irrational zero location not representable")
        return roots

    def local(self, a, prec):
        """Laurent expansion at z = a + ε, known through ε^{prec-1}."""
        a = Q(a)
        num = p_shift(self.num, a)
        den = p_shift(self.den, a)
        v = 0
        while den and not den[0]:
            den = den[1:]
            v += 1
        n = prec + v - 1
        if n < 0:
            return LocalSeries(prec, [], prec)
        s = _series_of_quotient(num, den, n)
        return LocalSeries(-v, s.c, prec)

    def local_infinity(self, prec):
        """Expansion in w = 1/z of f(1/w) (a function, not a form)."""
        dn, dd = len(self.num) - 1, len(self.den) - 1
        num = tuple(reversed(self.num))  # w^dn · num(1/w)
        den = tuple(reversed(self.den))
        # f(1/w) = w^{dd-dn} num~(w)/den~(w)
        v = 0
        while den and not den[0]:
            den = den[1:]
            v += 1
        shift = dd - dn - v
        n = prec - shift - 1
        if n < 0:
            return LocalSeries(prec, [], prec)
        s = _series_of_quotient(num, den, n)
        return LocalSeries(shift, s.c, prec)

    def taylor(self, n):
        """Taylor series at 0 as a ZSeries of order n."""
        if not p_eval(self.den, ZERO):
            raise SeriesError("pole at the expansion point")
        return _series_of_quotient(self.num, self.den, n)

    def __repr__(self):
        return "RatFn(%s / %s)" % ([qstr(v) for v in self.num], [qstr(v) for v in self.den])


def _as_rat(x):
    if isinstance(x, RatFn):
        return x
    return RatFn((Q(x),))


def residue(f, a):
    """Residue of the differential f(z) dz at a rational point or at ``"inf"``."""
    if isinstance(a, str) and a in ("inf", "infinity", "oo"):
        # f(z)dz = -f(1/w) w^{-2} dw
        loc = f.local_infinity(4 + max(len(f.den), len(f.num)))
        return -loc.coeff(1)
    a = Q(a)
    order = rational_roots(f.den).get(a, 0) if p_eval(f.den, a) == 0 else 0
    if order == 0:
        return ZERO
    return f.local(a, 0).coeff(-1)


def all_residues(f):
    """Residues at every finite pole and at infinity (must be rational)."""
    out = {p: residue(f, p) for p in f.poles()}
    out["inf"] = residue(f, "inf")
    return out


# ---------------------------------------------------------------------------
# two-variable symmetric series


class BiSeries:
    """Σ c[(a, b)] z1^a z2^b with a + b <= order."""

    __slots__ = ("c", "order")

    def __init__(self, coeffs, order):
        self.order = order
        self.c = {k: Q(v) for k, v in coeffs.items() if k[0] + k[1] <= order and Q(v)}

    def __add__(self, other):
        n = min(self.order, other.order)
        c = dict(self.c)
        for k, v in other.c.items():
            c[k] = c.get(k, ZERO) + v
        return BiSeries(c, n)

    def __neg__(self):
        return BiSeries({k: -v for k, v in self.c.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, BiSeries):
            s = Q(other)
            return BiSeries({k: v * s for k, v in self.c.items()}, self.order)
        n = min(self.order, other.order)
        c = {}
        for (a1, b1), v1 in self.c.items():
            for (a2, b2), v2 in other.c.items():
                if a1 + a2 + b1 + b2 <= n:
                    k = (a1 + a2, b1 + b2)
                    c[k] = c.get(k, ZERO) + v1 * v2
        return BiSeries(c, n)

    __rmul__ = __mul__

    def coeff(self, a, b):
        return self.c.get((a, b), ZERO)

    def is_zero(self):
        return not self.c

    def log1p(self):
        """log(1 + self) for a series without constant term."""
        if self.c.get((0, 0)):
            raise SeriesError("log1p needs zero constant term")
        out = BiSeries({}, self.order)
        power = BiSeries({(0, 0): 1}, self.order)
        for k in range(1, self.order + 1):
            power = power * self
            if power.is_zero():
                break
            out = out + power * mpq((-1) ** (k + 1), k)
        return out

    def euler_total(self):
        """Multiply the (a, b) coefficient by a + b."""
        return BiSeries({k: v * (k[0] + k[1]) for k, v in self.c.items()}, self.order)

    def substitute(self, f):
        """Replace z_i by f(z_i) for a ZSeries f with f(0) = 0."""
        n = self.order
        powers = [ZSeries([ONE] + [ZERO] * n)]
        for _ in range(n):
            powers.append(powers[-1] * f.truncate(n))
        c = {}
        for (a, b), v in self.c.items():
            pa, pb = powers[a], powers[b]
            for i in range(a, n + 1):
                if not pa[i]:
                    continue
                for j in range(b, n + 1 - i):
                    if pb[j]:
                        c[(i, j)] = c.get((i, j), ZERO) + v * pa[i] * pb[j]
        return BiSeries(c, n)

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        return self.order == other.order and self.c == other.c

    def to_json(self):
        return {"order": self.order,
                "coeffs": {"%d,%d" % k: qstr(v) for k, v in sorted(self.c.items())}}


# ---------------------------------------------------------------------------
# sparse series in power sums


class MonoCodec:
    """Mixed-radix integer codes for monomials of weight <= W.

    The exponent of p_k is at most W // k, so radix W // k + 1 avoids carries
    and the code of a product is the sum of the codes.
    """

    _cache = {}

    def __new__(cls, W):
        if W in cls._cache:
            return cls._cache[W]
        if W > 30:
            raise SeriesError("weight cap above 30 is not supported")
        self = super().__new__(cls)
        self.W = W
        place = [0] * (W + 2)
        acc = 1
        for k in range(1, W + 1):
            place[k] = acc
            acc *= W // k + 1
        self.place = place
        self._dec = {0: ((), 0, 0)}
        cls._cache[W] = self
        return self

    def encode(self, part):
        code = 0
        for k in part:
            code += self.place[k]
        return code

    def decode(self, code):
        """(partition, weight, length) of a code."""
        hit = self._dec.get(code)
        if hit is not None:
            return hit
        exps = []
        rest = code
        for k in range(self.W, 0, -1):
            e, rest = divmod(rest, self.place[k])
            exps.append((k, e))
        part = tuple(k for k, e in exps for _ in range(e))
        out = (part, sum(part), len(part))
        self._dec[code] = out
        return out


def _key(code, e):
    if not -kernels.E_OFF <= e < kernels.E_OFF:
        raise SeriesError("ħ exponent %d outside the supported range" % e)
    return code * 256 + e + kernels.E_OFF


def _unkey(key):
    return key >> 8, (key & 255) - kernels.E_OFF


class PSeries:
    """Sparse series Σ c·ħ^e·p_μ, exact for weight <= wcap and ord <= hcap.

    ``ord = e + sigma·len(μ)``.  With ``sigma = 1`` the ħ cap tracks the Euler
    characteristic grading of a genus expansion, with ``sigma = 0`` it is a
    plain ħ truncation.  ``hcap = HINF`` means no ħ truncation.
    """

    __slots__ = ("codec", "terms", "wcap", "hcap", "sigma")

    def __init__(self, W, terms=None, hcap=HINF, sigma=0, wcap=None):
        self.codec = MonoCodec(W)
        self.wcap = W if wcap is None else min(wcap, W)
        self.hcap = hcap
        self.sigma = sigma
        self.terms = {}
        if terms:
            for (part, e), v in terms.items():
                self._add_term(tuple(sorted(part, reverse=True)), e, Q(v))

    def _add_term(self, part, e, v):
        w = sum(part)
        if w > self.wcap or e + self.sigma * len(part) > self.hcap or not v:
            return
        k = _key(self.codec.encode(part), e)
        nv = self.terms.get(k, ZERO) + v
        if nv:
            self.terms[k] = nv
        else:
            self.terms.pop(k, None)

    def _blank(self, wcap=None, hcap=None):
        out = PSeries.__new__(PSeries)
        out.codec = self.codec
        out.wcap = self.wcap if wcap is None else min(wcap, self.codec.W)
        out.hcap = self.hcap if hcap is None else hcap
        out.sigma = self.sigma
        out.terms = {}
        return out

    @property
    def W(self):
        return self.codec.W

    # -- construction --------------------------------------------------

    @classmethod
    def const(cls, W, x=1, hcap=HINF, sigma=0):
        return cls(W, {((), 0): x}, hcap, sigma)

    @classmethod
    def var(cls, W, k, x=1, e=0, hcap=HINF, sigma=0):
        return cls(W, {((k,), e): x}, hcap, sigma)

    @classmethod
    def from_linear(cls, form, W, hcap=HINF, sigma=0):
        return cls(W, {((m,), 0): v for m, v in form.c.items()}, hcap, sigma,
                   wcap=min(W, form.cap))

    # -- inspection ----------------------------------------------------

    def items(self):
        """Sorted ((partition, e), coeff) pairs."""
        out = []
        for k, v in self.terms.items():
            code, e = _unkey(k)
            part = self.codec.decode(code)[0]
            out.append(((part, e), v))
        out.sort(key=lambda t: (sum(t[0][0]), t[0][0], t[0][1]))
        return out

    def coeff(self, part, e=None):
        part = tuple(sorted(part, reverse=True))
        hi = self.hcap - self.sigma * len(part)
        if e is not None:
            if sum(part) > self.wcap or e > hi:
                raise SeriesError("coefficient outside the exact window")
            return self.terms.get(_key(self.codec.encode(part), e), ZERO)
        code = self.codec.encode(part)
        c = {}
        for k, v in self.terms.items():
            kc, ke = _unkey(k)
            if kc == code:
                c[ke] = v
        return HLaurent(c, None if self.hcap >= HINF else hi)

    def monomials(self):
        return sorted({self.codec.decode(_unkey(k)[0])[0] for k in self.terms})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _flat(self):
        dec = self.codec.decode
        out = []
        for k, v in self.terms.items():
            code, e = _unkey(k)
            _, w, l = dec(code)
            out.append((k, w, l, e, v))
        out.sort(key=lambda t: t[1])
        return out

    def min_weight(self):
        if not self.terms:
            return self.wcap + 1
        return min(self.codec.decode(_unkey(k)[0])[1] for k in self.terms)

    def min_ord(self):
        if not self.terms:
            return self.hcap + 1
        best = None
        for k in self.terms:
            code, e = _unkey(k)
            o = e + self.sigma * self.codec.decode(code)[2]
            best = o if best is None else min(best, o)
        return best

    def max_weight(self):
        if not self.terms:
            return -1
        return max(self.codec.decode(_unkey(k)[0])[1] for k in self.terms)

    # -- arithmetic ----------------------------------------------------

    def _align(self, other):
        if self.sigma != other.sigma:
            raise SeriesError("mixing different ħ gradings")
        if self.codec is other.codec:
            return self, other
        W = min(self.W, other.W)
        return self.recode(W), other.recode(W)

    def recode(self, W):
        if W == self.W:
            return self
        out = PSeries(W, None, self.hcap, self.sigma, wcap=min(self.wcap, W))
        for (part, e), v in self.items():
            out._add_term(part, e, v)
        return out

    def truncate(self, wcap=None, hcap=None):
        wcap = self.wcap if wcap is None else min(wcap, self.wcap)
        hcap = self.hcap if hcap is None else min(hcap, self.hcap)
        out = self._blank(wcap, hcap)
        dec = self.codec.decode
        for k, v in self.terms.items():
            code, e = _unkey(k)
            _, w, l = dec(code)
            if w <= wcap and e + self.sigma * l <= hcap:
                out.terms[k] = v
        return out

    def __add__(self, other):
        if not isinstance(other, PSeries):
            return self + PSeries.const(self.W, other, self.hcap, self.sigma)
        a, b = self._align(other)
        out = a._blank(min(a.wcap, b.wcap), min(a.hcap, b.hcap))
        for k, v in a.terms.items():
            out.terms[k] = v
        for k, v in b.terms.items():
            nv = out.terms.get(k, ZERO) + v
            if nv:
                out.terms[k] = nv
            else:
                del out.terms[k]
        return out.truncate()

    __radd__ = __add__

    def __neg__(self):
        out = self._blank()
        out.terms = {k: -v for k, v in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s):
        s = Q(s)
        out = self._blank()
        if s:
            out.terms = {k: v * s for k, v in self.terms.items()}
        return out

    def __mul__(self, other):
        if not isinstance(other, PSeries):
            return self.scale(other)
        a, b = self._align(other)
        wcap = min(a.wcap + b.min_weight(), b.wcap + a.min_weight(), a.W)
        hcap = min(a.hcap + b.min_ord(), b.hcap + a.min_ord(), HINF)
        out = a._blank(wcap, hcap)
        raw = kernels.sparse_mul(a._flat(), b._flat(), wcap, hcap, a.sigma, -1)
        out.terms = {k: v for k, v in raw.items() if v}
        return out

    __rmul__ = __mul__

    def __pow__(self, n):
        out = PSeries.const(self.W, 1, self.hcap, self.sigma)
        for _ in range(n):
            out = out * self
        return out

    def deriv(self, k, times=1):
        """∂^times / ∂p_k^times."""
        out = self
        for _ in range(times):
            out = out._deriv1(k)
        return out

    def _deriv1(self, k):
        out = self._blank(self.wcap - k, self.hcap - self.sigma if self.hcap < HINF else HINF)
        dec = self.codec.decode
        pk = self.codec.place[k] if k <= self.W else None
        if pk is None:
            return out
        for key, v in self.terms.items():
            code, e = _unkey(key)
            part = dec(code)[0]
            m = part.count(k)
            if m:
                out.terms[_key(code - pk, e)] = v * m
        return out

    def hbar_part(self, e):
        """Coefficient of ħ^e as a PSeries with ħ-exponent 0."""
        out = PSeries(self.W, None, HINF, 0, wcap=self.wcap)
        for (part, ee), v in self.items():
            if ee == e:
                out._add_term(part, 0, v)
        return out

    def weight_part(self, w):
        out = self._blank()
        for (part, e), v in self.items():
            if sum(part) == w:
                out._add_term(part, e, v)
        return out

    def subs_hbar(self, lam):
        """ħ -> lam·ħ."""
        lam = Q(lam)
        out = self._blank()
        for k, v in self.terms.items():
            e = _unkey(k)[1]
            out.terms[k] = v * lam ** e
        return out

    def scale_vars(self, lam):
        """p_k -> lam^k p_k."""
        lam = Q(lam)
        out = self._blank()
        for k, v in self.terms.items():
            w = self.codec.decode(_unkey(k)[0])[1]
            nv = v * lam ** w
            if nv:
                out.terms[k] = nv
        return out

    def regrade(self, sigma, hcap=None):
        """Same terms under a different ħ grading."""
        out = PSeries(self.W, None, HINF if hcap is None else hcap, sigma, wcap=self.wcap)
        for (part, e), v in self.items():
            out._add_term(part, e, v)
        return out

    def shift_hbar_by_weight(self, factor):
        """p_k -> ħ^{factor·k} p_k (changes the exponent of each term)."""
        out = PSeries(self.W, None, HINF, self.sigma, wcap=self.wcap)
        for (part, e), v in self.items():
            out._add_term(part, e + factor * sum(part), v)
        return out

    def drop_hbar_below(self, e0):
        out = self._blank()
        for k, v in self.terms.items():
            if _unkey(k)[1] >= e0:
                out.terms[k] = v
        return out

    def equals(self, other):
        """Equality on the common exact window."""
        diff = self - other
        return diff.is_zero()

    def __eq__(self, other):
        if not isinstance(other, PSeries):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    # -- exp / log via the weight recurrence -----------------------------

    def _by_weight(self):
        groups = {}
        dec = self.codec.decode
        for t in self._flat():
            groups.setdefault(t[1], []).append(t)
        return groups

    def exp(self):
        """exp(F) for F without weight-0 terms."""
        groups = self._by_weight()
        if groups.get(0):
            raise SeriesError("exp needs a series without weight-0 terms")
        mo = self.min_ord()
        hcap = self.hcap if mo >= 0 else self.hcap + (self.wcap - 1) * mo
        W = self.wcap
        res = {0: [(_key(0, 0), 0, 0, 0, ONE)]}
        for n in range(1, W + 1):
            acc = {}
            for k in range(1, n + 1):
                fk = groups.get(k)
                zk = res.get(n - k)
                if not fk or not zk:
                    continue
                part = kernels.sparse_mul(fk, zk, W, hcap, self.sigma, -1)
                for key, v in part.items():
                    acc[key] = acc.get(key, ZERO) + v * k
            res[n] = self._group_from(acc, mpq(1, n))
        out = self._blank(W, hcap)
        for terms in res.values():
            for key, _, _, _, v in terms:
                out.terms[key] = v
        return out

    def log(self):
        """log(Z) for Z whose weight-0 part is exactly 1."""
        groups = self._by_weight()
        g0 = groups.get(0, [])
        if len(g0) != 1 or g0[0][0] != _key(0, 0) or g0[0][4] != 1:
            raise SeriesError("log needs weight-0 part equal to 1")
        nonconst = [t for n, ts in groups.items() if n for t in ts]
        mo = min((t[3] + self.sigma * t[2] for t in nonconst), default=0)
        hcap = self.hcap if mo >= 0 else self.hcap + (self.wcap - 1) * mo
        W = self.wcap
        res = {}
        for n in range(1, W + 1):
            acc = {}
            for t in groups.get(n, []):
                acc[t[0]] = t[4] * n
            for k in range(1, n):
                fk = res.get(k)
                zk = groups.get(n - k)
                if not fk or not zk:
                    continue
                part = kernels.sparse_mul(fk, zk, W, hcap, self.sigma, -1)
                for key, v in part.items():
                    acc[key] = acc.get(key, ZERO) - v * k
            res[n] = self._group_from(acc, mpq(1, n))
        out = self._blank(W, hcap)
        for terms in res.values():
            for key, _, _, _, v in terms:
                out.terms[key] = v
        return out

    def _group_from(self, acc, factor):
        dec = self.codec.decode
        out = []
        for key, v in acc.items():
            if v:
                code, e = _unkey(key)
                _, w, l = dec(code)
                out.append((key, w, l, e, v * factor))
        out.sort(key=lambda t: t[1])
        return out

    # -- substitution --------------------------------------------------

    def substitute(self, forms, W=None):
        """Replace each p_k by a LinearForm in q (returns a PSeries in q).

        The ħ grading is kept: each p_k maps to a single q-variable factor.
        """
        W = self.W if W is None else W
        cap = min([W] + [forms[k].cap for k in forms])
        lin = {}
        for k, f in forms.items():
            lin[k] = PSeries(W, {((m,), 0): v for m, v in f.c.items()}, HINF, self.sigma, wcap=cap)
        memo = {(): PSeries.const(W, 1, HINF, self.sigma)}

        def prod(part):
            hit = memo.get(part)
            if hit is None:
                if part[0] not in lin:
                    raise SeriesError("no linear form for p_%d" % part[0])
                hit = lin[part[0]] * prod(part[1:])
                memo[part] = hit
            return hit

        out = PSeries(W, None, self.hcap, self.sigma, wcap=min(cap, self.wcap))
        acc = {}
        for (part, e), v in self.items():
            if not part:
                k = _key(0, e)
                acc[k] = acc.get(k, ZERO) + v
                continue
            if part[-1] > out.wcap:
                continue
            pr = prod(part)
            for key, c in pr.terms.items():
                code, _ = _unkey(key)
                nk = _key(code, e)
                acc[nk] = acc.get(nk, ZERO) + c * v
        dec = out.codec.decode
        for key, v in acc.items():
            if not v:
                continue
            code, e = _unkey(key)
            _, w, l = dec(code)
            if w <= out.wcap and e + out.sigma * l <= out.hcap:
                out.terms[key] = v
        return out

    # -- export --------------------------------------------------------

    def to_json(self, var="p"):
        return {
            "weight_cap": self.wcap,
            "hbar_cap": None if self.hcap >= HINF else self.hcap,
            "grading": self.sigma,
            "terms": [{"monomial": list(part), "hbar": e, "coeff": qstr(v)}
                      for (part, e), v in self.items()],
        }

    def __repr__(self):
        body = " + ".join("%s*h^%d*%s" % (qstr(v), e, "*".join("p%d" % k for k in part) or "1")
                          for (part, e), v in self.items()[:12])
        more = "" if len(self.terms) <= 12 else " + ..."
        return "PSeries(%s%s; W<=%d)" % (body or "0", more, self.wcap)


# ---------------------------------------------------------------------------
# linear forms in q


class LinearForm:
    """Σ_m c[m] q_m, exact for m <= cap."""

    __slots__ = ("c", "cap")

    def __init__(self, coeffs, cap):
        self.cap = cap
        self.c = {m: Q(v) for m, v in coeffs.items() if m <= cap and Q(v)}

    @classmethod
    def from_zseries(cls, f, offset=0):
        """Read z^m -> q_{m + offset}."""
        return cls({m + offset: v for m, v in enumerate(f.c) if v}, f.order + offset)

    def coeff(self, m):
        if m > self.cap:
            raise SeriesError("q_%d beyond cap %d" % (m, self.cap))
        return self.c.get(m, ZERO)

    def __add__(self, other):
        cap = min(self.cap, other.cap)
        c = dict(self.c)
        for m, v in other.c.items():
            c[m] = c.get(m, ZERO) + v
        return LinearForm(c, cap)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        s = Q(s)
        return LinearForm({m: v * s for m, v in self.c.items()}, self.cap)

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.cap == other.cap and self.c == other.c

    def agrees(self, other):
        cap = min(self.cap, other.cap)
        return all(self.c.get(m, ZERO) == other.c.get(m, ZERO) for m in range(cap + 1))

    def to_zseries(self):
        """q_m -> z^m."""
        return ZSeries([self.c.get(m, ZERO) for m in range(self.cap + 1)])

    def to_json(self):
        return {"cap": self.cap, "coeffs": {str(m): qstr(v) for m, v in sorted(self.c.items())}}

    @classmethod
    def from_json(cls, d):
        return cls({int(m): Q(v) for m, v in d["coeffs"].items()}, int(d["cap"]))

    def __repr__(self):
        return "LinearForm(%s; m<=%d)" % (
            " + ".join("%s*q%d" % (qstr(v), m) for m, v in sorted(self.c.items())) or "0", self.cap)
