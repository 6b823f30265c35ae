"""Command-line front end: ``kpcohft verify <scenario>`` and ``kpcohft tables <kind>``.

Exit codes: 0 all checks pass, 1 some residual is non-zero, 2 bad
configuration, 3 the computation itself failed.
"""
import argparse
import configparser
import csv
import io
import json
import sys

from gmpy2 import mpq

from . import changevars as cv
from . import hodge, kpcheck, spectral, tau
from .series import qstr, SeriesError

SCHEMA_VERSION = "1"

SCENARIOS = ("naive-hodge", "triple-hodge", "inversion", "mv-lemma", "pluecker",
             "tr-compare", "torus-action", "moebius")
TABLES = ("t-forms", "p-of-q", "tau-coeffs", "omega")

RUN_KEYS = {"w": "rational", "beta": "rational", "u": "rational", "s": "rational",
            "a": "rational", "b": "rational", "lam": "rational",
            "order": "int", "weight": "int", "hbar_order": "int", "g": "int", "n": "int",
            "k": "int", "cap": "int"}
FAMILY_KEYS = {"type", "alpha", "lam", "w", "beta", "relabel",
               "P1", "P2", "P3", "R1", "R2", "R3", "R4"}
CURVE_KEYS = {"name", "dx_num", "dx_den", "dy_num", "dy_den", "w", "beta"}
FAMILY_TYPES = ("naive", "family-one", "family-two", "mv", "zero", "identity")


class ConfigError(ValueError):
    pass


COMPUTE_ERRORS = (tau.TauError, cv.ChangeVarsError, spectral.SpectralError, hodge.HodgeError,
                  kpcheck.KPCheckError, SeriesError, ZeroDivisionError)


# ---------------------------------------------------------------------------
# configuration

def parse_rational(text, key="value"):
    try:
        v = mpq(str(text).strip())
    except (ValueError, TypeError):
        raise ConfigError("%s: %r is not a rational number" % (key, text)) from None
    if "." in str(text) or "e" in str(text).lower():
        raise ConfigError("%s: write rationals as num/den, not %r" % (key, text))
    return v


def parse_int(text, key="value"):
    try:
        v = int(str(text).strip())
    except ValueError:
        raise ConfigError("%s: %r is not an integer" % (key, text)) from None
    if v < 0:
        raise ConfigError("%s must be non-negative" % key)
    return v


def parse_list(text, key):
    items = [t for t in str(text).replace(" ", "").split(",") if t]
    if not items:
        raise ConfigError("%s: empty coefficient list" % key)
    return tuple(parse_rational(t, key) for t in items)


def read_config(path):
    """{"run": {...}, "family": {...}, "curve": {...}} from a key = value file."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError("cannot read %s: %s" % (path, exc.strerror)) from None
    except configparser.Error as exc:
        raise ConfigError("malformed config: %s" % exc) from None
    out = {"run": {}, "family": {}, "curve": {}}
    for section in cp.sections():
        if section not in out:
            raise ConfigError("unknown section [%s]" % section)
        for key, val in cp.items(section):
            if section == "run":
                if key not in RUN_KEYS:
                    raise ConfigError("unknown key %r in [run]" % key)
                conv = parse_int if RUN_KEYS[key] == "int" else parse_rational
                out["run"][key] = conv(val, key)
            elif section == "family":
                if key not in FAMILY_KEYS:
                    raise ConfigError("unknown key %r in [family]" % key)
                out["family"][key] = val.strip()
            else:
                if key not in CURVE_KEYS:
                    raise ConfigError("unknown key %r in [curve]" % key)
                out["curve"][key] = val.strip()
    check_family(out["family"])
    return out


def merge_flags(cfg, args):
    run = dict(cfg["run"])
    for key in ("w", "beta", "u", "s"):
        v = getattr(args, key)
        if v is not None:
            run[key] = parse_rational(v, "--" + key)
    for key in ("order", "weight", "hbar_order"):
        v = getattr(args, key)
        if v is not None:
            run[key] = parse_int(v, "--" + key.replace("_", "-"))
    for key in ("order", "weight"):
        if key in run and run[key] < 1:
            raise ConfigError("%s must be positive" % key)
    return run


FAMILY_PARAMS = {"naive": set(), "zero": set(), "identity": set(),
                 "family-one": {"P1", "P2", "P3", "R1", "R2"},
                 "family-two": {"alpha", "R1", "R2", "R3", "R4", "lam"},
                 "mv": {"w", "beta", "relabel"}}


def check_family(fam):
    """The family type, after checking that every key applies to it."""
    kind = fam.get("type", "naive")
    if kind not in FAMILY_TYPES:
        raise ConfigError("unknown family type %r" % kind)
    extra = set(fam) - {"type"} - FAMILY_PARAMS[kind]
    if extra:
        raise ConfigError("keys %s do not apply to family %s" % (sorted(extra), kind))
    return kind


def family_data(fam, order, hbar2_order):
    """TauData from the [family] section (naive Hodge when empty)."""
    kind = check_family(fam)
    if kind == "naive":
        return tau.naive_hodge_data(order, hbar2_order)
    if kind in ("zero", "identity"):
        return tau.TauData({}, {}, order, hbar2_order, "generic", psi_complete=True,
                           y_complete=kind == "zero")
    if kind == "mv":
        w = parse_rational(fam.get("w", "1"), "w")
        beta = parse_rational(fam.get("beta", "1"), "beta")
        return tau.mv_tau_data(w, beta, order, hbar2_order, fam.get("relabel", "lemma"))
    lists = {k: parse_list(v, k) for k, v in fam.items() if k[0] in "PR"}
    if kind == "family-one":
        return tau.family_one(order=order, hbar2_order=hbar2_order, **lists)
    scal = {k: parse_rational(fam[k], k) for k in ("alpha", "lam") if k in fam}
    return tau.family_two(order=order, hbar2_order=hbar2_order, **lists, **scal)


def identity_X(order):
    return cv.spectral_from_X(cv.moebius_X(1, 0, order))


def curve_from_config(cfg, default="naive-hodge"):
    cur = cfg["curve"]
    if "dx_num" in cur:
        return spectral.parse_curve(cur["dx_num"], cur.get("dx_den", "1"),
                                    cur.get("dy_num", "1"), cur.get("dy_den", "1"))
    name = cur.get("name", default)
    params = {}
    if name == "triple-hodge":
        params = {k: parse_rational(cur.get(k, "1"), k) for k in ("w", "beta")}
    elif set(cur) - {"name"}:
        raise ConfigError("curve %s takes no parameters" % name)
    if name not in spectral.NAMED_CURVES:
        raise ConfigError("unknown curve %r" % name)
    return spectral.named_curve(name, **params)


# ---------------------------------------------------------------------------
# report helpers

def _check(name, passed, **detail):
    d = {"name": name, "pass": bool(passed)}
    d.update(detail)
    return d


def _series_check(report):
    return _check(report.label, report.passed, **{k: v for k, v in report.to_json().items()
                                                 if k not in ("equation", "pass")})


def _form_json(form):
    return {str(m): qstr(v) for m, v in sorted(form.c.items())}


# ---------------------------------------------------------------------------
# scenarios

def run_naive_hodge(run, cfg):
    h = run.get("hbar_order", 2)
    W = run.get("weight", 6)
    G = hodge.naive_hodge_G(h, W)
    checks = [_series_check(kpcheck.kp_residual_q1(G)), _series_check(kpcheck.kp_residual_q2(G))]
    tau_route = hodge.naive_hodge_tau_route(h, W)
    checks.append(_check("tau-route", (tau_route - G).is_zero()))
    fin = cv.finiteness_check(cv.build_X(tau.naive_hodge_data(order=12), 12), 4)
    checks.append(_check("finiteness", not fin.polynomial, verdict=fin.to_json()))
    T = hodge.naive_hodge_T(2, 5)
    extras = {"T": {str(k): _form_json(f) for k, f in T.items()}}
    return checks, extras


def run_triple_hodge(run, cfg):
    params = hodge.TripleHodgeParams(run.get("u", 1), run.get("s", 2))
    h = run.get("hbar_order", 2)
    W = run.get("weight", 6)
    res = hodge.triple_hodge_pipeline(params, h, W)
    G = res.table_route
    checks = [_series_check(kpcheck.kp_residual_q1(G)), _series_check(kpcheck.kp_residual_q2(G)),
              _check("calabi-yau", params.calabi_yau_residual() == 0)]
    if params.u:
        checks.append(_check("tau-route", res.agree()))
    else:
        checks.append(_check("odd-support", hodge.odd_support(G)))
    if params.beta:
        fin = hodge.triple_hodge_finiteness(params)
        checks.append(_check("finiteness", fin.polynomial and fin.degree == 2,
                             verdict=fin.to_json()))
    extras = {"parameters": {"u": qstr(params.u), "s": qstr(params.s), "w": qstr(params.w),
                             "beta": qstr(params.beta),
                             "triple": [qstr(v) for v in params.triple()]}}
    return checks, extras


def run_inversion(run, cfg):
    w, beta = run.get("w", mpq(3, 5)), run.get("beta", mpq(2))
    order = run.get("order", 12)
    checks = [_check("inversion", not any(hodge.inversion_check(w, beta, order).c)),
              _check("moebius-relation", not any(hodge.moebius_relation_check(w, beta, order).c)),
              _check("x-differential-equation", not any(hodge.xdiff_check(w, beta, order).c))]
    zc = hodge.z_of_X_coefficients(w, beta, min(order, 8))
    return checks, {"z_of_X": [qstr(v) for v in zc.c]}


def run_mv_lemma(run, cfg):
    w, beta = run.get("w", mpq(3, 5)), run.get("beta", mpq(2))
    W = run.get("weight", 4)
    window = run.get("hbar_order", 4)
    K = window + W
    data = tau.mv_tau_data(w, beta, order=W + 1, hbar2_order=(K + W) // 2 + 2)
    lhs = hodge.mv_rhs(w, beta, W, K)
    rhs = tau.build_tau(data, W, K)
    diff = [((part, e), v) for (part, e), v in (lhs - rhs).items() if e <= window]
    checks = [_check("mv-equals-tau", not diff, window=[-W, window], terms=len(lhs.terms),
                     nonzero=[{"monomial": list(p), "hbar": e, "value": qstr(v)}
                              for (p, e), v in diff[:20]])]
    return checks, {}


def run_pluecker(run, cfg):
    W = run.get("weight", 8)
    cap = run.get("cap", min(6, W))
    h = run.get("hbar_order", 2)
    data = family_data(cfg["family"], W + 1, (h + 2 * W) // 2 + 2)
    Z = tau.build_tau(data, W, h + W)
    F = tau.free_energy(Z)
    checks = [_series_check(kpcheck.kp_residual_t(F, 1)),
              _series_check(kpcheck.pluecker_check(Z, cap))]
    return checks, {"family": data.family}


def run_tr_compare(run, cfg):
    order = run.get("order", 6)
    data = family_data(cfg["family"], order + 2, order + 4)
    curve = spectral.curve_from_data(data) if cfg["family"] else spectral.naive_hodge_curve()
    table = spectral.CorrelatorTable(curve)
    sd = cv.build_X(data, order + 2)
    pairs = [(0, 3), (1, 1)]
    K = max(2 * g - 2 + n + n for g, n in pairs)
    F = tau.free_energy(tau.build_tau(data, order, K))
    checks = []
    for g, n in pairs:
        lhs = spectral.doss_expand(table, g, n, order)
        rhs = tau.extract_Hgn(F, sd.X, g, n, order)
        checks.append(_check("H%d%d" % (g, n), lhs == rhs, coefficients=len(rhs)))
        rep = spectral.loop_equation_check(table, g, n)
        checks.append(_check("loop-equations-%d%d" % (g, n), rep.passed, checked=rep.checked))
    return checks, {"curve": curve.to_json()}


def run_torus_action(run, cfg):
    lam = run.get("lam", mpq(2))
    order = run.get("order", 6)
    data = family_data(cfg["family"], order + 2, order + 4)
    scaled = tau.rescale_data(lam, data)
    sd = cv.build_X(data, order + 2)
    curve = spectral.curve_from_data(data) if cfg["family"] else spectral.naive_hodge_curve()
    checks = []
    F0 = tau.free_energy(tau.build_tau(data, order, 4))
    F1 = tau.free_energy(tau.build_tau(scaled, order, 4))
    for g, n in [(0, 3), (1, 1)]:
        factor = lam ** (2 - 2 * g - n)
        a = tau.extract_Hgn(F0, sd.X, g, n, order)
        b = tau.extract_Hgn(F1, sd.X, g, n, order)
        checks.append(_check("tau-H%d%d" % (g, n), b == {k: v * factor for k, v in a.items()}))
        scaled_w, predicted = spectral.homogeneity_ratio(curve, g, n, lam)
        checks.append(_check("tr-omega%d%d" % (g, n), scaled_w.terms == predicted.terms))
    return checks, {"lambda": qstr(lam)}


def run_moebius(run, cfg):
    a, b = run.get("a", mpq(2)), run.get("b", mpq(3))
    order = run.get("order", 8)
    sd = cv.spectral_from_X(cv.moebius_X(a, b, order + 1))
    h = cv.unstable_H02(sd, order)
    fin = cv.finiteness_check(sd, 4)
    checks = [_check("H02-constant", h.log_arg == a and h.series.is_zero(), H02=h.to_json()),
              _check("finiteness", fin.polynomial and fin.degree == 1, verdict=fin.to_json())]
    return checks, {}


RUNNERS = {"naive-hodge": run_naive_hodge, "triple-hodge": run_triple_hodge,
           "inversion": run_inversion, "mv-lemma": run_mv_lemma, "pluecker": run_pluecker,
           "tr-compare": run_tr_compare, "torus-action": run_torus_action,
           "moebius": run_moebius}


# ---------------------------------------------------------------------------
# tables

def table_rows(kind, run, cfg):
    order = run.get("order", 5)
    if kind == "t-forms":
        kmax = run.get("k", 2)
        data = family_data(cfg["family"], order + 2, 2)
        sd = identity_X(order + 2) if cfg["family"].get("type") == "identity" else cv.build_X(data, order + 2)
        return [{"k": k, "coeffs": _form_json(cv.t_recursion(sd, 0, k, order))}
                for k in range(kmax + 1)]
    if kind == "p-of-q":
        W = run.get("weight", order)
        if cfg["family"].get("type") == "identity":
            sd = identity_X(order + 1)
        else:
            sd = cv.build_X(family_data(cfg["family"], order + 2, 2), order + 1)
        return [{"k": k, "coeffs": _form_json(cv.p_of_q(sd, k, order))} for k in range(1, W + 1)
                if k <= order]
    if kind == "tau-coeffs":
        W = run.get("weight", 4)
        h = run.get("hbar_order", 2)
        data = family_data(cfg["family"], W + 1, (h + 2 * W) // 2 + 2)
        coeffs = tau.tau_coefficients(data, W, h)
        rows = []
        for nu in sorted(coeffs, key=lambda p: (sum(p), p)):
            c = coeffs[nu]
            if not c.is_zero():
                rows.append({"nu": list(nu), "coeff": {str(e): qstr(v) for e, v in c.items()}})
        return rows
    if kind == "omega":
        curve = curve_from_config(cfg)
        g, n = run.get("g", 0), run.get("n", 3)
        return [spectral.tr_correlator(curve, g, n).to_json()]
    raise ConfigError("unknown table %r" % kind)


# ---------------------------------------------------------------------------
# output

def render(doc, fmt):
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    if "checks" in doc:
        wr.writerow(["check", "pass"])
        for c in doc["checks"]:
            wr.writerow([c["name"], "true" if c["pass"] else "false"])
    else:
        wr.writerow(["row", "key", "value"])
        for i, row in enumerate(doc["rows"]):
            for key, val in _flatten(row):
                wr.writerow([i, key, val])
    return buf.getvalue()


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], "%s.%s" % (prefix, k) if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, "%s[%d]" % (prefix, i))
    else:
        yield prefix, obj


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser():
    parser = argparse.ArgumentParser(prog="kpcohft", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, choices, helptext in (("verify", SCENARIOS, "run a verification scenario"),
                                    ("tables", TABLES, "write a coefficient table")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("target", choices=choices)
        p.add_argument("--config")
        for flag in ("--w", "--beta", "--u", "--s", "--order", "--weight", "--hbar-order"):
            p.add_argument(flag)
        p.add_argument("--out")
        p.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = read_config(args.config) if args.config else {"run": {}, "family": {}, "curve": {}}
        run = merge_flags(cfg, args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    try:
        if args.command == "verify":
            checks, extras = RUNNERS[args.target](run, cfg)
            passed = all(c["pass"] for c in checks)
            doc = {"schema_version": SCHEMA_VERSION, "scenario": args.target, "pass": passed,
                   "checks": checks}
            doc.update(extras)
            code = 0 if passed else 1
        else:
            doc = {"schema_version": SCHEMA_VERSION, "table": args.target,
                   "rows": table_rows(args.target, run, cfg)}
            code = 0
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except COMPUTE_ERRORS as exc:
        print("computation error: %s" % exc, file=sys.stderr)
        return 3
    _emit(render(doc, args.format), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
