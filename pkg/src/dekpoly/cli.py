"""Command line front end: ``dekpoly {gen,verify,zeros,factor-dump}``.

Exit codes: 0 success, 2 configuration error, 3 degenerate family,
4 identity violation, 5 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

import mpmath

from . import moments
from .christoffel import ChristoffelData, check_S_not_OPS, classical_christoffel_C
from .classical import chebyshev1, custom, hermite
from .darboux import build_A, build_B, build_J, general_recurrence, support_width, verify_factorization
from .dekcore import DekFamily, FamilyDegenerate, IdentityViolation, R1, dek_norm, verify_R_orthogonality
from .poly import ONE, X, DivisionNotExact, _fmt_coeff, _is_negative, format_poly
from .scalar import Complex, DEFAULT_PRECISION, is_zero, magnitude, scalar_to_json, working_precision
from .zeros import R_multiplicity_profile, check_interlacing, check_S_zero_structure, find_roots, write_zeros_csv

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_IDENTITY, EXIT_IO = 0, 2, 3, 4, 5
PRECISION_ENV = "DEKPOLY_PRECISION"
SUITES = ("orthogonality", "biortho", "christoffel", "factorization", "zeros")
CLAIMED_R_PROFILE = {20: {"real_double": 4}, 25: {"real_double": 7, "real_triple": 2}}


class ConfigError(ValueError):
    pass


# -- configuration ------------------------------------------------------------
def defaults():
    prec = os.environ.get(PRECISION_ENV)
    try:
        prec = int(prec) if prec else DEFAULT_PRECISION
    except ValueError:
        raise ConfigError(f"{PRECISION_ENV} must be an integer") from None
    return {"family": "chebyshev1", "path": None, "backend": "exact", "precision": prec,
            "max_n": 5, "output": None, "format": None, "poly": "R", "n": 0}


def resolve_config(args):
    """flags > config file > defaults (including the precision env var)."""
    cfg = defaults()
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except OSError as exc:
            raise OSError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        unknown = set(file_cfg) - set(cfg)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(file_cfg)
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if cfg["family"] not in ("hermite", "chebyshev1", "custom"):
        raise ConfigError(f"unknown family {cfg['family']!r}")
    if cfg["family"] == "custom" and not cfg["path"]:
        raise ConfigError("--family custom needs --path")
    if cfg["backend"] not in ("exact", "numeric"):
        raise ConfigError(f"unknown backend {cfg['backend']!r}")
    if int(cfg["precision"]) < 64:
        raise ConfigError("precision must be at least 64 bits")
    if int(cfg["max_n"]) < 0 or int(cfg["n"]) < 0:
        raise ConfigError("indices must be nonnegative")
    if cfg["poly"] not in ("R", "S"):
        raise ConfigError("--poly must be R or S")
    cfg["precision"] = int(cfg["precision"])
    return cfg


def load_custom(path):
    """Custom family file: {"a": [...], "measure": {"mass", "nu0", "lambda0", "support"}}."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"custom family file is not valid JSON: {exc}") from None
    if "a" not in obj or not isinstance(obj["a"], list):
        raise ConfigError("custom family file needs a list 'a' of recurrence coefficients")
    try:
        return custom([Fraction(str(v)) for v in obj["a"]], obj.get("measure", {}))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad custom family: {exc}") from None


def make_family(cfg):
    kind, backend, bits = cfg["family"], cfg["backend"], cfg["precision"]
    if kind == "custom":
        src = load_custom(cfg["path"])
    else:
        src = hermite() if kind == "hermite" else chebyshev1()
    if kind == "hermite" and backend == "exact":
        return DekFamily(src, moments.hermite_exact(), closed_form=True)
    try:
        eng = moments.engine_for(src, backend, bits)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return DekFamily(src, eng)


def integral_engine(family, cfg):
    """Engine able to evaluate mu_tilde; the Hermite closed form borrows the
    numeric one."""
    if family.engine.backend == "hermite_exact":
        return moments.hermite_numeric(cfg["precision"])
    return family.engine


# -- formatting -----------------------------------------------------------------
def fmt_scalar(x, bits):
    if isinstance(x, Complex):
        re, im = fmt_scalar(x.re, bits), fmt_scalar(x.im, bits)
        if is_zero(x.im):
            return re
        sign = "-" if _is_negative(x.im) else "+"
        mag = fmt_scalar(-x.im if sign == "-" else x.im, bits)
        if not mag.replace(".", "").isdigit():
            mag = f"({mag})"
        if is_zero(x.re):
            return f"{mag}i" if sign == "+" else f"-{mag}i"
        return f"{re}{sign}{mag}i"
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, max(15, int(bits * 0.30) - 6))
    if _is_negative(x):
        return "-" + _fmt_coeff(-x)
    return _fmt_coeff(x)


def fmt_poly(p, bits):
    with working_precision(bits):
        return format_poly(p)


def _num(x, bits):
    with working_precision(bits):
        return scalar_to_json(x)


# -- commands ---------------------------------------------------------------------
def cmd_gen(cfg):
    fam = make_family(cfg)
    bits, N = cfg["precision"], int(cfg["max_n"])
    cd = ChristoffelData(fam)
    with working_precision(bits):
        rows = []
        for n in range(N + 1):
            rows.append({"n": n, "R": fam.R(n), "S": cd.S(n), "A": fam.A(n), "B": fam.B(n),
                         "c": cd.c(n), "a": cd.a(n), "rho": cd.rho(n)})
    fmt = cfg["format"] or "pretty"
    if fmt == "json":
        doc = {"config": _public(cfg), "family": fam.source.to_json(),
               "R": [{"n": r["n"], "text": fmt_poly(r["R"], bits), "poly": _poly_json(r["R"], bits)} for r in rows],
               "S": [{"n": r["n"], "text": fmt_poly(r["S"], bits), "poly": _poly_json(r["S"], bits)} for r in rows],
               "coefficients": [{"n": r["n"], "A": _opt(r["A"], bits), "B": _opt(r["B"], bits)} for r in rows],
               "christoffel": [{"n": r["n"], "c": _num(r["c"], bits), "a": _num(r["a"], bits),
                                "rho": _num(r["rho"], bits)} for r in rows]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "R_n", "S_n", "A_n", "B_n", "c_n", "a_n", "rho_n"])
        for r in rows:
            w.writerow([r["n"], fmt_poly(r["R"], bits), fmt_poly(r["S"], bits),
                        *(("" if r[k] is None else fmt_scalar(r[k], bits)) for k in ("A", "B", "c", "a", "rho"))])
        return buf.getvalue()
    out = [_header(cfg)]
    out += [f"R_{r['n']}(x) = {fmt_poly(r['R'], bits)}" for r in rows]
    out.append("")
    out += [f"S_{r['n']}(x) = {fmt_poly(r['S'], bits)}" for r in rows]
    out.append("")
    out.append("n | A_n | B_n | c_n | rho_n")
    for r in rows:
        cells = ["-" if r[k] is None else fmt_scalar(r[k], bits) for k in ("A", "B", "c", "rho")]
        out.append(f"{r['n']} | " + " | ".join(cells))
    return "\n".join(out) + "\n"


def _opt(x, bits):
    return None if x is None else _num(x, bits)


def _poly_json(p, bits):
    with working_precision(bits):
        return p.to_json()


def _public(cfg):
    return {k: cfg[k] for k in sorted(cfg) if k not in ("output", "format")}


def _header(cfg):
    return "# " + " ".join(f"{k}={v}" for k, v in _public(cfg).items())


class Checks:
    """Accumulates named checks with numeric margins for the JSON report."""

    def __init__(self):
        self.items = []

    def add(self, name, ok, margin=None, detail=None):
        self.items.append({"check": name, "ok": bool(ok),
                           "margin": None if margin is None else _margin(margin),
                           **({"detail": detail} if detail is not None else {})})

    @property
    def ok(self):
        return all(i["ok"] for i in self.items)


def _margin(x):
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return str(x)
    return mpmath.nstr(magnitude(x), 6)


def suite_orthogonality(fam, cfg, checks):
    eng = integral_engine(fam, cfg)
    N = int(cfg["max_n"])
    with working_precision(cfg["precision"]):
        rep = verify_R_orthogonality(fam, N, eng)
        checks.add("R_n orthogonal for mu_tilde", rep.ok, rep.max_offdiag)
        if fam.source.kind == "hermite":
            for n in range(2, N + 1):
                val = rep.gram_diagonal[n]
                rel = abs(val - dek_norm(n)) / dek_norm(n)
                observed = mpmath.nstr(val / mpmath.sqrt(2 * mpmath.pi), 20)
                checks.add(f"norm n={n} equals (n-1)(n-1)! sqrt(2pi)", rel < mpmath.mpf(10) ** -30, rel,
                           detail=f"observed {observed} sqrt(2pi)")


def suite_biortho(fam, cfg, checks):
    eng = integral_engine(fam, cfg)
    N = int(cfg["max_n"])
    with working_precision(cfg["precision"]):
        tol = eng.tolerance()
        for k in range(1, N + 1):
            d = eng.delta_k(k)
            zero = is_zero(d, tol) if not eng.exact else is_zero(d)
            checks.add(f"Delta_{k}", zero == (k <= 2), d)
        b3 = eng.biortho_poly(3)
        checks.add("biortho_poly(3) = x^3+3x", b3.distance(eng.lift(R1)) <= (tol or 0), b3.distance(eng.lift(R1)))
        for k in range(N - 1):
            R = eng.lift(fam.R(k))
            worst = max(magnitude(eng.functional(j, R)) for j in range(k + 2))
            checks.add(f"c^(j)(R_{k}) = 0, j <= {k + 1}", worst <= (tol or 0) * max(1, R.max_coeff()), worst)
        cd = ChristoffelData(fam)
        rep = cd.verify_S_biorthogonality(max(N - 2, 0))
        checks.add("int S_n R_m dmu pattern", rep.ok, detail=[str(v[:2]) for v in rep.violations] or None)


def suite_christoffel(fam, cfg, checks):
    cd = ChristoffelData(fam)
    N = int(cfg["max_n"])
    with working_precision(cfg["precision"]):
        for n in range(N + 1):
            p = cd.recover_P(n)
            checks.add(f"S_{n} + rho_{n} S_{n - 2} = P_{n}", True, p.distance(fam.P(n)) if not fam.exact else 0)
            b = cd.cofactors(n)[1]
            checks.add(f"b_{n} = 0", is_zero(b) if fam.exact else magnitude(b) <= cd._tol(), b)
        for n in range(min(N, 10) + 1):
            C = classical_christoffel_C(fam, n)
            checks.add(f"C_{n} = 0", is_zero(C) if fam.exact else magnitude(C) == 0, C)
        if fam.exact and N >= 4:
            first, _ = check_S_not_OPS(cd.S, 4)
            checks.add("S_n not an OPS", first is not None, detail=f"first inconsistent n = {first}")


def suite_factorization(fam, cfg, checks):
    N = int(cfg["max_n"])
    rep = verify_factorization(fam, N)
    checks.add("BA = (J^2+I)^2", not any(v[0] == "BA" for v in rep.violations), rep.max_BA_diff)
    checks.add("ABR = phi R", not any(v[0] == "ABR" for v in rep.violations), rep.max_ABR_diff)
    checks.add("BA offsets (4, 4)", rep.BA_offsets == (4, 4), detail=list(rep.BA_offsets))
    psi = ONE + X + X ** 3 * Fraction(1, 3)
    for n in range(5, N + 1):
        w = support_width(general_recurrence(fam, psi, n))
        checks.add(f"psi R_{n} support width", w == 7, detail=w)


def suite_zeros(fam, cfg, checks):
    cd = ChristoffelData(fam)
    N, bits = int(cfg["max_n"]), cfg["precision"]
    for n in range(N + 1):
        rep = check_S_zero_structure(cd, n, bits)
        checks.add(f"S_{n} zeros real, simple, interior", rep.ok, detail=rep.problems or None)
    for n in range(N):
        rep = check_interlacing(cd, n, bits)
        checks.add(f"S_{n} / S_{n + 1} interlace", rep.ok, detail=rep.problems or None)
    if fam.source.kind == "chebyshev1" and fam.exact:
        for n, claim in CLAIMED_R_PROFILE.items():
            if n <= N:
                profile, _ = R_multiplicity_profile(fam, n, bits)
                got = {k: v for k, v in profile.items() if not k.endswith("simple")}
                checks.add(f"R_{n} multiple zeros", got == claim, detail={"expected": claim, "profile": profile})


SUITE_FUNCS = {"orthogonality": suite_orthogonality, "biortho": suite_biortho,
               "christoffel": suite_christoffel, "factorization": suite_factorization,
               "zeros": suite_zeros}


def cmd_verify(cfg, suite):
    fam = make_family(cfg)
    checks = Checks()
    try:
        SUITE_FUNCS[suite](fam, cfg, checks)
    except IdentityViolation as exc:
        checks.add("identity", False, detail=str(exc))
    report = {"config": _public(cfg), "suite": suite, "passed": checks.ok, "checks": checks.items}
    return json.dumps(report, indent=2, sort_keys=True) + "\n", checks.ok


def cmd_zeros(cfg):
    fam = make_family(cfg)
    n, bits = int(cfg["n"]), cfg["precision"]
    if cfg["poly"] == "R":
        p = fam.R(n)
    else:
        p = ChristoffelData(fam).S(n)
    zs = find_roots(p, bits, (cfg["family"], cfg["poly"], n)) if p.degree >= 1 else None
    buf = io.StringIO()
    write_zeros_csv(buf, cfg["poly"], n, zs)
    return buf.getvalue()


def cmd_factor_dump(cfg):
    fam = make_family(cfg)
    N, bits = int(cfg["max_n"]), cfg["precision"]
    rep = verify_factorization(fam, N)
    M = N + 4
    with working_precision(bits):
        A, B, J = build_A(fam, M).block(N), build_B(fam, M).block(N), build_J(fam, M).block(N)
        doc = {"config": _public(cfg), "size": N,
               "A": A.to_json(), "B": B.to_json(), "J": J.to_json(),
               "BA": (build_B(fam, M) @ build_A(fam, M)).block(N).to_json(),
               "diff": {"max_BA_diff": _margin(rep.max_BA_diff), "max_ABR_diff": _margin(rep.max_ABR_diff),
                        "ok": rep.ok}}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n", rep.ok


# -- plumbing -----------------------------------------------------------------------
def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=("hermite", "chebyshev1", "custom"))
    common.add_argument("--path", help="custom family JSON file")
    common.add_argument("--backend", choices=("exact", "numeric"))
    common.add_argument("--precision", "--precision-bits", dest="precision", type=int)
    common.add_argument("--max-n", dest="max_n", type=int)
    common.add_argument("--output", "-o")
    common.add_argument("--format", choices=("json", "csv", "pretty"))
    common.add_argument("--config", help="JSON config file (flags override it)")

    parser = argparse.ArgumentParser(prog="dekpoly", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common], help="generate R_n, S_n and coefficient tables")
    v = sub.add_parser("verify", parents=[common], help="run an identity suite")
    v.add_argument("suite", choices=SUITES)
    z = sub.add_parser("zeros", parents=[common], help="zeros of R_n or S_n as CSV")
    z.add_argument("--poly", choices=("R", "S"))
    z.add_argument("--n", type=int)
    sub.add_parser("factor-dump", parents=[common], help="A, B, J and BA as sparse triplets")
    return parser


def _emit(text, cfg):
    if cfg["output"]:
        with open(cfg["output"], "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        cfg = resolve_config(args)
        ok = True
        if args.command == "gen":
            text = cmd_gen(cfg)
        elif args.command == "verify":
            text, ok = cmd_verify(cfg, args.suite)
        elif args.command == "zeros":
            text = cmd_zeros(cfg)
        else:
            text, ok = cmd_factor_dump(cfg)
        _emit(text, cfg)
        return EXIT_OK if ok else EXIT_IDENTITY
    except ConfigError as exc:
        print(f"dekpoly: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IndexError as exc:
        print(f"dekpoly: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FamilyDegenerate as exc:
        print(f"dekpoly: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (IdentityViolation, DivisionNotExact) as exc:
        print(f"dekpoly: identity violation: {exc}", file=sys.stderr)
        return EXIT_IDENTITY
    except OSError as exc:
        print(f"dekpoly: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
