"""Zeros of S_n and R_n: location, reality, interlacing, exact multiplicities."""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .poly import ONE, X, Polynomial, squarefree_decomposition
from .scalar import DEFAULT_PRECISION, Complex, is_exact, to_bigfloat, working_precision

__all__ = ["ZeroSet", "RootFindingError", "find_roots", "build_critical_poly",
           "check_S_zero_structure", "check_interlacing", "R_multiplicity_profile",
           "write_zeros_csv", "CSV_HEADER"]

CSV_HEADER = ("poly_kind", "n", "re", "im", "multiplicity")
MAX_NEWTON = 200


class RootFindingError(ArithmeticError):
    pass


@dataclass
class ZeroSet:
    poly_id: tuple
    roots: list
    multiplicities: list
    method: str

    @property
    def degree(self):
        return sum(self.multiplicities)

    def real_roots(self):
        return [r.real for r in self.roots if r.imag == 0]

    def all_real(self):
        return all(r.imag == 0 for r in self.roots)

    def rows(self):
        """(root, multiplicity) once per root counted with multiplicity."""
        return [(r, m) for r, m in zip(self.roots, self.multiplicities) for _ in range(m)]


def _to_mpc_coeffs(p):
    out = []
    for c in p.coeffs:
        if isinstance(c, Complex):
            out.append(mpmath.mpc(to_bigfloat(c.re), to_bigfloat(c.im)))
        else:
            out.append(mpmath.mpc(to_bigfloat(c)))
    return out


def _horner(cs, z):
    v = mpmath.mpc(0)
    d = mpmath.mpc(0)
    for c in reversed(cs):
        d = d * z + v
        v = v * z + c
    return v, d


def _simple_roots(cs):
    """Roots of a square-free polynomial given by mpc coefficients
    (ascending): numpy companion eigenvalues polished by Newton."""
    deg = len(cs) - 1
    if deg < 1:
        return []
    lead = cs[-1]
    monic = [c / lead for c in cs]
    seeds = np.roots([complex(c) for c in reversed(monic)]) if deg > 1 else [complex(-monic[0])]
    eps = mpmath.ldexp(1, -mpmath.mp.prec + 8)
    roots = []
    for s in seeds:
        z = mpmath.mpc(s)
        for _ in range(MAX_NEWTON):
            v, d = _horner(monic, z)
            if d == 0:
                break
            step = v / d
            z -= step
            if abs(step) <= eps * max(1, abs(z)):
                break
        roots.append(z)
    if not _distinct(roots):
        # Newton collapsed two seeds onto one root; fall back to a global solver
        roots = list(mpmath.polyroots(list(reversed(monic)), maxsteps=400, extraprec=2 * mpmath.mp.prec))
    scale = max(1, max(abs(c) for c in monic))
    tol = mpmath.ldexp(scale, -mpmath.mp.prec // 2)
    for z in roots:
        if abs(_horner(monic, z)[0]) > tol * max(1, abs(z)) ** deg:
            raise RootFindingError(f"residual too large at {mpmath.nstr(z, 10)}")
    return roots


def _distinct(roots):
    for i, a in enumerate(roots):
        for b in roots[i + 1:]:
            if abs(a - b) <= mpmath.ldexp(1, -mpmath.mp.prec // 2) * max(1, abs(a)):
                return False
    return True


def _clean(roots, real_poly):
    """Snap real or imaginary parts below the noise floor to zero for real
    polynomials."""
    if not real_poly:
        return roots
    tol = mpmath.ldexp(1, -int(mpmath.mp.prec * 0.6))
    snap = lambda v, z: 0 if abs(v) <= tol * max(1, abs(z)) else v
    return [mpmath.mpc(snap(z.real, z), snap(z.imag, z)) for z in roots]


def _sort_key(z):
    return (z.real, z.imag)


def _is_real_poly(p):
    return not any(isinstance(c, Complex) and c.im != 0 for c in p.coeffs)


def find_roots(p, precision_bits=DEFAULT_PRECISION, poly_id=None):
    """All roots of ``p`` with multiplicities.

    Exact inputs go through a square-free decomposition, so multiplicities are
    certified; floating inputs merge roots closer than 10^(-bits/8).
    """
    poly_id = poly_id or ("", "", p.degree)
    if p.degree < 1:
        return ZeroSet(poly_id, [], [], "companion")
    real_poly = _is_real_poly(p)
    with working_precision(precision_bits):
        if p.is_exact:
            roots, mults = [], []
            for factor, m in squarefree_decomposition(p):
                rs = _clean(_simple_roots(_to_mpc_coeffs(factor)), real_poly)
                roots += rs
                mults += [m] * len(rs)
            method = "exact_gcd"
        else:
            raw = _clean(_simple_roots_or_clusters(_to_mpc_coeffs(p)), real_poly)
            roots, mults = _cluster(raw, precision_bits)
            method = "companion"
        order = sorted(range(len(roots)), key=lambda k: _sort_key(roots[k]))
        return ZeroSet(poly_id, [roots[k] for k in order], [mults[k] for k in order], method)


def _simple_roots_or_clusters(cs):
    try:
        return _simple_roots(cs)
    except RootFindingError:
        monic = [c / cs[-1] for c in cs]
        return list(mpmath.polyroots(list(reversed(monic)), maxsteps=400, extraprec=4 * mpmath.mp.prec))


def _cluster(roots, precision_bits):
    radius = mpmath.mpf(10) ** (-precision_bits / 8)
    groups = []
    for z in roots:
        for g in groups:
            if abs(g[0] - z) <= radius * max(1, abs(z)):
                g.append(z)
                break
        else:
            groups.append([z])
    return [sum(g) / len(g) for g in groups], [len(g) for g in groups]


def build_critical_poly(nodes):
    """Monic f = (x^2 + b x + c) prod (x - x_j) with f'(i) = f'(-i) = 0.

    The real pair (b, c) solves the real and imaginary parts of f'(i) = 0;
    the quadratic factor has no real roots.
    """
    nodes = list(nodes)
    if not nodes:
        raise ValueError("at least one node is required: f = x^2 + b x + c has f'(i) = 2i + b != 0")
    if len(set(nodes)) != len(nodes):
        raise ValueError("nodes must be distinct")
    Q = Polynomial.from_roots(nodes)
    qi, dqi = Q.at_i(1), Q.derivative().at_i(1)
    # b (Q(i) + i Q'(i)) + c Q'(i) = Q'(i) - 2i Q(i)
    i = Complex(0, 1)
    alpha = qi + i * dqi
    gamma = dqi - i * 2 * qi
    det = alpha.re * dqi.im - dqi.re * alpha.im
    if det == 0:
        raise ArithmeticError("singular system for the quadratic factor")
    b = (gamma.re * dqi.im - dqi.re * gamma.im) / det
    c = (alpha.re * gamma.im - gamma.re * alpha.im) / det
    quad = Polynomial([c, b, 1])
    disc = b * b - 4 * c
    if (disc >= 0) if is_exact(disc) else (disc > -mpmath.ldexp(1, -mpmath.mp.prec // 2)):
        raise ArithmeticError("quadratic factor has real roots")
    return quad * Q


@dataclass
class ZeroReport:
    n: int
    ok: bool
    roots: list = field(default_factory=list)
    problems: list = field(default_factory=list)


def _support(engine):
    lo, hi = engine.support if engine is not None else (None, None)
    return lo, hi


def check_S_zero_structure(christoffel, n, precision_bits=DEFAULT_PRECISION):
    """S_n has n real, simple zeros strictly inside the support of mu."""
    S = christoffel.S(n)
    zs = find_roots(S, precision_bits, ("S", n))
    report = ZeroReport(n, True, zs.roots)
    if not zs.all_real():
        report.problems.append("non-real zero")
    if any(m != 1 for m in zs.multiplicities) or len(zs.roots) != n:
        report.problems.append("multiple zero")
    lo, hi = _support(christoffel.engine)
    margin = mpmath.mpf(10) ** -30
    for r in zs.real_roots():
        if (lo is not None and not r > lo + margin) or (hi is not None and not r < hi - margin):
            report.problems.append(f"zero {mpmath.nstr(r, 10)} outside the support interior")
    report.ok = not report.problems
    return report


def check_interlacing(christoffel, n, precision_bits=DEFAULT_PRECISION):
    """Zeros of S_n strictly separate consecutive zeros of S_{n+1}."""
    inner = find_roots(christoffel.S(n), precision_bits).real_roots()
    outer = find_roots(christoffel.S(n + 1), precision_bits).real_roots()
    report = ZeroReport(n, True, [inner, outer])
    if len(inner) != n or len(outer) != n + 1:
        report.problems.append("zero sets are not fully real")
    else:
        for k, x in enumerate(inner):
            if not outer[k] < x < outer[k + 1]:
                report.problems.append(f"interlacing fails at k = {k}")
    report.ok = not report.problems
    return report


_MULT_NAMES = {1: "simple", 2: "double", 3: "triple"}


def R_multiplicity_profile(family, n, precision_bits=DEFAULT_PRECISION):
    """Counts of distinct zeros of R_n by reality and multiplicity.

    Returns ``(profile, zeroset)``; ``profile`` has keys such as
    ``real_simple``, ``real_double``, ``complex_simple``.
    """
    R = family.R(n)
    if not R.is_exact:
        warnings.warn("numeric coefficients: multiplicities from root clustering", RuntimeWarning)
    zs = find_roots(R, precision_bits, (family.source.kind, "R", n))
    profile = {}
    for z, m in zip(zs.roots, zs.multiplicities):
        key = f"{'real' if z.imag == 0 else 'complex'}_{_MULT_NAMES.get(m, f'mult{m}')}"
        profile[key] = profile.get(key, 0) + 1
    return dict(sorted(profile.items())), zs


def _fmt(x, digits):
    x = mpmath.mpf(x)
    if x == 0:
        return "0"
    return mpmath.nstr(x, digits, min_fixed=-5, max_fixed=5, strip_zeros=True)


def write_zeros_csv(stream, poly_kind, n, zeroset, digits=30):
    """One CSV row per root counted with multiplicity; header always written."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_HEADER)
    if zeroset is None:
        return
    for z, m in zeroset.rows():
        w.writerow([poly_kind, n, _fmt(z.real, digits), _fmt(z.imag, digits), m])
