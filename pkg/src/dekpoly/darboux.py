"""Discrete Darboux factorisation (J^2 + I)^2 = B A.

A maps the source basis to the DEK-type basis (R = A P) and B maps back after
multiplying by phi (phi P = B R).  The commuted product A B then encodes the
nine-term recurrence phi R = A B R.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .banded import BandedOperator
from .christoffel import ChristoffelData
from .classical import jacobi_matrix
from .dekcore import IdentityViolation
from .poly import ONE, PHI, X, Polynomial
from .scalar import is_zero, magnitude, to_bigfloat, working_precision

__all__ = ["BandedOperator", "InvalidPsi", "build_A", "build_B", "build_J",
           "verify_factorization", "general_recurrence", "support_width", "FactorizationReport"]


class InvalidPsi(ValueError):
    """psi'(i) or psi'(-i) does not vanish."""


def _lift(family, p):
    return p if family.exact else p.to_bigfloat()


def build_A(family, N):
    """N x N truncation; row n holds (B_n, A_n, 1) at columns (n-2, n, n+2)."""
    family.R(N)
    rows = []
    for n in range(N):
        if n == 0:
            row = {0: Fraction(1) if family.exact else mpmath.mpf(1)}
        else:
            row = {n: family.A(n)}
            if n >= 2:
                row[n - 2] = family.B(n)
            if n + 2 < N:
                row[n + 2] = Fraction(1) if family.exact else mpmath.mpf(1)
        rows.append({m: v for m, v in row.items() if v != 0})
    return BandedOperator(rows, 2, 2)


def build_B(family, N, christoffel=None):
    """N x N truncation of phi P_n = R_{n+2} + u_n R_n + v_n R_{n-2}."""
    cd = christoffel or ChristoffelData(family)
    rows = []
    for n in range(N):
        row = {n: cd.u(n)}
        if n >= 2:
            row[n - 2] = cd.v(n)
        if n + 2 < N:
            row[n + 2] = Fraction(1) if family.exact else mpmath.mpf(1)
        rows.append({m: v for m, v in row.items() if v != 0})
    return BandedOperator(rows, 2, 2)


def build_J(family, N):
    J = jacobi_matrix(family.source, N)
    if family.exact:
        return J
    with working_precision(family.precision_bits):
        return BandedOperator([{m: to_bigfloat(v) for m, v in r.items()} for r in J.rows], 1, 1)


@dataclass
class FactorizationReport:
    N: int
    max_BA_diff: object = 0
    max_ABR_diff: object = 0
    BA_offsets: tuple = (0, 0)
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def verify_factorization(family, N, christoffel=None):
    """Compare the N x N block of B A with (J^2 + I)^2 and check A B R = phi R
    for rows 0..N-1; operators are built at size N + 4."""
    M = N + 4
    with working_precision(family.precision_bits or 256):
        A = build_A(family, M)
        B = build_B(family, M, christoffel)
        J = build_J(family, M)
        K = J @ J + BandedOperator.identity(M)
        target = (K @ K).block(N)
        BA = (B @ A).block(N)
        rep = FactorizationReport(N, BA_offsets=(B @ A).offsets())
        rep.max_BA_diff = BA.max_diff(target)
        tol = None if family.exact else mpmath.ldexp(1, -int(0.8 * family.precision_bits)) * 10 ** 6
        if (tol is None and not BA.equals(target)) or (tol is not None and rep.max_BA_diff > tol):
            rep.violations.append(("BA", rep.max_BA_diff))
        R = [family.R(n) for n in range(M)]
        ABR = (A @ B).apply(R)
        phi = _lift(family, PHI)
        worst = mpmath.mpf(0)
        for n in range(N):
            d = ABR[n].distance(phi * R[n]) if not family.exact else (0 if ABR[n] == phi * R[n] else 1)
            worst = max(worst, d)
        rep.max_ABR_diff = worst
        if (tol is None and worst != 0) or (tol is not None and worst > tol * max(1, max(r.max_coeff() for r in R[:N]))):
            rep.violations.append(("ABR", worst))
    return rep


def general_recurrence(family, psi, n):
    """Coefficients {m: c_{n,m}} with psi R_n = sum_m c_{n,m} R_m.

    Expansion runs in the basis {R_0, x, x^2, R_1, R_2, ...}, eliminating
    the top degree first; the x and x^2 coordinates must come out zero.
    """
    with working_precision(family.precision_bits or 256):
        psi = _lift(family, psi)
        d = psi.derivative()
        tol = None if family.exact else mpmath.ldexp(psi.max_coeff(), -int(0.8 * family.precision_bits))
        if not (is_zero(d.at_i(1), tol) and is_zero(d.at_i(-1), tol)):
            raise InvalidPsi("psi'(+-i) must vanish")
        r = psi * family.R(n)
        scale = r.max_coeff()
        tol = None if family.exact else mpmath.ldexp(max(scale, 1), -int(0.7 * family.precision_bits))
        out = {}
        for deg in range(r.degree, 2, -1):
            c = r[deg]
            if c != 0:
                out[deg - 2] = c
                r = r - family.R(deg - 2).scale(c)
        for k in (1, 2):
            if not is_zero(r[k], tol):
                raise IdentityViolation(f"psi R_{n} has a nonzero x^{k} coordinate")
        if r[0] != 0:
            out[0] = r[0]
        if tol is not None:
            out = {m: c for m, c in out.items() if magnitude(c) > tol}
    k = psi.degree
    if any(m < n - k or m > n + k for m in out):
        raise IdentityViolation(f"expansion of psi R_{n} leaves the band [n-{k}, n+{k}]")
    return dict(sorted(out.items()))


def support_width(coeffs):
    ms = [m for m, c in coeffs.items() if c != 0]
    return max(ms) - min(ms) + 1 if ms else 0
