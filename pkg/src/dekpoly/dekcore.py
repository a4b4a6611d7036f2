"""DEK-type families ``R_n = P_{n+2} + A_n P_n + B_n P_{n-2}``.

``R_0 = 1`` and ``R_1 = x^3 + 3x`` are forced.  For n >= 2 the pair
(A_n, B_n) solves a 2x2 system: one row imposes ``R_n'(i) = 0``, the other
makes R_n orthogonal (for mu_tilde) to R_0 when n is even and to R_1 when n
is odd.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .classical import gen_hermite
from .moments import engine_for
from .poly import ONE, PHI, X, Polynomial
from .scalar import Complex, is_zero, magnitude, working_precision

__all__ = ["DekFamily", "FamilyDegenerate", "IdentityViolation", "R1",
           "dek_closed_form", "dek_identity_check", "verify_R_orthogonality",
           "hermite_family", "chebyshev_family", "dek_norm"]

R1 = X ** 3 + X * 3


class FamilyDegenerate(ArithmeticError):
    """The 2x2 system for (A_n, B_n) is singular."""

    def __init__(self, n, det=None):
        super().__init__(f"DEK-type family degenerates at n = {n}")
        self.n = n
        self.det = det


class IdentityViolation(AssertionError):
    """A relation that must hold identically failed."""


class DekFamily:
    """Lazily built sequence R_0, R_1, ... with its coefficients (A_n, B_n).

    ``closed_form`` replaces the 2x2 solve by the known Hermite coefficients
    A_n = 2(n+2), B_n = (n+2)(n-1); the engine is then only used for plain
    integrals.
    """

    B1_CONVENTION = Fraction(0)

    def __init__(self, source, engine, closed_form=False):
        if closed_form and source.kind != "hermite":
            raise ValueError("closed form coefficients exist only for the Hermite source")
        self.source = source
        self.engine = engine
        self.closed_form = closed_form
        self.coeffs = [(None, None)]
        self.polys = [self._one()]
        self._lock = threading.RLock()

    def __repr__(self):
        return f"DekFamily({self.source.kind!r}, {self.engine.backend!r})"

    @property
    def exact(self):
        return self.closed_form or self.engine.exact

    @property
    def precision_bits(self):
        return None if self.exact else self.engine.precision_bits

    def _one(self):
        return ONE if self.engine.exact or self.closed_form else ONE.to_bigfloat()

    def P(self, n):
        """Source polynomial in the family's coefficient field."""
        p = self.source.P(n)
        return p if self.exact else self.engine.lift(p)

    def R(self, n):
        with self._lock:
            while len(self.polys) <= n:
                self._extend()
        return self.polys[n]

    __getitem__ = R

    def A(self, n):
        self.R(n)
        return self.coeffs[n][0]

    def B(self, n):
        self.R(n)
        return self.coeffs[n][1]

    def construct_R(self, n):
        return self.R(n)

    def _extend(self):
        n = len(self.polys)
        if self.precision_bits is None:
            A, B = self._solve(n)
        else:
            with working_precision(self.precision_bits):
                A, B = self._solve(n)
        P = self.P
        R = P(n + 2) + P(n).scale(A) + (P(n - 2).scale(B) if n >= 2 else Polynomial())
        self.coeffs.append((A, B))
        self.polys.append(R)

    def _solve(self, n):
        if self.closed_form:
            return Fraction(2 * (n + 2)), Fraction((n + 2) * (n - 1))
        P = self.P
        if n == 1:
            # R_1 = x^3 + 3x: only the x coefficient of P_3 matters
            A = 3 - P(3)[1]
            B = self.B1_CONVENTION if self.exact else mpmath.mpf(0)
            return A, B
        eng = self.engine
        weight = ONE if n % 2 == 0 else R1
        weight = weight if self.exact else eng.lift(weight)
        m = [[P(n).derivative().at_i(), P(n - 2).derivative().at_i()],
             [Complex(eng.mu_tilde(weight * P(n))), Complex(eng.mu_tilde(weight * P(n - 2)))]]
        rhs = [-P(n + 2).derivative().at_i(), -Complex(eng.mu_tilde(weight * P(n + 2)))]
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if self.exact:
            if is_zero(det):
                raise FamilyDegenerate(n, det)
        else:
            scale = max(magnitude(v) for row in m for v in row)
            if magnitude(det) < mpmath.mpf(10) ** (-self.precision_bits / 4) * scale ** 2:
                raise FamilyDegenerate(n, det)
        A = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det
        B = (m[0][0] * rhs[1] - rhs[0] * m[1][0]) / det
        for v in (A, B):
            if self.exact and v.im != 0:
                raise IdentityViolation(f"non-real coefficient at n = {n}: {v}")
        return A.re, B.re

    def build(self, max_n):
        self.R(max_n)
        return self.polys[:max_n + 1]

    def coefficient_table(self, max_n):
        self.R(max_n)
        return [(n, self.coeffs[n][0], self.coeffs[n][1]) for n in range(max_n + 1)]

    def P_basis_coordinates(self, n):
        """Coordinates of R_n in the P basis (exact families), highest first."""
        r = self.R(n)
        out = {}
        for k in range(n + 2, -1, -1):
            p = self.P(k)
            c = r[k] / p.leading if k <= r.degree else 0
            if c != 0:
                out[k] = c
                r = r - p.scale(c)
        if r.coeffs:
            raise IdentityViolation(f"R_{n} not in span of P")
        return out


def hermite_family(backend="exact", precision_bits=256):
    from .classical import hermite
    src = hermite()
    eng = engine_for(src, "exact" if backend == "exact" else "numeric", precision_bits)
    return DekFamily(src, eng, closed_form=(backend == "exact"))


def chebyshev_family(backend="exact", precision_bits=256):
    from .classical import chebyshev1
    src = chebyshev1()
    return DekFamily(src, engine_for(src, backend, precision_bits))


def dek_closed_form(n):
    """F_n = He_{n+2} + 2(n+2) He_n + (n+2)(n-1) He_{n-2}; F_0 = 1."""
    if n == 0:
        return ONE
    He = gen_hermite
    return He(n + 2) + He(n) * (2 * (n + 2)) + He(n - 2) * ((n + 2) * (n - 1))


def _wronskian_form(n):
    He = gen_hermite
    cols = [He(1), He(2), He(n + 2)]
    rows = [cols, [c.derivative() for c in cols], [c.derivative(2) for c in cols]]
    det = (rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
           - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
           + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]))
    return det / Fraction(n * (n + 1))


@dataclass
class IdentityReport:
    n: int
    closed_form: Polynomial
    product_form: Polynomial
    wronskian_form: Polynomial

    @property
    def ok(self):
        return self.closed_form == self.product_form == self.wronskian_form


def dek_identity_check(n):
    """Compare the three classical representations of F_n (n >= 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    He = gen_hermite
    product = R1 * He(n - 1) - (ONE + X * X) * He(n - 2) * (n - 1)
    return IdentityReport(n, dek_closed_form(n), product, _wronskian_form(n))


def dek_norm(n):
    """(n-1)(n-1)! sqrt(2 pi) at the current mpmath precision (n >= 1)."""
    return (n - 1) * mpmath.factorial(n - 1) * mpmath.sqrt(2 * mpmath.pi)


@dataclass
class OrthogonalityReport:
    max_n: int
    gram_diagonal: list
    violations: list = field(default_factory=list)
    max_offdiag: object = 0
    tolerance: object = None

    @property
    def ok(self):
        return not self.violations


def verify_R_orthogonality(family, max_n, engine=None):
    """mu_tilde(R_n R_m) for all m < n <= max_n, plus positivity of R_n^2."""
    eng = engine or family.engine
    polys = [family.R(n) for n in range(max_n + 1)]
    if not eng.exact:
        polys = [eng.lift(p) for p in polys]
    diag = [eng.mu_tilde(p * p) for p in polys]
    tol = None if eng.exact else eng.tolerance(max(magnitude(d) for d in diag))
    report = OrthogonalityReport(max_n, diag, tolerance=tol)
    worst = mpmath.mpf(0)
    for n in range(max_n + 1):
        for m in range(n):
            v = eng.mu_tilde(polys[n] * polys[m])
            mag = magnitude(v)
            worst = max(worst, mag)
            if (tol is None and v != 0) or (tol is not None and mag > tol):
                report.violations.append((n, m, v))
        d = diag[n]
        if not d > 0:
            report.violations.append((n, n, d))
    report.max_offdiag = worst
    return report
