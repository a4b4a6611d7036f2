"""Modified Christoffel transform: recover P_n from the DEK-type family.

The classical Christoffel determinant for phi(x) = (1 + x^2)^2 collapses
because every R_n' vanishes at +-i.  Instead one forms

    c_n phi(x) S_n(x) = det [[R_n(i),  R_{n+1}(i),  R_{n+2}(i)],
                             [R_n(-i), R_{n+1}(-i), R_{n+2}(-i)],
                             [R_n(x),  R_{n+1}(x),  R_{n+2}(x)]]

and corrects with P_n = S_n + rho_n S_{n-2}.
"""
from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import linalg
from .dekcore import IdentityViolation
from .poly import ONE, PHI, X, DivisionNotExact, Polynomial, exact_divide
from .scalar import Complex, is_zero, magnitude, working_precision

__all__ = ["ChristoffelData", "classical_christoffel_C", "check_S_not_OPS"]


def _real(z, tol, what):
    """Real part of ``z`` after checking that the imaginary part vanishes."""
    if not isinstance(z, Complex):
        return z
    if (tol is None and z.im != 0) or (tol is not None and magnitude(z.im) > tol):
        raise IdentityViolation(f"{what} is not real: {z}")
    return z.re


class ChristoffelData:
    """Cache of S_n, c_n, cofactor a_n and rho_n for one :class:`DekFamily`.

    Plain integrals against mu come from ``family.engine.integrate``; for the
    Hermite closed-form family that engine is the exact moment table.
    """

    def __init__(self, family):
        self.family = family
        self.engine = family.engine
        self._c = {}
        self._S = {}
        self._rho = {}
        self._lock = threading.RLock()

    # -- helpers ----------------------------------------------------------------
    @property
    def exact(self):
        return self.family.exact

    def _prec(self):
        return working_precision(self.family.precision_bits or 256)

    def _tol(self, scale=1):
        return None if self.exact else self.engine.tolerance(scale)

    def _vals(self, n):
        R = self.family.R(n)
        return R.at_i(1), R.at_i(-1)

    # -- c_n ----------------------------------------------------------------------
    def c(self, n):
        """c_n = R_n(i) R_{n+1}(-i) - R_{n+1}(i) R_n(-i)."""
        if n not in self._c:
            with self._prec():
                (a, ac), (b, bc) = self._vals(n), self._vals(n + 1)
                val = a * bc - b * ac
                if is_zero(val, self._tol(magnitude(a) * magnitude(b))):
                    raise IdentityViolation(f"c_{n} vanishes")
                self._c[n] = val
        return self._c[n]

    compute_c = c

    def cofactors(self, n):
        """(a_n, b_n, c_n): bottom-row cofactors of the 3x3 determinant."""
        with self._prec():
            (r0, r0c), (r1, r1c), (r2, r2c) = (self._vals(n + k) for k in range(3))
            a = r1 * r2c - r2 * r1c
            b = -(r0 * r2c - r2 * r0c)
        return a, b, self.c(n)

    def a(self, n):
        """Cofactor a_n (equal to c_{n+1})."""
        return self.cofactors(n)[0]

    cofactor_a = a

    def ratio(self, n):
        """a_n / c_n, a real number."""
        with self._prec():
            r = self.c(n + 1) / self.c(n)
            return _real(r, self._tol(magnitude(r)), f"a_{n}/c_{n}")

    # -- S_n ----------------------------------------------------------------------
    def S_determinant(self, n):
        """S_n from the full cofactor expansion divided by c_n phi."""
        if n < 0:
            return self._zero_poly()
        fam = self.family
        with self._prec():
            a, b, c = self.cofactors(n)
            scale = max(magnitude(a), magnitude(c))
            if not is_zero(b, self._tol(scale)):
                raise IdentityViolation(f"middle cofactor b_{n} = {b} is nonzero")
            d = (fam.R(n).map(Complex).scale(a) + fam.R(n + 1).map(Complex).scale(b)
                 + fam.R(n + 2).map(Complex).scale(c))
            d = d.map(lambda z: z / c)
            phi = PHI.map(Complex) if self.exact else PHI.to_bigfloat().map(Complex)
            try:
                q = exact_divide(d, phi)
            except DivisionNotExact as exc:
                raise IdentityViolation(f"phi does not divide D_{n}: {exc}") from exc
            tol = self._tol(q.max_coeff())
            return Polynomial([_real(z, tol, f"S_{n}") for z in q.coeffs])

    def S_reduced(self, n):
        """S_n = ((a_n/c_n) R_n + R_{n+2}) / phi."""
        if n < 0:
            return self._zero_poly()
        fam = self.family
        with self._prec():
            num = fam.R(n).scale(self.ratio(n)) + fam.R(n + 2)
            phi = PHI if self.exact else PHI.to_bigfloat()
            try:
                return exact_divide(num, phi)
            except DivisionNotExact as exc:
                raise IdentityViolation(f"phi does not divide (a/c)R_{n} + R_{n + 2}") from exc

    def S(self, n):
        """S_n by both routes; they must agree."""
        if n < 0:
            return self._zero_poly()
        if n not in self._S:
            s1, s2 = self.S_determinant(n), self.S_reduced(n)
            if self.exact:
                same = s1 == s2
            else:
                with self._prec():
                    same = s1.degree == s2.degree and s1.distance(s2) <= self._tol(s1.max_coeff())
            if not same:
                raise IdentityViolation(f"determinant and reduced forms of S_{n} disagree")
            if s1.degree != n or s1.leading != 1:
                raise IdentityViolation(f"S_{n} is not monic of degree {n}")
            self._S[n] = s2
        return self._S[n]

    compute_S = S
    transform_S = S

    def _zero_poly(self):
        return Polynomial()

    # -- rho_n ----------------------------------------------------------------------
    def rho(self, n):
        if n in self._rho:
            return self._rho[n]
        if n <= 2:
            val = Fraction(0) if self.exact else mpmath.mpf(0)
        else:
            w = X if n % 2 else X * X
            w = w if self.exact else w.to_bigfloat()
            with self._prec():
                num = self.engine.integrate(w * self.S(n))
                den = self.engine.integrate(w * self.S(n - 2))
                if is_zero(den, self._tol(magnitude(num))):
                    raise IdentityViolation(f"rho_{n} has a vanishing denominator")
                val = -num / den
        self._rho[n] = val
        return val

    compute_rho = rho

    def recover_P(self, n):
        """S_n + rho_n S_{n-2}; checked against the source polynomial."""
        with self._prec():
            p = self.S(n) + self.S(n - 2).scale(self.rho(n)) if n >= 2 else self.S(n)
        src = self.family.P(n)
        if self.exact:
            ok = p == src
        else:
            ok = p.distance(src) <= self._tol(src.max_coeff())
        if not ok:
            raise IdentityViolation(f"S_{n} + rho_{n} S_{n - 2} differs from P_{n}")
        return p

    # -- expansion coefficients phi P_n = R_{n+2} + u_n R_n + v_n R_{n-2} ---------------------
    def u(self, n):
        with self._prec():
            return self.ratio(n) + self.rho(n)

    def v(self, n):
        if n < 2:
            return Fraction(0) if self.exact else mpmath.mpf(0)
        with self._prec():
            return self.rho(n) * self.ratio(n - 2)

    def table(self, max_n):
        """Rows (n, c_n, a_n, rho_n)."""
        return [(n, self.c(n), self.a(n), self.rho(n)) for n in range(max_n + 1)]

    # -- identity checks -----------------------------------------------------------------
    def verify_S_biorthogonality(self, max_n, seed=0):
        """int S_n R_m dmu vanishes except for m in {n, n+2}; also int S_n f dmu = 0
        for a random f of degree n+1 with f'(+-i) = 0."""
        from .zeros import build_critical_poly
        report = BiorthoReport(max_n)
        rng = random.Random(seed)
        fam = self.family
        with self._prec():
            for n in range(max_n + 1):
                S = self.S(n)
                vals = {m: self.engine.integrate(S * fam.R(m)) for m in range(max_n + 3)}
                scale = max(magnitude(v) for v in vals.values())
                tol = self._tol(scale)
                for m, v in vals.items():
                    zero = is_zero(v, tol)
                    expect_zero = m not in (n, n + 2)
                    report.margins.append((n, m, v))
                    if zero != expect_zero:
                        report.violations.append((n, m, v))
                if n >= 1:
                    # degree <= 2 with f'(+-i) = 0 leaves only constants
                    nodes = sorted(rng.sample(range(-50, 51), n - 1))
                    f = build_critical_poly([Fraction(k, 10) for k in nodes]) if nodes else ONE
                    f = f if self.exact else f.to_bigfloat()
                    val = self.engine.integrate(S * f)
                    if not is_zero(val, self._tol(scale * f.max_coeff())):
                        report.violations.append((n, "f", val))
        return report


@dataclass
class BiorthoReport:
    max_n: int
    margins: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def _recurrence_consistent(S, n):
    """Whether x S_n - S_{n+1} lies in span{S_n, S_{n-1}}; both are monic, so
    alpha and beta are read off the top coefficients and the rest must vanish."""
    r = X * S(n) - S(n + 1)
    alpha = r[n]
    r = r - S(n).scale(alpha)
    beta = r[n - 1] if n >= 1 else 0
    if n >= 1:
        r = r - S(n - 1).scale(beta)
    return not r.coeffs, (alpha, beta)


def check_S_not_OPS(S, max_n=4):
    """Index of the first n where x S_n = S_{n+1} + alpha S_n + beta S_{n-1}
    has no solution, with the per-n findings.  ``S`` maps n to S_n (exact)."""
    findings = []
    first = None
    for n in range(max_n):
        ok, sol = _recurrence_consistent(S, n)
        findings.append((n, ok, sol))
        if not ok and first is None:
            first = n
    return first, findings


def classical_christoffel_C(family, n):
    """The 4x4 determinant of the classical Christoffel formula; the rows of
    derivative values vanish identically for DEK-type families."""
    rows = [[], [], [], []]
    for k in range(n, n + 4):
        R = family.R(k)
        dR = R.derivative()
        rows[0].append(R.at_i(1))
        rows[1].append(dR.at_i(1))
        rows[2].append(R.at_i(-1))
        rows[3].append(dR.at_i(-1))
    return linalg.det(rows)
