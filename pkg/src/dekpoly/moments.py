"""Measure functionals.

Notation used throughout the package:

* ``mu_k``     plain moments ``int x^k dmu``
* ``lambda_k`` ``int x^k dmu / (1 + x^2)``
* ``nu_k``     ``int x^k dmu / (1 + x^2)^2``; ``mu_tilde(p) = sum p_k nu_k``

All three tables follow from ``mu_k`` and the two base constants
``nu_0``, ``lambda_0`` through ``x^k = x^(k-2) (1 + x^2) - x^(k-2)``.
Exact engines drop a common transcendental factor (``unit``), which cancels
in every ratio the construction uses.
"""
from __future__ import annotations

import functools
import json
import math
import threading
from fractions import Fraction

import mpmath
import numpy as np

from . import linalg
from .poly import PHI, Polynomial, poly_divmod
from .scalar import (DEFAULT_PRECISION, Complex, QuadExt, is_exact, magnitude, to_bigfloat,
                     working_precision)

__all__ = ["MomentEngine", "Degenerate", "psi", "cheb_exact", "hermite_numeric",
           "hermite_exact", "generic_numeric", "generic_from_constants",
           "engine_for", "chebyshev_tilde_T", "chebyshev_tilde_R1_T",
           "load_base_constants", "dump_base_constants", "hermite_base_constants",
           "gauss_rule"]


class Degenerate(ArithmeticError):
    """The moment determinant vanishes, so no biorthogonal polynomial of
    this degree exists."""

    def __init__(self, k, value=None):
        super().__init__(f"Delta_{k} vanishes" + ("" if value is None else f" ({value})"))
        self.k = k
        self.value = value


def psi(k):
    """psi_0 = 1, psi_k = x^(k+2) + (k+2)/k x^k; psi_k'(+-i) = 0."""
    if k == 0:
        return Polynomial([1])
    return Polynomial.monomial(k + 2) + Polynomial.monomial(k, Fraction(k + 2, k))


def _numeric(method):
    @functools.wraps(method)
    def wrapper(self, *args, **kwargs):
        if self.precision_bits is None:
            return method(self, *args, **kwargs)
        with working_precision(self.precision_bits):
            return method(self, *args, **kwargs)
    return wrapper


class MomentEngine:
    """Evaluator for ``mu``, ``mu_tilde`` and the functionals ``c^(j)``.

    ``plain_moment`` returns even moments ``mu_k`` (odd ones vanish for the
    symmetric measures handled here).  ``nu0``/``lambda0`` may be ``None``
    when the modified functional is unavailable (``hermite_exact``).
    """

    def __init__(self, backend, plain_moment, nu0, lambda0, *, unit="1",
                 precision_bits=None, support=(None, None), base_constants=None):
        self.backend = backend
        self._plain = plain_moment
        self.unit = unit
        self.precision_bits = precision_bits
        self.support = tuple(support)
        self.base_constants = dict(base_constants or {})
        self._nu0 = nu0
        self._lam0 = lambda0
        self._mu = []
        self._nu = []
        self._lam = []
        self._lock = threading.RLock()

    @property
    def exact(self):
        return self.precision_bits is None

    def __repr__(self):
        return f"MomentEngine({self.backend!r}, unit={self.unit!r})"

    # -- conversions ------------------------------------------------------------
    def lift(self, p):
        """Bring a polynomial into the engine's coefficient field."""
        if self.exact:
            return p
        with working_precision(self.precision_bits):
            return p if not p.is_exact else p.to_bigfloat()

    def tolerance(self, scale=1):
        """Absolute slack for 'zero' in numeric engines: 2^(-0.8 prec) * scale."""
        if self.exact:
            return None
        with working_precision(self.precision_bits):
            return mpmath.ldexp(mpmath.mpf(1), -int(0.8 * self.precision_bits)) * max(scale, 1)

    # -- moment tables --------------------------------------------------------
    @_numeric
    def plain_moment(self, k):
        if k % 2:
            return self._zero()
        while len(self._mu) <= k:
            with self._lock:
                j = len(self._mu)
                self._mu.append(self._plain(j) if j % 2 == 0 else self._zero())
        return self._mu[k]

    def _zero(self):
        return mpmath.mpf(0) if not self.exact else Fraction(0)

    def _need_tilde(self):
        if self._nu0 is None or self._lam0 is None:
            raise NotImplementedError(
                f"backend {self.backend!r} has no modified moments; use a numeric engine")

    @_numeric
    def lam(self, k):
        """lambda_k = int x^k dmu / (1 + x^2)."""
        self._need_tilde()
        with self._lock:
            while len(self._lam) <= k:
                j = len(self._lam)
                if j % 2:
                    self._lam.append(self._zero())
                elif j == 0:
                    self._lam.append(self._nu0 * 0 + self._lam0)
                else:
                    self._lam.append(self._plain_unlocked(j - 2) - self._lam[j - 2])
        return self._lam[k]

    def _plain_unlocked(self, k):
        while len(self._mu) <= k:
            j = len(self._mu)
            self._mu.append(self._plain(j) if j % 2 == 0 else self._zero())
        return self._mu[k]

    @_numeric
    def moment_recursion(self, k):
        """nu_k from the base constants via nu_k = lambda_{k-2} - nu_{k-2}."""
        self._need_tilde()
        if k >= 2:
            self.lam(k - 2)
        with self._lock:
            while len(self._nu) <= k:
                j = len(self._nu)
                if j % 2:
                    self._nu.append(self._zero())
                elif j == 0:
                    self._nu.append(self._nu0 + self._lam0 * 0)
                else:
                    self._nu.append(self._lam[j - 2] - self._nu[j - 2])
        return self._nu[k]

    nu = moment_recursion

    # -- functionals ------------------------------------------------------------
    @_numeric
    def mu_tilde(self, p):
        """int p dmu / (1 + x^2)^2 (in units of ``self.unit``)."""
        p = self.lift(p)
        acc = self._zero()
        for k in range(0, len(p.coeffs), 2):
            c = p.coeffs[k]
            if c != 0:
                acc = acc + c * self.nu(k)
        return acc

    @_numeric
    def mu_tilde_by_division(self, p):
        """Same functional through p = phi*q + r; independent of the nu table
        above degree 3."""
        self._need_tilde()
        p = self.lift(p)
        q, r = poly_divmod(p, PHI if self.exact else PHI.to_bigfloat())
        nu2 = self._lam0 - self._nu0
        return self.integrate(q) + r[0] * self._nu0 + r[2] * nu2

    @_numeric
    def integrate(self, p):
        """Plain integral int p dmu (in units of ``self.unit``)."""
        p = self.lift(p)
        acc = self._zero()
        for k in range(0, len(p.coeffs), 2):
            c = p.coeffs[k]
            if c != 0:
                acc = acc + c * self.plain_moment(k)
        return acc

    @_numeric
    def functional(self, j, p, normalized=True):
        """c^(0)(p) = p'(i), c^(1)(p) = p'(-i), c^(k+1)(p) = mu_tilde(p psi_{k-1}).

        With ``normalized`` the integral functionals are divided by
        mu_tilde(1), i.e. taken against the probability-normalised measure.
        """
        if j < 0:
            raise ValueError("functional index must be >= 0")
        p = self.lift(p)
        if j in (0, 1):
            return p.derivative().at_i(1 if j == 0 else -1)
        val = self.mu_tilde(p * self.lift(psi(j - 2)))
        if normalized:
            val = val / self.nu(0)
        return Complex(val, val * 0)

    @_numeric
    def moment_matrix(self, k, normalized=True, columns=None):
        """Rows c^(m), m < k; columns x^l, l < ``columns`` (default k)."""
        cols = k if columns is None else columns
        mono = [self.lift(Polynomial.monomial(l)) for l in range(cols)]
        return [[self.functional(m, mono[l], normalized) for l in range(cols)] for m in range(k)]

    @_numeric
    def delta_k(self, k, normalized=True):
        """Leading cofactor of the bordered determinant, (-1)^k det(c_l^(m)).

        This is the normalisation that makes the bordered-determinant
        polynomial monic; it differs from the plain determinant by (-1)^k.
        """
        if k < 1:
            raise ValueError("k must be >= 1")
        d = linalg.det(self.moment_matrix(k, normalized))
        return d if k % 2 == 0 else -d

    def is_degenerate(self, value, matrix):
        if self.exact:
            return value == 0
        bound = linalg.hadamard_bound(matrix)
        return magnitude(value) <= mpmath.mpf(10) ** (-self.precision_bits / 4) * max(bound, 1)

    @_numeric
    def biortho_poly(self, k, normalized=True):
        """Monic degree-k polynomial annihilated by c^(0..k-1), from the
        bordered determinant expanded along its monomial row."""
        full = self.moment_matrix(k, normalized, columns=k + 1)
        square = [row[:k] for row in full]
        delta = linalg.det(square)
        delta = delta if k % 2 == 0 else -delta
        if self.is_degenerate(delta, square):
            raise Degenerate(k, delta)
        coeffs = []
        for l in range(k + 1):
            minor = [row[:l] + row[l + 1:] for row in full]
            cof = linalg.det(minor)
            cof = cof if l % 2 == 0 else -cof
            coeffs.append(cof / delta)
        tol = self.tolerance(max(magnitude(c) for c in coeffs))
        for c in coeffs:
            im = c.im if isinstance(c, Complex) else 0
            if (tol is None and im != 0) or (tol is not None and magnitude(im) > tol):
                raise ArithmeticError(f"biorthogonal polynomial of degree {k} is not real")
        return Polynomial([c.re if isinstance(c, Complex) else c for c in coeffs])


# -- concrete engines -----------------------------------------------------
def _central_binomial_over_4(k):
    j = k // 2
    return Fraction(math.comb(2 * j, j), 4 ** j)


def cheb_exact():
    """Chebyshev first-kind weight; values in Q(sqrt 2), unit pi.

    nu_0 = 3 sqrt2 / 8 and lambda_0 = sqrt2 / 2 (both divided by pi).
    """
    return MomentEngine(
        "cheb_exact",
        lambda k: QuadExt(_central_binomial_over_4(k), 0, 2),
        QuadExt(0, Fraction(3, 8), 2), QuadExt(0, Fraction(1, 2), 2),
        unit="pi", support=(-1, 1),
        base_constants={"nu0": QuadExt(0, Fraction(3, 8), 2),
                        "lambda0": QuadExt(0, Fraction(1, 2), 2)})


def _double_factorial_odd(k):
    # (k-1)!! for even k
    out = 1
    for j in range(k - 1, 0, -2):
        out *= j
    return out


def hermite_base_constants(bits=DEFAULT_PRECISION):
    """nu_0 = sqrt(pi/2) and lambda_0 = pi sqrt(e) erfc(1/sqrt 2) for the
    weight exp(-x^2/2)."""
    with working_precision(bits):
        nu0 = mpmath.sqrt(mpmath.pi / 2)
        lam0 = mpmath.pi * mpmath.sqrt(mpmath.e) * mpmath.erfc(1 / mpmath.sqrt(2))
    return {"nu0": nu0, "lambda0": lam0}


def hermite_numeric(precision_bits=DEFAULT_PRECISION):
    consts = hermite_base_constants(precision_bits)
    with working_precision(precision_bits):
        root = mpmath.sqrt(2 * mpmath.pi)
    return MomentEngine(
        "hermite_numeric",
        lambda k: root * _double_factorial_odd(k),
        consts["nu0"], consts["lambda0"], precision_bits=precision_bits,
        base_constants=consts)


def hermite_exact():
    """Hermite plain moments (k-1)!! in units of sqrt(2 pi); no mu_tilde."""
    return MomentEngine("hermite_exact", lambda k: Fraction(_double_factorial_odd(k)),
                        None, None, unit="sqrt(2*pi)")


def _recurrence_moments(family, count):
    """mu_k / mu_0 for k < count, from the monic recurrence coefficients."""
    coeffs = [Fraction(1)]
    out = [Fraction(1)]
    for _ in range(1, count):
        new = [Fraction(0)] * (len(coeffs) + 1)
        for m, c in enumerate(coeffs):
            if c == 0:
                continue
            new[m + 1] += c
            if m >= 1:
                new[m - 1] += family.a(m) * c
        coeffs = new
        out.append(coeffs[0])
    return out


class _RecurrenceMoments:
    def __init__(self, family, mass):
        self.family = family
        self.mass = mass
        self.table = []

    def __call__(self, k):
        if k >= len(self.table):
            self.table = _recurrence_moments(self.family, max(2 * k + 2, 16))
        val = self.table[k]
        return self.mass * val if is_exact(self.mass) else self.mass * to_bigfloat(val)


def gauss_rule(family, n_nodes, mass=1, precision_bits=DEFAULT_PRECISION):
    """Gauss nodes/weights of the family's measure: numpy eigenvalues of the
    symmetric Jacobi matrix, polished by Newton at full precision."""
    a = [float(family.a(k)) for k in range(1, n_nodes)]
    off = np.sqrt(a)
    guesses = np.linalg.eigvalsh(np.diag(off, 1) + np.diag(off, -1))
    with working_precision(precision_bits):
        avals = [to_bigfloat(family.a(k)) for k in range(1, n_nodes + 1)]
        norms = [mpmath.mpf(1)]
        for k in range(1, n_nodes):
            norms.append(norms[-1] * avals[k - 1])

        def evals(x):
            # P_0..P_n and P_n'
            ps = [mpmath.mpf(1), x]
            dp_prev, dp = mpmath.mpf(0), mpmath.mpf(1)
            for k in range(1, n_nodes):
                ps.append(x * ps[k] - avals[k - 1] * ps[k - 1])
                dp_prev, dp = dp, ps[k] + x * dp - avals[k - 1] * dp_prev
            return ps, dp

        nodes, weights = [], []
        tol = mpmath.ldexp(1, -precision_bits + 8)
        for g in guesses:
            x = mpmath.mpf(float(g))
            for _ in range(200):
                ps, dp = evals(x)
                step = ps[n_nodes] / dp
                x -= step
                if abs(step) <= tol * max(1, abs(x)):
                    break
            else:
                raise ArithmeticError(f"Newton polish of Gauss node near {g} did not converge")
            ps, _ = evals(x)
            weights.append(to_bigfloat(mass) / mpmath.fsum(ps[k] ** 2 / norms[k] for k in range(n_nodes)))
            nodes.append(x)
    return nodes, weights


def _quadrature_constants(family, mass, precision_bits, start=50, max_nodes=1024):
    tol = mpmath.ldexp(1, -int(0.8 * precision_bits))
    n = start
    prev = None
    while n <= max_nodes:
        nodes, weights = gauss_rule(family, n, mass, precision_bits)
        with working_precision(precision_bits):
            nu0 = mpmath.fsum(w / (1 + x * x) ** 2 for x, w in zip(nodes, weights))
            lam0 = mpmath.fsum(w / (1 + x * x) for x, w in zip(nodes, weights))
            if prev is not None and abs(nu0 - prev[0]) <= tol * abs(nu0) \
                    and abs(lam0 - prev[1]) <= tol * abs(lam0):
                return nu0, lam0
        prev = (nu0, lam0)
        n *= 2
    raise ArithmeticError("Gauss quadrature for the base constants did not converge")


def generic_numeric(family, mass=1, precision_bits=DEFAULT_PRECISION, nu0=None, lambda0=None,
                    support=(None, None)):
    """Engine for an arbitrary symmetric family.  Plain moments come exactly
    from the recurrence; the two base constants from Gauss quadrature with
    node doubling unless supplied."""
    with working_precision(precision_bits):
        mass_f = to_bigfloat(mass)
        if nu0 is None or lambda0 is None:
            nu0, lambda0 = _quadrature_constants(family, mass_f, precision_bits)
        nu0, lambda0 = to_bigfloat(nu0), to_bigfloat(lambda0)
    return MomentEngine("generic_numeric", _RecurrenceMoments(family, mass_f), nu0, lambda0,
                        precision_bits=precision_bits, support=support,
                        base_constants={"nu0": nu0, "lambda0": lambda0})


def generic_from_constants(family, mass, nu0, lambda0, support=(None, None)):
    """Exact engine over the field of the supplied constants (e.g. Q)."""
    return MomentEngine("generic_exact", _RecurrenceMoments(family, mass), nu0, lambda0,
                        support=support, base_constants={"nu0": nu0, "lambda0": lambda0})


def engine_for(family, backend="exact", precision_bits=DEFAULT_PRECISION):
    """Default engine for a :class:`~dekpoly.classical.ClassicalFamily`."""
    if family.kind == "chebyshev1":
        if backend == "exact":
            return cheb_exact()
        return generic_numeric(family, mass=mpmath.pi, precision_bits=precision_bits, support=(-1, 1),
                               **_cheb_float_constants(precision_bits))
    if family.kind == "hermite":
        return hermite_exact() if backend == "exact" else hermite_numeric(precision_bits)
    m = family.measure
    support = tuple(m.get("support", (None, None)))
    if backend == "exact":
        if "nu0" not in m or "lambda0" not in m:
            raise ValueError("exact custom engine needs 'nu0' and 'lambda0' in the measure")
        return generic_from_constants(family, Fraction(str(m.get("mass", 1))),
                                      Fraction(str(m["nu0"])), Fraction(str(m["lambda0"])), support)
    with working_precision(precision_bits):
        conv = (lambda v: None if v is None else mpmath.mpf(Fraction(str(v)).numerator) / Fraction(str(v)).denominator)
        return generic_numeric(family, conv(m.get("mass", 1)), precision_bits,
                               conv(m.get("nu0")), conv(m.get("lambda0")), support)


def _cheb_float_constants(bits):
    with working_precision(bits):
        r2 = mpmath.sqrt(2)
        return {"nu0": 3 * r2 / 8 * mpmath.pi, "lambda0": r2 / 2 * mpmath.pi}


# -- Chebyshev closed forms (cross-checks) --------------------------------
def chebyshev_tilde_T(n):
    """mu_tilde(T_n)/pi for even n from T_n(i), U_{n-1}(i):
    ((3 + n sqrt2)/(4 sqrt2)) T_n(i) - i ((3 sqrt2 + 2n)/(4 sqrt2)) U_{n-1}(i)."""
    from .classical import cheb_at_i
    if n % 2:
        return Complex(QuadExt(0, 0, 2), QuadExt(0, 0, 2))
    r2 = QuadExt(0, 1, 2)
    c1 = (3 + n * r2) / (4 * r2)
    c2 = (3 * r2 + 2 * n) / (4 * r2)
    return cheb_at_i(n, "T") * c1 - Complex(0, 1) * c2 * cheb_at_i(n - 1, "U")


def chebyshev_tilde_R1_T(n):
    """mu_tilde((x^3+3x) T_n)/pi for odd n:
    i(3/(2 sqrt2) + n/2) T_n(i) + (n/sqrt2 + 3/2) U_{n-1}(i)."""
    from .classical import cheb_at_i
    if n % 2 == 0:
        return Complex(QuadExt(0, 0, 2), QuadExt(0, 0, 2))
    r2 = QuadExt(0, 1, 2)
    c1 = Fraction(3, 2) / r2 + Fraction(n, 2)
    c2 = n / r2 + Fraction(3, 2)
    return Complex(0, 1) * c1 * cheb_at_i(n, "T") + cheb_at_i(n - 1, "U") * c2


# -- base-constant files ----------------------------------------------------
def dump_base_constants(path, constants, precision_bits, oracle):
    digits = int(precision_bits * math.log10(2)) + 1
    out = {}
    with working_precision(precision_bits):
        for name, val in constants.items():
            out[name] = {"decimal": mpmath.nstr(to_bigfloat(val), digits, strip_zeros=False),
                         "precision_bits": precision_bits, "oracle": oracle}
    with open(path, "w") as fh:
        json.dump(out, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_base_constants(path):
    with open(path) as fh:
        raw = json.load(fh)
    out = {}
    for name, rec in raw.items():
        with working_precision(int(rec["precision_bits"])):
            out[name] = mpmath.mpf(rec["decimal"])
    return out
