"""Acceptance criteria 1-9.  Each test prints a PASS/FAIL line; the terminal
summary repeats one line per criterion.  Numeric criteria run at 256 and
512 bits so that precision-limited results stand out."""
import subprocess
import sys
import time
from fractions import Fraction

import mpmath
import pytest

import test_poly
import test_scalar
from dekpoly.christoffel import ChristoffelData, classical_christoffel_C
from dekpoly.darboux import general_recurrence, support_width, verify_factorization
from dekpoly.dekcore import (R1, chebyshev_family, dek_closed_form, dek_norm, hermite_family,
                             verify_R_orthogonality)
from dekpoly.moments import cheb_exact, hermite_numeric
from dekpoly.poly import ONE, X, Polynomial
from dekpoly.scalar import Complex, QuadExt, magnitude, working_precision
from dekpoly.zeros import R_multiplicity_profile, check_interlacing, check_S_zero_structure

r2 = QuadExt(0, 1)
BITS = [256, 512]


class Tally:
    def __init__(self, number, limit):
        self.number, self.limit = number, limit
        self.failures = []
        self.start = time.perf_counter()

    def check(self, label, ok):
        if not ok:
            self.failures.append(label)

    def finish(self, tag=""):
        secs = time.perf_counter() - self.start
        self.check(f"runtime {secs:.2f} s exceeds {self.limit} s", self.limit is None or secs < self.limit)
        status = "PASS" if not self.failures else "FAIL"
        print(f"\ncriterion {self.number}{tag}: {status} ({secs:.2f} s)"
              + "".join(f"\n  - {f}" for f in self.failures))
        assert not self.failures, f"criterion {self.number}{tag}: " + "; ".join(self.failures)


@pytest.mark.criterion(1)
def test_criterion_1_golden_polynomials():
    t = Tally(1, 1)
    cheb, dek = chebyshev_family(), hermite_family()
    t.check("F_1 = x^3+3x", dek_closed_form(1) == X ** 3 + X * 3 == dek.R(1))
    dek_S = [ONE, X, X ** 2 - ONE, X ** 3 - X * 4, X ** 4 - X ** 2 * Fraction(15, 2) + Fraction(9, 2)]
    cd = ChristoffelData(dek)
    for n, s in enumerate(dek_S):
        t.check(f"DEK S_{n}", cd.S(n) == s)
    cheb_R = [
        ONE,
        X ** 3 + X * 3,
        X ** 4 + X ** 2 * 2 + Polynomial([1 - 4 * r2 / 3]),
        X ** 5 + (X ** 3).scale((41 - 5 * r2) / 28) + X.scale((-17 - 15 * r2) / 28),
        X ** 6 + (X ** 4).scale(-3 * (-859 + 192 * r2) / 2402) + (X ** 2).scale(-(2052 + 1152 * r2) / 2402)
        + Polynomial([-(7859 + 5592 * r2) / 2402]),
    ]
    for n, p in enumerate(cheb_R):
        got = cheb.R(n)
        if got != p:
            diff = {k: str(got[k] - p[k]) for k in range(p.degree + 1) if got[k] != p[k]}
            t.check(f"Chebyshev R_{n} (coefficient differences {diff})", False)
    cheb_S = [ONE, X, X ** 2 - Fraction(1, 2), X ** 3 - X * Fraction(23, 30),
              X ** 4 - X ** 2 * Fraction(49, 48) + Fraction(13, 96)]
    cc = ChristoffelData(cheb)
    for n, s in enumerate(cheb_S):
        t.check(f"Chebyshev S_{n}", cc.S(n) == s)
    t.finish()


@pytest.mark.criterion(2)
@pytest.mark.parametrize("bits", BITS)
def test_criterion_2_coefficient_formulas(bits):
    t = Tally(2, 10)
    fam = hermite_family("numeric", bits)
    with working_precision(bits):
        for n in range(1, 21):
            A = fam.A(n)
            t.check(f"A_{n}", abs(A - 2 * (n + 2)) / (2 * (n + 2)) < mpmath.mpf(10) ** -40)
            if n >= 2:
                B = fam.B(n)
                t.check(f"B_{n}", abs(B - (n + 2) * (n - 1)) / ((n + 2) * (n - 1)) < mpmath.mpf(10) ** -40)
    t.check("Chebyshev A_1 = 15/4", chebyshev_family().A(1) == Fraction(15, 4))
    t.finish(f" [{bits} bits]")


@pytest.mark.criterion(3)
@pytest.mark.parametrize("bits", BITS)
def test_criterion_3_orthogonality(bits):
    t = Tally(3, 30)
    rep = verify_R_orthogonality(chebyshev_family(), 12)
    t.check("Chebyshev exact off-diagonal zero", rep.ok and rep.max_offdiag == 0)
    fam = hermite_family("numeric", bits)
    rep = verify_R_orthogonality(fam, 12)
    t.check(f"Hermite off-diagonal {mpmath.nstr(rep.max_offdiag, 5)} < 1e-50",
            rep.max_offdiag < mpmath.mpf(10) ** -50)
    with working_precision(bits):
        root = mpmath.sqrt(2 * mpmath.pi)
        recorded = {n: rep.gram_diagonal[n] / root for n in (0, 1)}
        print(f"\n  recorded norms / sqrt(2pi): n=0 {mpmath.nstr(recorded[0], 15)}, "
              f"n=1 {mpmath.nstr(recorded[1], 15)}")
        for n in range(2, 11):
            val = rep.gram_diagonal[n]
            rel = abs(val - dek_norm(n)) / dek_norm(n)
            t.check(f"norm n={n}: observed {mpmath.nstr(val / root, 12)} sqrt(2pi), "
                    f"formula {mpmath.nstr(dek_norm(n) / root, 12)} sqrt(2pi)", rel < mpmath.mpf(10) ** -30)
    t.finish(f" [{bits} bits]")


@pytest.mark.criterion(4)
@pytest.mark.parametrize("backend", ["exact"] + [f"numeric-{b}" for b in BITS])
def test_criterion_4_biorthogonality(backend):
    t = Tally(4, 30)
    if backend == "exact":
        eng, fam = cheb_exact(), chebyshev_family()
        zero = lambda v, scale=1: v == 0
    else:
        bits = int(backend.split("-")[1])
        eng, fam = hermite_numeric(bits), hermite_family("numeric", bits)
        zero = lambda v, scale=1: magnitude(v) <= eng.tolerance(scale)
    with working_precision(eng.precision_bits or 256):
        t.check("Delta_1 = 0", zero(eng.delta_k(1)))
        t.check("Delta_2 = 0", zero(eng.delta_k(2)))
        d3 = eng.delta_k(3)
        if eng.exact:
            t.check("Delta_3 = 4i", d3 == Complex(0, 4))
        else:
            t.check("Delta_3 = 4i", zero(magnitude(d3.re) + magnitude(d3.im - 4)))
        for k in range(4, 13):
            t.check(f"Delta_{k} != 0", not eng.is_degenerate(eng.delta_k(k), eng.moment_matrix(k)))
        b3 = eng.biortho_poly(3)
        t.check("biortho_poly(3) = x^3+3x", b3 == R1 if eng.exact else b3.distance(eng.lift(R1)) < 1e-60)
        for k in range(0, 11):
            R = eng.lift(fam.R(k))
            for j in range(k + 2):
                t.check(f"c^({j})(R_{k}) = 0", zero(eng.functional(j, R), R.max_coeff()))
    t.finish(f" [{backend}]")


@pytest.mark.criterion(5)
@pytest.mark.parametrize("bits", BITS)
def test_criterion_5_christoffel_round_trip(bits):
    t = Tally(5, 10)
    cheb, dek_num = ChristoffelData(chebyshev_family()), ChristoffelData(hermite_family("numeric", bits))
    with working_precision(bits):
        for n in range(16):
            p = cheb.S(n) + cheb.S(n - 2).scale(cheb.rho(n))
            t.check(f"Chebyshev P_{n}", p == cheb.family.P(n))
            q = dek_num.S(n) + dek_num.S(n - 2).scale(dek_num.rho(n))
            t.check(f"Hermite P_{n}", q.distance(dek_num.family.P(n).to_bigfloat()) < mpmath.mpf(10) ** -50)
        t.check("Chebyshev rho_3, rho_4", (cheb.rho(3), cheb.rho(4)) == (Fraction(1, 60), Fraction(1, 48)))
        dek_exact = ChristoffelData(hermite_family())
        t.check("DEK rho_3, rho_4 (exact)", (dek_exact.rho(3), dek_exact.rho(4)) == (1, Fraction(3, 2)))
        t.check("DEK rho_3, rho_4 (numeric)", abs(dek_num.rho(3) - 1) < mpmath.mpf(10) ** -40
                and abs(dek_num.rho(4) - mpmath.mpf(3) / 2) < mpmath.mpf(10) ** -40)
    for n in range(11):
        t.check(f"C_{n} = 0", classical_christoffel_C(cheb.family, n) == 0
                and classical_christoffel_C(dek_exact.family, n) == 0)
    t.finish(f" [{bits} bits]")


@pytest.mark.criterion(6)
def test_criterion_6_darboux():
    t = Tally(6, 30)
    psi = ONE + X + X ** 3 * Fraction(1, 3)
    for name, fam in (("Chebyshev", chebyshev_family()), ("DEK", hermite_family())):
        rep = verify_factorization(fam, 20)
        t.check(f"{name} BA = (J^2+I)^2", rep.max_BA_diff == 0)
        rep = verify_factorization(fam, 17)
        t.check(f"{name} AB R = phi R, n <= 16", rep.max_ABR_diff == 0 and rep.ok)
        for n in range(5, 16):
            t.check(f"{name} psi R_{n} width 7", support_width(general_recurrence(fam, psi, n)) == 7)
    t.finish()


@pytest.mark.criterion(7)
def test_criterion_7_zeros():
    t = Tally(7, 120)
    for name, fam in (("Chebyshev", chebyshev_family()), ("DEK", hermite_family())):
        cd = ChristoffelData(fam)
        for n in range(1, 26):
            t.check(f"{name} S_{n} real/simple/interior", check_S_zero_structure(cd, n).ok)
        for n in range(1, 25):
            t.check(f"{name} S_{n}/S_{n + 1} interlace", check_interlacing(cd, n).ok)
    cheb = chebyshev_family()
    for n, claim in {20: {"real_double": 4}, 25: {"real_double": 7, "real_triple": 2}}.items():
        profile, zs = R_multiplicity_profile(cheb, n)
        got = {k: v for k, v in profile.items() if not k.endswith("simple")}
        t.check(f"R_{n} multiple zeros {claim} (exact profile {profile})", got == claim)
    t.finish()


PROPERTIES = [
    test_scalar.test_quadext_ring_axioms, test_scalar.test_rational_ring_axioms,
    test_scalar.test_norm_multiplicative, test_scalar.test_quadext_division_inverts_multiplication,
    test_scalar.test_complex_conjugation,
    test_poly.test_ring_axioms, test_poly.test_ring_axioms_q_sqrt2, test_poly.test_parity_invariants,
    test_poly.test_conjugate_evaluation_symmetry, test_poly.test_exact_division_round_trip,
    test_poly.test_exact_division_round_trip_q_sqrt2,
]


@pytest.mark.criterion(8)
@pytest.mark.parametrize("prop", PROPERTIES, ids=lambda f: f.__name__)
def test_criterion_8_property_suites(prop):
    t = Tally(8, None)
    t.check(f"{prop.__name__} runs 1000 cases", prop.hypothesis.inner_test is not None
            and prop._hypothesis_internal_use_settings.max_examples == 1000)
    prop()
    t.finish(f" [{prop.__name__}]")


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "dekpoly.cli", *args], capture_output=True, check=True).stdout


@pytest.mark.criterion(9)
def test_criterion_9_determinism():
    t = Tally(9, None)
    for args in (("gen", "--max-n", "8", "--format", "json"),
                 ("gen", "--family", "hermite", "--backend", "numeric", "--max-n", "6", "--format", "csv"),
                 ("zeros", "--poly", "R", "--n", "12"),
                 ("zeros", "--family", "hermite", "--poly", "S", "--n", "10")):
        t.check(" ".join(args), _cli(*args) == _cli(*args))
    t.finish()
