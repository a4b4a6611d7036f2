import json
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest

from dekpoly.classical import gen_chebyshev, gen_hermite
from dekpoly.dekcore import chebyshev_family
from dekpoly.moments import (Degenerate, cheb_exact, chebyshev_tilde_R1_T, chebyshev_tilde_T,
                             hermite_base_constants, hermite_exact, hermite_numeric,
                             load_base_constants, psi)
from dekpoly.poly import ONE, X
from dekpoly.scalar import Complex, QuadExt, to_bigfloat, working_precision

GOLDEN = Path(__file__).parent / "golden" / "hermite_base_constants.json"


def _rel(a, b):
    return abs(a - b) / max(abs(b), mpmath.mpf(10) ** -300)


def test_golden_constants_match_closed_forms():
    golden = load_base_constants(GOLDEN)
    closed = hermite_base_constants(512)
    with working_precision(512):
        for k in ("nu0", "lambda0"):
            assert _rel(golden[k], closed[k]) < mpmath.mpf(10) ** -150


def test_golden_file_records_oracle():
    raw = json.loads(GOLDEN.read_text())
    assert all(rec["precision_bits"] == 512 and rec["oracle"] for rec in raw.values())


@pytest.mark.parametrize("n", range(2, 21, 2))
def test_cheb_mu_tilde_T_against_quadrature(n):
    # x = cos(t) turns the Chebyshev weight into dt on [0, pi]
    with working_precision(512):
        oracle = mpmath.quad(lambda t: mpmath.cos(n * t) / (1 + mpmath.cos(t) ** 2) ** 2,
                             [0, mpmath.pi / 2, mpmath.pi]) / mpmath.pi
        closed = chebyshev_tilde_T(n)
        assert closed.im == 0
        from_moments = cheb_exact().mu_tilde(gen_chebyshev(n, "T"))
        assert from_moments == closed.re
        assert _rel(to_bigfloat(closed.re), oracle) < mpmath.mpf(10) ** -60


@pytest.mark.parametrize("n", range(1, 20, 2))
def test_cheb_mu_tilde_R1_T(n):
    closed = chebyshev_tilde_R1_T(n)
    assert closed.im == 0
    assert cheb_exact().mu_tilde((X ** 3 + X * 3) * gen_chebyshev(n, "T")) == closed.re


@pytest.mark.parametrize("bits", [256, 512])
@pytest.mark.parametrize("n", [0, 2, 4, 8, 12])
def test_hermite_mu_tilde_against_quadrature(bits, n):
    eng = hermite_numeric(bits)
    with working_precision(bits + 64):
        H = gen_hermite(n).to_bigfloat()
        f = lambda x: H(x) * mpmath.exp(-x * x / 2) / (1 + x * x) ** 2
        oracle = 2 * mpmath.quad(f, [0, 1, 4, 12, mpmath.inf])
    with working_precision(bits):
        val = eng.mu_tilde(gen_hermite(n))
        assert abs(val - oracle) < mpmath.mpf(10) ** -(bits // 5)


def test_moment_recursion_matches_division_route():
    for eng in (cheb_exact(), hermite_numeric(256)):
        for k in range(0, 24, 2):
            p = X ** k + ONE
            a, b = eng.mu_tilde(p), eng.mu_tilde_by_division(p)
            if eng.exact:
                assert a == b
            else:
                assert abs(a - b) < mpmath.mpf(10) ** -60 * max(1, abs(a))


def test_hermite_exact_has_no_modified_moments():
    with pytest.raises(NotImplementedError):
        hermite_exact().mu_tilde(ONE)
    assert hermite_exact().integrate(X ** 4) == 3


def test_psi_kills_derivative_at_i():
    for k in range(1, 12):
        assert psi(k).derivative().at_i() == 0


@pytest.mark.parametrize("eng", [cheb_exact(), hermite_numeric(256)], ids=["cheb", "hermite"])
def test_delta_gap(eng):
    assert eng.delta_k(1) == 0 and eng.delta_k(2) == 0
    d3 = eng.delta_k(3)
    if eng.exact:
        assert d3 == Complex(0, 4)
    else:
        assert abs(to_bigfloat(d3.re)) < 1e-60 and abs(to_bigfloat(d3.im) - 4) < 1e-60


def test_delta_nonzero_beyond_gap():
    eng = cheb_exact()
    for k in range(4, 13):
        assert eng.delta_k(k) != 0


def test_biortho_poly_degenerate_and_regular():
    eng = cheb_exact()
    for k in (1, 2):
        with pytest.raises(Degenerate):
            eng.biortho_poly(k)
    assert eng.biortho_poly(3) == X ** 3 + X * 3


@pytest.mark.parametrize("k", range(1, 9))
def test_biortho_poly_is_R(k):
    fam = chebyshev_family()
    assert cheb_exact().biortho_poly(k + 2) == fam.R(k)


def test_functionals_annihilate_R():
    fam, eng = chebyshev_family(), cheb_exact()
    for k in range(1, 11):
        for j in range(k + 2):
            assert eng.functional(j, fam.R(k)) == 0
