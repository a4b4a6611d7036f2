from fractions import Fraction

import mpmath
import pytest

from dekpoly.banded import BandedOperator
from dekpoly.darboux import (InvalidPsi, build_A, build_B, build_J, general_recurrence,
                             support_width, verify_factorization)
from dekpoly.poly import ONE, PHI, X

PSI = ONE + X + X ** 3 * Fraction(1, 3)


@pytest.mark.parametrize("which", ["cheb", "dek"])
def test_exact_factorization(which, cheb, dek):
    fam = cheb if which == "cheb" else dek
    rep = verify_factorization(fam, 20)
    assert rep.ok
    assert rep.max_BA_diff == 0 and rep.max_ABR_diff == 0
    assert rep.BA_offsets == (4, 4)


@pytest.mark.parametrize("bits", [256, 512])
def test_numeric_factorization(bits):
    from dekpoly.dekcore import hermite_family
    rep = verify_factorization(hermite_family("numeric", bits), 16)
    assert rep.ok and rep.max_BA_diff < mpmath.mpf(2) ** (-bits // 2)


def test_A_maps_P_to_R(cheb):
    A = build_A(cheb, 12)
    R = A.apply([cheb.P(n) for n in range(12)])
    assert R == [cheb.R(n) for n in range(len(R))]
    assert len(R) == 10


def test_B_maps_R_to_phi_P(dek):
    B = build_B(dek, 12)
    out = B.apply([dek.R(n) for n in range(12)])
    assert out == [PHI * dek.P(n) for n in range(len(out))]


def test_J_entries_numeric():
    from dekpoly.dekcore import hermite_family
    J = build_J(hermite_family("numeric", 256), 5)
    assert isinstance(J[2, 1], mpmath.mpf) and J[2, 1] == 2


def test_apply_drops_truncated_rows():
    M = BandedOperator([{0: 1, 1: 1}, {0: 1, 1: 1, 2: 1}, {1: 1, 2: 1}], 1, 1)
    assert M.apply([1, 2, 3]) == [3, 6]


def test_band_validation():
    with pytest.raises(ValueError):
        BandedOperator([{2: 1}, {}, {}], 0, 1)


@pytest.mark.parametrize("n", range(5, 16))
def test_general_recurrence_width(n, cheb, dek):
    for fam in (cheb, dek):
        coeffs = general_recurrence(fam, PSI, n)
        assert support_width(coeffs) == 7
        acc = None
        for m, c in coeffs.items():
            term = fam.R(m).scale(c)
            acc = term if acc is None else acc + term
        assert acc == PSI * fam.R(n)


def test_general_recurrence_phi_matches_AB(cheb):
    A, B = build_A(cheb, 20), build_B(cheb, 20)
    AB = A @ B
    for n in range(2, 12):
        coeffs = general_recurrence(cheb, PHI, n)
        assert coeffs == {m: v for m, v in AB.rows[n].items() if v != 0}


def test_invalid_psi(cheb):
    with pytest.raises(InvalidPsi):
        general_recurrence(cheb, X * X, 3)


def test_numeric_general_recurrence():
    from dekpoly.dekcore import hermite_family
    coeffs = general_recurrence(hermite_family("numeric", 256), PSI, 8)
    assert support_width(coeffs) == 7
