"""Recompute the Hermite-weight base constants by adaptive quadrature.

    nu0     = int exp(-x^2/2) / (1 + x^2)^2 dx
    lambda0 = int exp(-x^2/2) / (1 + x^2)   dx

Writes tests/golden/hermite_base_constants.json.  The library derives the
same numbers from sqrt(pi/2) and pi sqrt(e) erfc(1/sqrt 2); the tests compare
the two routes.
"""
import pathlib

import mpmath

from dekpoly.moments import dump_base_constants

BITS = 512
OUT = pathlib.Path(__file__).resolve().parents[1] / "tests" / "golden" / "hermite_base_constants.json"


def quad(power):
    f = lambda x: mpmath.exp(-x * x / 2) / (1 + x * x) ** power
    # the integrand is even: integrate on [0, inf) with breakpoints and double
    return 2 * mpmath.quad(f, [0, 1, 4, 12, mpmath.inf])


def main():
    with mpmath.workprec(BITS + 64):
        consts = {"nu0": quad(2), "lambda0": quad(1)}
    dump_base_constants(OUT, consts, BITS,
                        oracle="mpmath.quad tanh-sinh on [0,1,4,12,inf], 576-bit working precision")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
