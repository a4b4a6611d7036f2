"""
Recovering the source polynomials
=================================

The classical Christoffel determinant is identically zero here, because
every R_n has a critical point at +-i.  A 3x3 determinant in R_n, R_{n+1},
R_{n+2} divided by phi = (1 + x^2)^2 gives S_n, and S_n + rho_n S_{n-2}
returns P_n.
"""
from dekpoly.christoffel import ChristoffelData, check_S_not_OPS, classical_christoffel_C
from dekpoly.dekcore import chebyshev_family, hermite_family
from dekpoly.poly import format_poly

dek = ChristoffelData(hermite_family())
for n in range(6):
    print(f"S_{n} = {format_poly(dek.S(n))}   rho_{n} = {dek.rho(n)}")

print("classical determinant:", classical_christoffel_C(dek.family, 3))

cheb = ChristoffelData(chebyshev_family())
for n in range(8):
    assert cheb.recover_P(n) == cheb.family.P(n)
print("P_0..P_7 recovered exactly")

# S_n is not itself an orthogonal family: its three-term recurrence breaks
first, findings = check_S_not_OPS(cheb.S, 5)
print("first n without a three-term recurrence:", first)
