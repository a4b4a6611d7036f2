"""
Building DEK-type families
==========================

R_n = P_{n+2} + A_n P_n + B_n P_{n-2} with R_n'(+-i) = 0, orthogonal for
dmu / (1 + x^2)^2.  Degrees 1 and 2 never occur.
"""
from dekpoly.dekcore import chebyshev_family, hermite_family, verify_R_orthogonality
from dekpoly.poly import format_poly

# Hermite source solved numerically: the 2x2 systems land on A_n = 2(n+2)
fam = hermite_family("numeric", 256)
for n in range(1, 7):
    print(n, float(fam.A(n)), float(fam.B(n)))

# Chebyshev source in exact Q(sqrt 2) arithmetic
cheb = chebyshev_family()
for n in range(5):
    print(f"R_{n} =", format_poly(cheb.R(n)))

# derivative at i vanishes for every member
print(all(cheb.R(n).derivative().at_i() == 0 for n in range(1, 12)))

rep = verify_R_orthogonality(cheb, 10)
print("orthogonal:", rep.ok, "largest off-diagonal:", rep.max_offdiag)
