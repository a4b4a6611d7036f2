"""
Discrete Darboux factorisation
==============================

A carries P to R and B carries R back to phi P, so B A = (J^2 + I)^2 on the
Jacobi matrix J.  The swapped product A B is the nine-term recurrence of R.
"""
from fractions import Fraction

from dekpoly.darboux import build_A, build_B, general_recurrence, support_width, verify_factorization
from dekpoly.dekcore import chebyshev_family
from dekpoly.poly import ONE, PHI, X

fam = chebyshev_family()
rep = verify_factorization(fam, 20)
print("B A - (J^2+I)^2:", rep.max_BA_diff, " band:", rep.BA_offsets)

AB = build_A(fam, 14) @ build_B(fam, 14)
print("row 6 of A B:", {m: str(v) for m, v in AB.rows[6].items()})
print(general_recurrence(fam, PHI, 6) == AB.rows[6])

# any psi with psi'(+-i) = 0 gives a finite recurrence
psi = ONE + X + X ** 3 * Fraction(1, 3)
for n in (5, 8, 11):
    print(n, support_width(general_recurrence(fam, psi, n)))
