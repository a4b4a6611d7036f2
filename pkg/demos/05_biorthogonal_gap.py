"""
Where the degree gap comes from
===============================

Take the functionals p'(i), p'(-i) and mu_tilde(p psi_k).  Monic
polynomials annihilated by the first k of them exist exactly when the
moment determinant Delta_k is nonzero.  Delta_1 and Delta_2 vanish, which is
why no R of degree 1 or 2 exists.
"""
from dekpoly.dekcore import chebyshev_family
from dekpoly.moments import Degenerate, cheb_exact
from dekpoly.poly import format_poly

eng = cheb_exact()
for k in range(1, 7):
    print(f"Delta_{k} =", eng.delta_k(k))

for k in (1, 2, 3, 4):
    try:
        print(k, format_poly(eng.biortho_poly(k)))
    except Degenerate as exc:
        print(k, "none:", exc)

fam = chebyshev_family()
print(all(eng.biortho_poly(k + 2) == fam.R(k) for k in range(1, 6)))
