"""
Zeros
=====

S_n has n real simple zeros inside the support, and consecutive S_n
interlace.  R_n has two non-real zeros near +-i; exact square-free
decomposition settles multiplicities.
"""
import mpmath

from dekpoly.christoffel import ChristoffelData
from dekpoly.dekcore import chebyshev_family
from dekpoly.zeros import R_multiplicity_profile, check_interlacing, find_roots

cd = ChristoffelData(chebyshev_family())
inner = find_roots(cd.S(6)).real_roots()
outer = find_roots(cd.S(7)).real_roots()
print([mpmath.nstr(x, 8) for x in outer])
print("  ", [mpmath.nstr(x, 8) for x in inner])
print("interlace:", check_interlacing(cd, 6).ok)

for n in (20, 25):
    profile, zs = R_multiplicity_profile(cd.family, n)
    print(f"R_{n}:", profile)
    print("   non-real:", [mpmath.nstr(z, 8) for z in zs.roots if z.imag != 0])
