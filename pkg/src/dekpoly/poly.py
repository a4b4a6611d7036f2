"""Dense univariate polynomials over the fields in :mod:`dekpoly.scalar`."""
from __future__ import annotations

from fractions import Fraction

import mpmath

from .scalar import (Complex, FieldMismatch, QuadExt, field_of, is_exact, magnitude,
                     scalar_from_json, scalar_to_json, to_bigfloat)

__all__ = ["Polynomial", "DivisionNotExact", "Unsupported", "X", "ONE", "PHI",
           "poly_gcd", "squarefree_decomposition"]


class DivisionNotExact(ArithmeticError):
    """Polynomial division left a non-negligible remainder."""


class Unsupported(TypeError):
    """Operation not available for the coefficient field at hand."""


def _coeff_exact(c):
    return is_exact(c)


class Polynomial:
    """Immutable dense polynomial; ``coeffs[k]`` multiplies ``x**k``.

    Trailing exact zeros are trimmed.  Coefficients may be ints, Fractions,
    QuadExt, Complex or mpmath floats, but exact and floating coefficients
    never mix.
    """

    __slots__ = ("coeffs", "_exact")

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and (cs[-1] == 0):
            cs.pop()
        cs = [Fraction(c) if isinstance(c, int) and not isinstance(c, bool) else c for c in cs]
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_exact", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- construction -------------------------------------------------------
    @classmethod
    def monomial(cls, k, c=1):
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots):
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    # -- basic properties ---------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def leading(self):
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def is_exact(self):
        if self._exact is None:
            object.__setattr__(self, "_exact", all(_coeff_exact(c) for c in self.coeffs))
        return self._exact

    @property
    def parity(self):
        """'even', 'odd' or 'none' according to the coefficient support."""
        odd_support = any(c != 0 for c in self.coeffs[1::2])
        even_support = any(c != 0 for c in self.coeffs[0::2])
        if not odd_support:
            return "even"
        if not even_support:
            return "odd"
        return "none"

    def field(self):
        kinds = {field_of(c) for c in self.coeffs}
        for k in ("complex", "bigfloat", "quadext"):
            if k in kinds:
                return k
        return "rational"

    # -- arithmetic -----------------------------------------------------------
    def _check(self, other):
        if self.coeffs and other.coeffs and self.is_exact != other.is_exact:
            raise FieldMismatch("cannot mix exact and floating coefficients")

    @staticmethod
    def _lift(other):
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other):
        other = self._lift(other)
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        if self.coeffs and _coeff_exact(c) != self.is_exact and not isinstance(c, int):
            raise FieldMismatch("cannot scale by a scalar from a different field")
        return Polynomial([a * c for a in self.coeffs])

    def __truediv__(self, c):
        if isinstance(c, Polynomial):
            return exact_divide(self, c)
        return Polynomial([a / c for a in self.coeffs])

    def __pow__(self, n):
        result = Polynomial([1]) if self.is_exact else Polynomial([mpmath.mpf(1)])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self, order=1):
        p = self
        for _ in range(order):
            p = Polynomial([k * c for k, c in enumerate(p.coeffs)][1:])
        return p

    def monic(self):
        return self / self.leading

    def shift_up(self, k):
        """Multiply by x**k."""
        return Polynomial([0] * k + list(self.coeffs)) if self.coeffs else self

    # -- evaluation -----------------------------------------------------------
    def __call__(self, z):
        if isinstance(z, Complex) and z.re == 0 and z.im in (1, -1):
            return self.at_i(int(z.im))
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def at_i(self, sign=1):
        """Evaluate at ``sign * i`` (sign = +1 or -1); returns a Complex."""
        if any(isinstance(c, Complex) for c in self.coeffs):
            acc = Complex(0, 0)
            z = Complex(0, sign)
            for c in reversed(self.coeffs):
                acc = acc * z + c
            return acc
        re = Fraction(0) if self.is_exact else mpmath.mpf(0)
        im = re
        for k, c in enumerate(self.coeffs):
            r = k % 4
            if r == 0:
                re = re + c
            elif r == 1:
                im = im + c
            elif r == 2:
                re = re - c
            else:
                im = im - c
        return Complex(re, im if sign > 0 else -im)

    # -- conversions --------------------------------------------------------
    def to_bigfloat(self):
        return Polynomial([to_bigfloat(c) for c in self.coeffs])

    def map(self, f):
        return Polynomial([f(c) for c in self.coeffs])

    def real_part(self):
        return Polynomial([c.re if isinstance(c, Complex) else c for c in self.coeffs])

    def imag_part(self):
        return Polynomial([c.im if isinstance(c, Complex) else 0 * c for c in self.coeffs])

    def reflect(self):
        """p(-x)."""
        return Polynomial([(-c if k % 2 else c) for k, c in enumerate(self.coeffs)])

    # -- comparisons -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return len(self.coeffs) == len(other.coeffs) and \
            all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs)

    def max_coeff(self):
        if not self.coeffs:
            return mpmath.mpf(0)
        return max(magnitude(c) for c in self.coeffs)

    def distance(self, other):
        """Max coefficientwise |self - other| as an mpf."""
        n = max(len(self.coeffs), len(other.coeffs))
        if n == 0:
            return mpmath.mpf(0)
        return max(magnitude(to_bigfloat(self[k]) - to_bigfloat(other[k])) for k in range(n))

    # -- printing / serialisation ---------------------------------------------
    def __repr__(self):
        return f"Polynomial({format_poly(self)})"

    def __str__(self):
        return format_poly(self)

    def to_json(self):
        return {"coeffs": [scalar_to_json(c) for c in self.coeffs], "field": self.field()}

    @classmethod
    def from_json(cls, obj):
        return cls([scalar_from_json(c) for c in obj["coeffs"]])


X = Polynomial([0, 1])
ONE = Polynomial([1])
PHI = Polynomial([1, 0, 2, 0, 1])  # (1 + x^2)^2


# -- division -------------------------------------------------------------
def poly_divmod(p, q):
    """Euclidean division ``p = q*quot + rem`` with ``deg rem < deg q``."""
    if not q.coeffs:
        raise ZeroDivisionError("polynomial division by zero")
    p._check(q)
    rem = list(p.coeffs)
    dq = q.degree
    lead = q.leading
    if len(rem) <= dq:
        return Polynomial(), p
    quot = [0] * (len(rem) - dq)
    for k in range(len(rem) - 1 - dq, -1, -1):
        c = rem[k + dq] / lead
        quot[k] = c
        if c == 0:
            continue
        for j, b in enumerate(q.coeffs):
            rem[k + j] = rem[k + j] - c * b
    return Polynomial(quot), Polynomial(rem[:dq])


def exact_divide(p, q):
    """Return ``p / q``, raising :class:`DivisionNotExact` on a remainder.

    For floating coefficients the remainder may not exceed
    ``2**(-prec/2) * max(|coeff|)`` of the inputs.
    """
    quot, rem = poly_divmod(p, q)
    if p.is_exact:
        if rem.coeffs:
            raise DivisionNotExact(f"nonzero remainder {rem}")
        return quot
    scale = max(p.max_coeff(), q.max_coeff(), mpmath.mpf(1))
    tol = mpmath.ldexp(scale, -mpmath.mp.prec // 2)
    if rem.coeffs and rem.max_coeff() > tol:
        raise DivisionNotExact(f"remainder {mpmath.nstr(rem.max_coeff(), 5)} exceeds {mpmath.nstr(tol, 5)}")
    return quot


def poly_gcd(p, q):
    """Monic gcd over an exact field (Euclid with monic remainders)."""
    if not (p.is_exact and q.is_exact):
        raise Unsupported("gcd requires exact coefficients")
    a, b = p, q
    if not a.coeffs:
        return b.monic() if b.coeffs else b
    a = a.monic()
    while b.coeffs:
        b = b.monic()
        _, r = poly_divmod(a, b)
        a, b = b, r
    return a.monic()


def squarefree_decomposition(p):
    """Yun's algorithm: list of ``(factor, multiplicity)`` with monic,
    square-free, pairwise coprime factors whose product is monic(p)."""
    if p.degree < 1:
        return []
    p = p.monic()
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = exact_divide(p, a)
    c = exact_divide(dp, a)
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        g = poly_gcd(b, d)
        if g.degree > 0:
            out.append((g, i))
        b = exact_divide(b, g)
        c = exact_divide(d, g)
        d = c - b.derivative()
        i += 1
    return out


# -- pretty printing ------------------------------------------------------
def _is_negative(c):
    if isinstance(c, Fraction):
        return c < 0
    if isinstance(c, QuadExt):
        return (c.a < 0 or c.a == 0) and (c.b < 0 or c.b == 0)
    if isinstance(c, mpmath.mpf):
        return c < 0
    return False


def _fmt_coeff(c):
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, QuadExt):
        if c.b == 0:
            return str(c.a)
        den = c.a.denominator * c.b.denominator // _gcd(c.a.denominator, c.b.denominator)
        an, bn = c.a * den, c.b * den
        root = f"sqrt({c.d})"
        bterm = {1: root, -1: f"-{root}"}.get(int(bn), f"{bn}{root}") if bn.denominator == 1 else f"{bn}{root}"
        if an == 0:
            body = bterm
        else:
            body = f"{an}{'' if bterm.startswith('-') else '+'}{bterm}"
        return body if den == 1 else f"({body})/{den}"
    if isinstance(c, mpmath.mpf):
        return mpmath.nstr(c, 20)
    return str(c)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def format_poly(p, var="x"):
    """Descending-power text such as ``x^4-(15/2)x^2+9/2``."""
    if not p.coeffs:
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        neg = _is_negative(c)
        mag = -c if neg else c
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if k > 0 and mag == 1:
            body = mono
        else:
            txt = _fmt_coeff(mag)
            if k > 0 and any(ch in txt for ch in "+-/*e") and not txt.startswith("("):
                txt = f"({txt})"
            elif k > 0 and any(ch in txt[1:] for ch in "+-") and txt.startswith("(") and not txt.endswith(")"):
                txt = f"({txt})"
            body = txt + mono
        sign = "-" if neg else ("+" if parts else "")
        parts.append(sign + body)
    return "".join(parts)
