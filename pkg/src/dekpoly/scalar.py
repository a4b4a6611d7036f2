"""Coefficient fields: rationals, quadratic extensions Q(sqrt d), complex
pairs over either, and mpmath floats.

Rationals are plain :class:`fractions.Fraction`.  Floats are ``mpmath.mpf``
at the working precision set with :func:`working_precision`.  All values are
immutable.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC

import mpmath

DEFAULT_PRECISION = 256

__all__ = [
    "Fraction", "QuadExt", "Complex", "FieldMismatch", "DEFAULT_PRECISION",
    "working_precision", "to_bigfloat", "to_field", "is_zero", "magnitude",
    "field_of", "scalar_to_json", "scalar_from_json", "I", "sqrt2",
]


class FieldMismatch(TypeError):
    """Raised when two scalars from incompatible fields are combined."""


def working_precision(bits=DEFAULT_PRECISION):
    """Context manager fixing the mpmath binary precision."""
    if bits < 64:
        raise ValueError("precision_bits must be >= 64")
    return mpmath.workprec(bits)


def _is_rational(x):
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class QuadExt:
    """Element ``a + b*sqrt(d)`` of the real quadratic field Q(sqrt d)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=2):
        if d <= 1 or any(d % (p * p) == 0 for p in range(2, math.isqrt(d) + 1)):
            raise ValueError(f"d must be a square-free integer > 1, got {d}")
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise FieldMismatch(f"Q(sqrt {self.d}) vs Q(sqrt {other.d})")
            return other
        if _is_rational(other):
            return QuadExt(other, 0, self.d)
        if isinstance(other, (float, mpmath.mpf, mpmath.mpc)):
            raise FieldMismatch("cannot mix exact QuadExt with floating values")
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if _is_rational(other):
            return QuadExt(self.a * other, self.b * other, self.d)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a * o.a + self.d * self.b * o.b,
                       self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conj(self):
        """Galois conjugate a - b*sqrt(d)."""
        return QuadExt(self.a, -self.b, self.d)

    def norm(self):
        return self.a * self.a - self.d * self.b * self.b

    def __truediv__(self, other):
        if _is_rational(other):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(sqrt d)")
            return QuadExt(self.a / other, self.b / other, self.d)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        num = self * o.conj()
        return QuadExt(num.a / n, num.b / n, self.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return QuadExt(1, 0, self.d) / (self ** -n)
        result, base = QuadExt(1, 0, self.d), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except FieldMismatch:
            return False
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def sign(self):
        """Exact sign of the real number a + b*sqrt(d)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == 0 or sb == 0 or sa == sb:
            return sa or sb
        # opposite signs: compare a^2 with d*b^2
        diff = self.a * self.a - self.d * self.b * self.b
        return sa if diff > 0 else (-sa if diff < 0 else 0)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.to_mpf())

    def to_mpf(self):
        return mpmath.mpf(self.a.numerator) / self.a.denominator + \
            mpmath.mpf(self.b.numerator) / self.b.denominator * mpmath.sqrt(self.d)

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        root = f"sqrt({self.d})"
        bpart = root if self.b == 1 else (f"-{root}" if self.b == -1 else f"{self.b}*{root}")
        if self.a == 0:
            return bpart
        sep = "" if bpart.startswith("-") else "+"
        return f"{self.a}{sep}{bpart}"


def sqrt2():
    return QuadExt(0, 1, 2)


class Complex:
    """Complex number ``re + i*im`` over an arbitrary real field."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("Complex is immutable")

    @staticmethod
    def _parts(other):
        if isinstance(other, Complex):
            return other.re, other.im
        if isinstance(other, mpmath.mpc):
            return other.real, other.imag
        if isinstance(other, complex):
            raise FieldMismatch("builtin complex is not a supported field")
        return other, 0

    def __add__(self, other):
        ore, oim = self._parts(other)
        return Complex(self.re + ore, self.im + oim)

    __radd__ = __add__

    def __sub__(self, other):
        ore, oim = self._parts(other)
        return Complex(self.re - ore, self.im - oim)

    def __rsub__(self, other):
        ore, oim = self._parts(other)
        return Complex(ore - self.re, oim - self.im)

    def __neg__(self):
        return Complex(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, (Complex, mpmath.mpc)):
            return Complex(self.re * other, self.im * other)
        ore, oim = self._parts(other)
        return Complex(self.re * ore - self.im * oim, self.re * oim + self.im * ore)

    __rmul__ = __mul__

    def conj(self):
        return Complex(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        if not isinstance(other, (Complex, mpmath.mpc)):
            if is_zero(other):
                raise ZeroDivisionError("complex division by zero")
            return Complex(self.re / other, self.im / other)
        o = Complex(*self._parts(other))
        den = o.abs2()
        if is_zero(den):
            raise ZeroDivisionError("complex division by zero")
        num = self * o.conj()
        return Complex(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return Complex(*self._parts(other)) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return Complex(1, 0) / (self ** -n)
        result, base = Complex(self.re * 0 + 1, self.im * 0), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (Complex, mpmath.mpc)) or _is_rational(other) \
                or isinstance(other, (QuadExt, mpmath.mpf)):
            ore, oim = self._parts(other)
            return self.re == ore and self.im == oim
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def to_mpc(self):
        return mpmath.mpc(to_bigfloat(self.re), to_bigfloat(self.im))

    def __repr__(self):
        return f"Complex({self.re!r}, {self.im!r})"

    def __str__(self):
        return f"({self.re})+({self.im})i"


I = Complex(Fraction(0), Fraction(1))


def to_bigfloat(x):
    """Convert an exact or float scalar to mpf/mpc at the current precision."""
    if isinstance(x, Complex):
        return x.to_mpc()
    if isinstance(x, QuadExt):
        return x.to_mpf()
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return +x
    return mpmath.mpf(x)


def to_field(x, like):
    """Convert an exact scalar ``x`` into the field of ``like``."""
    if isinstance(like, (mpmath.mpf, mpmath.mpc)):
        return to_bigfloat(x)
    if isinstance(like, QuadExt) and _is_rational(x):
        return QuadExt(x, 0, like.d)
    return x


def field_of(x):
    if isinstance(x, Complex):
        return "complex"
    if isinstance(x, mpmath.mpc):
        return "complex"
    if isinstance(x, QuadExt):
        return "quadext"
    if isinstance(x, mpmath.mpf):
        return "bigfloat"
    if _is_rational(x) or isinstance(x, _RationalABC):
        return "rational"
    raise FieldMismatch(f"unsupported scalar type {type(x).__name__}")


def is_exact(x):
    if isinstance(x, Complex):
        return is_exact(x.re) and is_exact(x.im)
    return isinstance(x, (int, Fraction, QuadExt))


def magnitude(x):
    """|x| as an mpf; works for every supported field."""
    if isinstance(x, Complex):
        return mpmath.sqrt(to_bigfloat(x.abs2()))
    return abs(to_bigfloat(x))


def is_zero(x, tol=None):
    """Exact zero test, or ``|x| <= tol`` when a tolerance is given."""
    if tol is None:
        if isinstance(x, Complex):
            return not x
        return x == 0
    return magnitude(x) <= tol


def _rational_to_json(x):
    x = Fraction(x)
    return {"kind": "rational", "num": str(x.numerator), "den": str(x.denominator)}


def scalar_to_json(x):
    if isinstance(x, Complex):
        return {"kind": "complex", "re": scalar_to_json(x.re), "im": scalar_to_json(x.im)}
    if isinstance(x, mpmath.mpc):
        return {"kind": "complex", "re": scalar_to_json(x.real), "im": scalar_to_json(x.imag)}
    if isinstance(x, QuadExt):
        return {"kind": "quadext", "a": _rational_to_json(x.a),
                "b": _rational_to_json(x.b), "d": x.d}
    if isinstance(x, mpmath.mpf):
        bits = mpmath.mp.prec
        digits = int(bits * math.log10(2)) + 1
        return {"kind": "bigfloat", "value": mpmath.nstr(x, digits, strip_zeros=False),
                "precision_bits": bits}
    if _is_rational(x):
        return _rational_to_json(x)
    raise FieldMismatch(f"cannot serialise {type(x).__name__}")


def scalar_from_json(obj):
    kind = obj["kind"]
    if kind == "rational":
        return Fraction(int(obj["num"]), int(obj["den"]))
    if kind == "quadext":
        return QuadExt(scalar_from_json(obj["a"]), scalar_from_json(obj["b"]), int(obj["d"]))
    if kind == "complex":
        return Complex(scalar_from_json(obj["re"]), scalar_from_json(obj["im"]))
    if kind == "bigfloat":
        with mpmath.workprec(int(obj["precision_bits"])):
            return mpmath.mpf(obj["value"])
    raise ValueError(f"unknown scalar kind {kind!r}")
