"""Symmetric classical families: monic Hermite, Chebyshev, and families
given by the off-diagonal recurrence coefficients of a monic Jacobi matrix."""
from __future__ import annotations

import threading
from fractions import Fraction

from .banded import BandedOperator
from .poly import X, Polynomial
from .scalar import Complex, QuadExt

__all__ = ["ClassicalFamily", "hermite", "chebyshev1", "custom", "gen_hermite",
           "gen_chebyshev", "cheb_at_i", "jacobi_matrix", "family_from_json"]


class ClassicalFamily:
    """Monic symmetric orthogonal family ``x P_n = P_{n+1} + a_n P_{n-1}``.

    ``a`` maps n >= 1 to the recurrence coefficient.  ``measure`` is a free
    form descriptor consumed by :mod:`dekpoly.moments`.
    """

    def __init__(self, kind, a, measure=None, max_index=None):
        self.kind = kind
        self._a = a
        self.measure = dict(measure or {})
        self.max_index = max_index
        self._cache = [Polynomial([1]), X]
        self._lock = threading.RLock()

    def a(self, n):
        if n < 1:
            raise ValueError("recurrence coefficients start at n = 1")
        if self.max_index is not None and n > self.max_index:
            raise IndexError(f"{self.kind} family only defines a_1..a_{self.max_index}")
        return self._a(n)

    jacobi_a = a

    def P(self, n):
        if n < 0:
            return Polynomial()
        if n >= len(self._cache):
            with self._lock:
                while len(self._cache) <= n:
                    k = len(self._cache) - 1
                    self._cache.append(X * self._cache[k] - self._cache[k - 1].scale(self.a(k)))
        return self._cache[n]

    __getitem__ = P

    def __repr__(self):
        return f"ClassicalFamily({self.kind!r})"

    def to_json(self):
        obj = {"kind": self.kind, "measure": self.measure}
        if self.kind == "custom":
            obj["a"] = [str(self.a(n)) for n in range(1, (self.max_index or 0) + 1)]
        return obj


def hermite():
    """Monic Hermite He_n, weight exp(-x^2/2) on the real line."""
    return ClassicalFamily("hermite", lambda n: Fraction(n),
                           {"weight": "exp(-x^2/2)", "support": [None, None]})


def chebyshev1():
    """Monic Chebyshev polynomials of the first kind, weight (1-x^2)^(-1/2)."""
    return ClassicalFamily("chebyshev1",
                           lambda n: Fraction(1, 2) if n == 1 else Fraction(1, 4),
                           {"weight": "(1-x^2)^(-1/2)", "support": [-1, 1]})


def custom(a_values, measure=None):
    """Family from an explicit list ``[a_1, a_2, ...]`` or a callable."""
    if callable(a_values):
        return ClassicalFamily("custom", a_values, measure)
    vals = [Fraction(v) if not isinstance(v, Fraction) else v for v in a_values]
    if any(v == 0 for v in vals):
        raise ValueError("recurrence coefficients must be nonzero")
    return ClassicalFamily("custom", lambda n: vals[n - 1], measure, max_index=len(vals))


def family_from_json(obj):
    kind = obj["kind"]
    if kind == "hermite":
        return hermite()
    if kind == "chebyshev1":
        return chebyshev1()
    if kind == "custom":
        return custom([Fraction(str(v)) for v in obj["a"]], obj.get("measure"))
    raise ValueError(f"unknown family kind {kind!r}")


_HERMITE = hermite()


def gen_hermite(n):
    return _HERMITE.P(n)


def gen_chebyshev(n, kind="T"):
    """Chebyshev ``T_n``, ``U_n`` (standard normalisation) or monic ``T_monic``."""
    if kind == "T_monic":
        return _CHEB.P(n)
    if kind not in ("T", "U"):
        raise ValueError(f"unknown Chebyshev kind {kind!r}")
    if n < 0:
        return Polynomial()
    prev, cur = Polynomial([1]), (X if kind == "T" else X * 2)
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, X * cur * 2 - prev
    return cur


_CHEB = chebyshev1()


def cheb_at_i(n, kind="T"):
    """Exact T_n(i) or U_n(i) in Q(sqrt 2)(i), from the powers of i(1 +- sqrt 2)."""
    if n < 0:
        if kind == "U" and n == -1:
            return Complex(QuadExt(0, 0, 2), QuadExt(0, 0, 2))
        raise ValueError("negative index")
    plus = Complex(QuadExt(0, 0, 2), QuadExt(1, 1, 2))
    minus = Complex(QuadExt(0, 0, 2), QuadExt(1, -1, 2))
    if kind == "T":
        return (plus ** n + minus ** n) / 2
    if kind == "U":
        den = Complex(QuadExt(0, 0, 2), QuadExt(0, 2, 2))  # 2*sqrt(2)*i
        return (plus ** (n + 1) - minus ** (n + 1)) / den
    if kind == "T_monic":
        return cheb_at_i(n, "T") / (2 ** (n - 1)) if n >= 1 else cheb_at_i(0, "T")
    raise ValueError(f"unknown Chebyshev kind {kind!r}")


def jacobi_matrix(family, N):
    """N x N truncation of the monic Jacobi matrix: ones above the diagonal,
    a_1..a_{N-1} below it."""
    rows = []
    for n in range(N):
        row = {}
        if n + 1 < N:
            row[n + 1] = Fraction(1)
        if n >= 1:
            row[n - 1] = family.a(n)
        rows.append(row)
    return BandedOperator(rows, 1, 1)
