"""Finite truncations of semi-infinite banded matrices with exact entries."""
from __future__ import annotations

import mpmath

from .scalar import magnitude, scalar_to_json, to_bigfloat


class BandedOperator:
    """Square ``size x size`` matrix stored as one ``{col: value}`` map per row.

    ``low`` and ``high`` bound the nonzero diagonals: entry (n, m) vanishes
    unless ``n - low <= m <= n + high``.
    """

    def __init__(self, rows, low, high):
        self.rows = [dict(r) for r in rows]
        self.low = low
        self.high = high
        for n, row in enumerate(self.rows):
            for m in row:
                if not (n - low <= m <= n + high) or not (0 <= m < len(self.rows)):
                    raise ValueError(f"entry ({n}, {m}) outside band ({low}, {high})")

    @property
    def size(self):
        return len(self.rows)

    def __getitem__(self, idx):
        n, m = idx
        return self.rows[n].get(m, 0)

    def __matmul__(self, other):
        if other.size != self.size:
            raise ValueError("size mismatch")
        out = []
        for row in self.rows:
            acc = {}
            for k, a in row.items():
                for m, b in other.rows[k].items():
                    acc[m] = acc.get(m, 0) + a * b
            out.append({m: v for m, v in acc.items() if v != 0})
        return BandedOperator(out, self.low + other.low, self.high + other.high)

    def __add__(self, other):
        out = []
        for r1, r2 in zip(self.rows, other.rows):
            acc = dict(r1)
            for m, v in r2.items():
                acc[m] = acc.get(m, 0) + v
            out.append({m: v for m, v in acc.items() if v != 0})
        return BandedOperator(out, max(self.low, other.low), max(self.high, other.high))

    @classmethod
    def identity(cls, size):
        return cls([{n: 1} for n in range(size)], 0, 0)

    def block(self, n):
        """Top-left ``n x n`` block."""
        return BandedOperator([{m: v for m, v in row.items() if m < n} for row in self.rows[:n]],
                              self.low, self.high)

    def apply(self, vec):
        """Row-wise linear combination ``sum_m M[n, m] * vec[m]`` (vec may hold
        polynomials).  Only rows whose whole band lies inside both the
        truncation and ``vec`` are returned, since the others lost entries."""
        out = []
        limit = min(len(vec), self.size)
        for n, row in enumerate(self.rows):
            if n + self.high >= limit or any(m >= len(vec) for m in row):
                break
            terms = [vec[m] * v for m, v in sorted(row.items())]
            acc = terms[0]
            for t in terms[1:]:
                acc = acc + t
            out.append(acc)
        return out

    def offsets(self):
        """Observed (low, high) offsets of the nonzero entries."""
        lo = hi = 0
        for n, row in enumerate(self.rows):
            for m, v in row.items():
                if v != 0:
                    lo = max(lo, n - m)
                    hi = max(hi, m - n)
        return lo, hi

    def max_diff(self, other):
        """Largest entrywise |self - other| (as mpf; exact zero if equal)."""
        worst = mpmath.mpf(0)
        for r1, r2 in zip(self.rows, other.rows):
            for m in set(r1) | set(r2):
                d = r1.get(m, 0) - r2.get(m, 0)
                if d != 0:
                    worst = max(worst, magnitude(to_bigfloat(d)))
        return worst

    def equals(self, other):
        if self.size != other.size:
            return False
        for r1, r2 in zip(self.rows, other.rows):
            for m in set(r1) | set(r2):
                if r1.get(m, 0) != r2.get(m, 0):
                    return False
        return True

    def triplets(self):
        return [(n, m, v) for n, row in enumerate(self.rows) for m, v in sorted(row.items())]

    def to_json(self):
        return {"size": self.size, "low": self.low, "high": self.high,
                "entries": [[n, m, scalar_to_json(v)] for n, m, v in self.triplets()]}

    def __repr__(self):
        return f"BandedOperator(size={self.size}, band=({self.low}, {self.high}))"
