"""Small dense determinants and solves over any supported field."""
from __future__ import annotations

from .scalar import is_exact, magnitude


def _pivot(rows, col, start):
    cands = [r for r in range(start, len(rows)) if rows[r][col] != 0]
    if not cands:
        return None
    if all(is_exact(rows[r][col]) for r in cands):
        return cands[0]
    return max(cands, key=lambda r: magnitude(rows[r][col]))


def det(matrix):
    """Determinant by fraction-free Bareiss elimination with row pivoting."""
    m = [list(r) for r in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        p = _pivot(m, k, k)
        if p is None:
            return m[0][0] * 0
        if p != k:
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
            m[i][k] = m[i][k] * 0
        prev = m[k][k]
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]


def solve(matrix, rhs):
    """Solve ``matrix @ x = rhs`` by Gaussian elimination; raises
    ZeroDivisionError when the matrix is singular."""
    n = len(matrix)
    m = [list(r) + [b] for r, b in zip(matrix, rhs)]
    for k in range(n):
        p = _pivot(m, k, k)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        m[k], m[p] = m[p], m[k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n + 1):
                m[i][j] = m[i][j] - f * m[k][j]
    x = [None] * n
    for k in range(n - 1, -1, -1):
        acc = m[k][n]
        for j in range(k + 1, n):
            acc = acc - m[k][j] * x[j]
        x[k] = acc / m[k][k]
    return x


def hadamard_bound(matrix):
    """Product of row 2-norms, an upper bound for |det|."""
    import mpmath
    bound = mpmath.mpf(1)
    for row in matrix:
        bound *= mpmath.sqrt(sum(magnitude(v) ** 2 for v in row))
    return bound
