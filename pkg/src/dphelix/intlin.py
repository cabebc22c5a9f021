"""Exact integer and rational linear algebra on small dense matrices.

Matrices are tuples of row tuples; vectors are tuples. Everything is exact:
Python ints where the result is integral, ``Fraction`` otherwise.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

__all__ = [
    "Vector", "Matrix", "identity", "transpose", "matmul", "matvec", "dot",
    "columns", "from_columns", "det", "rank", "solve", "solve_any",
    "inverse", "unimodular_inverse", "integer_kernel", "primitive",
    "vec_add", "vec_sub", "vec_scale", "complete_to_basis", "det2",
]


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return tuple(zip(*a)) if a else ()


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def vec_add(u: Sequence, v: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(c, v: Sequence) -> tuple:
    return tuple(c * x for x in v)


def det2(u: Sequence[int], v: Sequence[int]) -> int:
    return u[0] * v[1] - u[1] * v[0]


def columns(a: Sequence[Sequence]) -> tuple:
    return tuple(zip(*a))


def from_columns(cols: Sequence[Sequence]) -> tuple:
    return tuple(zip(*cols))


def det(a: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    m = [list(r) for r in a]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _rref(a: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a:
        return 0
    return len(_rref(a)[1])


def solve_any(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """One rational solution of a x = b, or None if inconsistent."""
    n = len(a[0])
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    m, pivots = _rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = m[i][n]
    return tuple(x)


def solve(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...]:
    """Solve a square nonsingular system exactly."""
    x = solve_any(a, b)
    if x is None or rank(a) < len(a):
        raise ValueError("singular system")
    return x


def inverse(a: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(a)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    m, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return tuple(tuple(row[n:]) for row in m)


def unimodular_inverse(a: Sequence[Sequence[int]]) -> Matrix:
    inv = inverse(a)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(x) for x in row))
    return tuple(out)


def _column_reduce(a: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], int]:
    """Column-style Hermite reduction: returns (a·u, u, number of pivot columns).

    u is unimodular; the trailing columns of a·u past the pivot count are zero.
    """
    m = [list(r) for r in a]
    rows = len(m)
    n = len(m[0]) if rows else 0
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(src: int, dst: int, q: int) -> None:
        # column dst -= q * column src
        for row in m:
            row[dst] -= q * row[src]
        for row in u:
            row[dst] -= q * row[src]

    def colswap(i: int, j: int) -> None:
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    c = 0
    for r in range(rows):
        if c >= n:
            break
        while True:
            nz = [j for j in range(c, n) if m[r][j] != 0]
            if not nz:
                break
            p = min(nz, key=lambda j: abs(m[r][j]))
            if p != c:
                colswap(p, c)
            done = True
            for j in range(c + 1, n):
                if m[r][j] != 0:
                    colop(c, j, m[r][j] // m[r][c])
                    if m[r][j] != 0:
                        done = False
            if done:
                break
        if any(m[r][j] != 0 for j in range(c, n)):
            c += 1
    return m, u, c


def integer_kernel(a: Sequence[Sequence[int]]) -> tuple[Vector, ...]:
    """Saturated Z-basis of {x in Z^n : a x = 0}."""
    n = len(a[0])
    _, u, c = _column_reduce(a)
    return tuple(tuple(u[i][j] for i in range(n)) for j in range(c, n))


def primitive(v: Sequence[int]) -> Vector:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def complete_to_basis(v: Sequence[int]) -> Matrix:
    """Unimodular matrix whose first column is the primitive vector v."""
    n = len(v)
    _, u, _ = _column_reduce([list(v)])
    # v^T u = (±1, 0, ..., 0), so the first row of u^{-1} is ±v^T
    w = unimodular_inverse(tuple(tuple(r) for r in u))
    first = w[0]
    if tuple(first) == tuple(-x for x in v):
        w = (tuple(-x for x in first),) + w[1:]
    if tuple(w[0]) != tuple(v):
        raise ValueError("vector is not primitive")
    # rows of w form a basis whose first member is v
    return transpose(w)
