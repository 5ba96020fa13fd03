"""Small exact linear algebra over the integers and rationals.

Matrices are plain lists of rows. Everything here is exact; sizes are tiny
(dimension at most ~6), so no attempt is made at asymptotic efficiency.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

Vector = tuple[int, ...]
Matrix = list[list[int]]


def vgcd(v: Sequence[int]) -> int:
    return reduce(gcd, (abs(x) for x in v), 0)


def primitive(v: Sequence[int]) -> Vector:
    g = vgcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(x // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    return vgcd(v) == 1


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def sign_normalize(v: Sequence[int]) -> Vector:
    """Flip ``v`` so that its first nonzero entry is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(rows: Sequence[Sequence]) -> int:
    return len(_rref(rows)[1])


def _rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    if not a:
        return a, pivots
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Integer basis (primitive vectors) of the rational kernel of ``rows``."""
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    a, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -a[r][f]
        den = reduce(lambda x, y: x * y // gcd(x, y), (x.denominator for x in v), 1)
        basis.append(primitive([int(x * den) for x in v]))
    return basis


def solve(m: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Unique solution of the square system ``m x = b`` or None if singular."""
    n = len(m)
    aug = [list(row) + [rhs] for row, rhs in zip(m, b)]
    a, pivots = _rref(aug)
    if pivots != list(range(n)):
        return None
    return [a[i][n] for i in range(n)]


def cross(vectors: Sequence[Sequence[int]]) -> Vector:
    """Generalized cross product of n-1 vectors in Z^n.

    The result is orthogonal to every input; it is zero iff the inputs are
    linearly dependent.
    """
    n = len(vectors) + 1
    out = []
    for j in range(n):
        minor = [[v[c] for c in range(n) if c != j] for v in vectors]
        out.append((-1) ** j * det(minor))
    return tuple(out)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    cols = list(zip(*b))
    return [[dot(row, col) for col in cols] for row in a]


def matvec(m: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    return tuple(dot(row, v) for row in m)


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*m)]


def inverse(m: Sequence[Sequence[int]]) -> list[list[Fraction]] | None:
    n = len(m)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    a, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in a]


def unimodular_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    inv = inverse(m)
    if inv is None or any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not invertible over the integers")
    return [[int(x) for x in row] for row in inv]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def bezout(v: Sequence[int]) -> Vector:
    """Integer vector ``c`` with ``dot(c, v) == gcd(v)``; zero entries stay zero."""
    coeffs = [0] * len(v)
    g = 0
    for i, x in enumerate(v):
        if x == 0:
            continue
        g2, s, t = xgcd(g, x)
        coeffs = [c * s for c in coeffs]
        coeffs[i] = t
        g = g2
    return tuple(coeffs)
