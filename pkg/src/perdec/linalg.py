"""Exact linear algebra over Fraction.

Matrices are plain lists of lists.  Everything is Gauss-Jordan based and
canonical: reduced echelon forms, first-nonzero pivoting, free variables set
to zero in particular solutions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

Vec = list[Fraction]
Mat = list[Vec]


def fr(rows: Sequence[Sequence]) -> Mat:
    return [[Fraction(x) for x in row] for row in rows]


def zeros(m: int, n: int) -> Mat:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Mat:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def transpose(a: Mat) -> Mat:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Mat, b: Mat) -> Mat:
    if a and b and len(a[0]) != len(b):
        raise ValueError("shape mismatch")
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Mat, v: Vec) -> Vec:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def madd(a: Mat, b: Mat) -> Mat:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mscale(a: Mat, k) -> Mat:
    k = Fraction(k)
    return [[x * k for x in row] for row in a]


def rref(a: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and pivot column indices."""
    r = [row[:] for row in a]
    m = len(r)
    n = len(r[0]) if m else 0
    pivots: list[int] = []
    row = 0
    for col in range(n):
        sel = next((i for i in range(row, m) if r[i][col]), None)
        if sel is None:
            continue
        r[row], r[sel] = r[sel], r[row]
        p = r[row][col]
        r[row] = [x / p for x in r[row]]
        for i in range(m):
            if i != row and r[i][col]:
                f = r[i][col]
                r[i] = [x - f * y for x, y in zip(r[i], r[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    return r, pivots


def rank(a: Mat) -> int:
    return len(rref(a)[1])


def solve_exact(a: Sequence[Sequence], b: Sequence) -> Optional[Vec]:
    """One exact solution of A x = b (free variables zero), or None."""
    a = fr(a)
    b = [Fraction(x) for x in b]
    m = len(a)
    n = len(a[0]) if m else 0
    aug = [a[i] + [b[i]] for i in range(m)]
    r, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = r[i][n]
    return x


def solve_matrix(a: Mat, b: Mat) -> Optional[Mat]:
    """X with A X = B, or None; free variables zero, columnwise."""
    bt = transpose(b)
    cols = []
    for col in bt:
        x = solve_exact(a, col)
        if x is None:
            return None
        cols.append(x)
    if not cols:
        return [[] for _ in range(len(a[0]))] if a else []
    return transpose(cols)


def nullspace(a: Mat) -> list[Vec]:
    """Canonical basis of the right null space (RREF back-substitution)."""
    m = len(a)
    n = len(a[0]) if m else 0
    if m == 0:
        return [[Fraction(1) if i == j else Fraction(0) for i in range(n)] for j in range(n)]
    r, pivots = rref(a)
    free = [j for j in range(n) if j not in pivots]
    out = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i][f]
        out.append(v)
    return out


def inverse(a: Mat) -> Optional[Mat]:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("not square")
    aug = [a[i][:] + identity(n)[i] for i in range(n)]
    r, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in r]


def det(a: Mat) -> Fraction:
    n = len(a)
    r = [row[:] for row in a]
    out = Fraction(1)
    for col in range(n):
        sel = next((i for i in range(col, n) if r[i][col]), None)
        if sel is None:
            return Fraction(0)
        if sel != col:
            r[col], r[sel] = r[sel], r[col]
            out = -out
        p = r[col][col]
        out *= p
        for i in range(col + 1, n):
            if r[i][col]:
                f = r[i][col] / p
                r[i] = [x - f * y for x, y in zip(r[i], r[col])]
    return out


def char_poly(a: Mat):
    """Monic characteristic polynomial det(zI - A), Faddeev-LeVerrier."""
    from .poly import Poly

    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("not square")
    coeffs = [Fraction(1)]  # z^n downward
    m = [row[:] for row in a]
    for k in range(1, n + 1):
        if k > 1:
            for i in range(n):
                m[i][i] += coeffs[-1]
            m = matmul(a, m)
        c = -sum(m[i][i] for i in range(n)) / k
        coeffs.append(c)
    return Poly(list(reversed(coeffs)))


def coords_in_basis(basis: Sequence[Vec], v: Vec) -> Optional[Vec]:
    """Coordinates of v in the span of basis vectors, or None if outside."""
    if not basis:
        return [] if not any(v) else None
    return solve_exact(transpose(fr(basis)), v)
