"""Matrices of rational functions and Hermite reduction over the stable ring.

The Hermite routine produces a lower-triangular column echelon form H = M*U
by exact column operations: Euclidean descent on ring orders picks each
pivot, pivots are scaled to their normal form e(z)/z^k, and entries left of
a pivot are reduced to canonical residues.  The operation log is kept so the
same transformation can be replayed on other matrices.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence, Union

from . import linalg
from .errors import NotInRing
from .poly import Poly
from .ratfun import RatFun, s_divide, s_gcd


def _as_entry(v) -> RatFun:
    if isinstance(v, RatFun):
        return v
    if isinstance(v, (int, Fraction, Poly)):
        return RatFun(v) if not isinstance(v, Poly) else RatFun(v, Poly.one())
    raise TypeError(f"cannot use {type(v).__name__} as a matrix entry")


class RatMat:
    """Dense matrix of rational functions."""

    __slots__ = ("a",)

    def __init__(self, rows: Sequence[Sequence]):
        self.a = [[_as_entry(v) for v in row] for row in rows]
        if self.a and any(len(r) != len(self.a[0]) for r in self.a):
            raise ValueError("ragged rows")

    @staticmethod
    def zeros(m: int, n: int) -> "RatMat":
        return RatMat([[RatFun.zero()] * n for _ in range(m)])

    @staticmethod
    def identity(n: int) -> "RatMat":
        out = RatMat.zeros(n, n)
        for i in range(n):
            out.a[i][i] = RatFun.one()
        return out

    @staticmethod
    def from_scalar(mat: Sequence[Sequence]) -> "RatMat":
        return RatMat([[RatFun(Fraction(x)) for x in row] for row in mat])

    @staticmethod
    def zI_minus(mat: Sequence[Sequence]) -> "RatMat":
        """zI - M for a square scalar matrix M."""
        n = len(mat)
        out = RatMat.zeros(n, n)
        for i in range(n):
            for j in range(n):
                p = Poly([-Fraction(mat[i][j])]) + (Poly.z() if i == j else Poly.zero())
                out.a[i][j] = RatFun(p, Poly.one())
        return out

    @property
    def rows(self) -> int:
        return len(self.a)

    @property
    def cols(self) -> int:
        return len(self.a[0]) if self.a else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, key) -> RatFun:
        i, j = key
        return self.a[i][j]

    def __setitem__(self, key, value):
        i, j = key
        self.a[i][j] = _as_entry(value)

    def __eq__(self, other):
        if not isinstance(other, RatMat):
            return NotImplemented
        return self.a == other.a

    def __add__(self, other: "RatMat") -> "RatMat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMat([[x + y for x, y in zip(ra, rb)] for ra, rb in zip(self.a, other.a)])

    def __sub__(self, other: "RatMat") -> "RatMat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMat([[x - y for x, y in zip(ra, rb)] for ra, rb in zip(self.a, other.a)])

    def __neg__(self) -> "RatMat":
        return RatMat([[-x for x in row] for row in self.a])

    def __mul__(self, other):
        if isinstance(other, RatMat):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            ot = list(zip(*other.a))
            return RatMat(
                [
                    [sum((x * y for x, y in zip(row, col)), RatFun.zero()) for col in ot]
                    for row in self.a
                ]
            )
        return RatMat([[x * _as_entry(other) for x in row] for row in self.a])

    def __rmul__(self, other):
        return RatMat([[_as_entry(other) * x for x in row] for row in self.a])

    def copy(self) -> "RatMat":
        out = RatMat.__new__(RatMat)
        out.a = [row[:] for row in self.a]
        return out

    def transpose(self) -> "RatMat":
        out = RatMat.__new__(RatMat)
        out.a = [list(col) for col in zip(*self.a)] if self.a else []
        return out

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "RatMat":
        cols = list(cols)
        out = RatMat.__new__(RatMat)
        out.a = [[self.a[i][j] for j in cols] for i in rows]
        return out

    def hstack(self, other: "RatMat") -> "RatMat":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        out = RatMat.__new__(RatMat)
        out.a = [ra + rb for ra, rb in zip(self.a, other.a)]
        return out

    def vstack(self, other: "RatMat") -> "RatMat":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        out = RatMat.__new__(RatMat)
        out.a = [row[:] for row in self.a] + [row[:] for row in other.a]
        return out

    def map(self, fn: Callable[[RatFun], RatFun]) -> "RatMat":
        return RatMat([[fn(x) for x in row] for row in self.a])

    def __repr__(self):
        body = "\n".join("  [" + ", ".join(x.to_str() for x in row) + "]" for row in self.a)
        return f"RatMat(\n{body}\n)"

    def to_str(self, var: str = "z") -> str:
        cells = [[x.to_str(var) for x in row] for row in self.a]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)

    # -- field operations -----------------------------------------------------

    def det(self) -> RatFun:
        if self.rows != self.cols:
            raise ValueError("not square")
        n = self.rows
        a = [row[:] for row in self.a]
        out = RatFun.one()
        for col in range(n):
            sel = next((i for i in range(col, n) if a[i][col]), None)
            if sel is None:
                return RatFun.zero()
            if sel != col:
                a[col], a[sel] = a[sel], a[col]
                out = -out
            p = a[col][col]
            out = out * p
            for i in range(col + 1, n):
                if a[i][col]:
                    f = a[i][col] / p
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        return out

    def inverse(self) -> Optional["RatMat"]:
        if self.rows != self.cols:
            raise ValueError("not square")
        n = self.rows
        a = [row[:] + RatMat.identity(n).a[i] for i, row in enumerate(self.a)]
        row = 0
        for col in range(n):
            sel = next((i for i in range(row, n) if a[i][col]), None)
            if sel is None:
                return None
            a[row], a[sel] = a[sel], a[row]
            p = a[row][col]
            a[row] = [x / p for x in a[row]]
            for i in range(n):
                if i != row and a[i][col]:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[row])]
            row += 1
        out = RatMat.__new__(RatMat)
        out.a = [r[n:] for r in a]
        return out

    def normal_rank(self) -> int:
        a = [row[:] for row in self.a]
        m, n = self.shape
        rank = 0
        for col in range(n):
            sel = next((i for i in range(rank, m) if a[i][col]), None)
            if sel is None:
                continue
            a[rank], a[sel] = a[sel], a[rank]
            p = a[rank][col]
            for i in range(rank + 1, m):
                if a[i][col]:
                    f = a[i][col] / p
                    a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
            rank += 1
            if rank == m:
                break
        return rank

    # -- ring-side predicates -------------------------------------------------

    def in_ring(self) -> bool:
        return all(x.in_ring() for row in self.a for x in row)

    def value_at_inf(self) -> list[list[Fraction]]:
        return [[x.value_at_inf() for x in row] for row in self.a]

    def is_unimodular(self) -> bool:
        """Invertible over the stable ring: square, entries inside, unit det."""
        if self.rows != self.cols or not self.in_ring():
            return False
        d = self.det()
        return bool(d) and d.is_unit()

    def is_column_unimodular(self) -> bool:
        """Full-size minors have unit gcd; completable to a unimodular matrix."""
        m, n = self.shape
        if m < n or not self.in_ring():
            return False
        minors = []
        for rows in combinations(range(m), n):
            d = self.submatrix(rows, range(n)).det()
            if d and d.is_unit():
                return True
            if d:
                minors.append(d)
        if not minors:
            return False
        g = minors[0]
        for d in minors[1:]:
            g = s_gcd(g, d)
            if g.is_unit():
                return True
        return g.is_unit()


# -- column operations and Hermite form --------------------------------------

ColOp = tuple


def apply_col_ops(m: RatMat, ops: Sequence[ColOp]) -> RatMat:
    """Replay a column-operation log: swap/scale/addmul (dst += coef*src)."""
    out = m.copy()
    for op in ops:
        kind = op[0]
        if kind == "swap":
            _, i, j = op
            for row in out.a:
                row[i], row[j] = row[j], row[i]
        elif kind == "scale":
            _, j, u = op
            for row in out.a:
                row[j] = row[j] * u
        elif kind == "addmul":
            _, dst, src, coef = op
            for row in out.a:
                row[dst] = row[dst] + coef * row[src]
        else:
            raise ValueError(f"unknown op {kind}")
    return out


class HermiteResult:
    __slots__ = ("h", "u", "ops", "pivots")

    def __init__(self, h: RatMat, u: RatMat, ops: list[ColOp], pivots: list[tuple[int, int]]):
        self.h = h
        self.u = u
        self.ops = ops
        self.pivots = pivots


def hermite_form(m: RatMat, strategy: str = "min_order") -> HermiteResult:
    """Column Hermite form over the stable-proper ring: H = M*U.

    H is lower-triangular column echelon: each pivot is a normal form
    e(z)/z^k, entries right of a pivot in its row are zero, entries left of
    it are canonical residues of the pivot.  ``strategy`` breaks ties among
    minimal-order Euclid pivots: "min_order" prefers the lowest column,
    "min_order_last" the highest.  The pivot must have minimal order or the
    descent could stall on entries that are already reduced.
    """
    if not m.in_ring():
        raise NotInRing("matrix has entries outside the stable-proper ring")
    if strategy not in ("min_order", "min_order_last"):
        raise ValueError(f"unknown strategy {strategy!r}")
    h = m.copy()
    ops: list[ColOp] = []
    pivots: list[tuple[int, int]] = []
    ncols = h.cols

    def emit(op: ColOp):
        ops.append(op)

    def addmul(dst: int, src: int, coef: RatFun):
        if not coef:
            return
        for row in h.a:
            row[dst] = row[dst] + coef * row[src]
        emit(("addmul", dst, src, coef))

    def swap(i: int, j: int):
        if i == j:
            return
        for row in h.a:
            row[i], row[j] = row[j], row[i]
        emit(("swap", i, j))

    def scale(j: int, u: RatFun):
        if u == RatFun.one():
            return
        for row in h.a:
            row[j] = row[j] * u
        emit(("scale", j, u))

    next_col = 0
    for r in range(h.rows):
        if next_col == ncols:
            break
        live = [j for j in range(next_col, ncols) if h.a[r][j]]
        if not live:
            continue
        while len(live) > 1:
            if strategy == "min_order":
                piv = min(live, key=lambda j: (h.a[r][j].order(), j))
            else:
                piv = min(live, key=lambda j: (h.a[r][j].order(), -j))
            for j in live:
                if j == piv:
                    continue
                q, _ = s_divide(h.a[r][j], h.a[r][piv])
                addmul(j, piv, -q)
            live = [j for j in live if h.a[r][j]]
        swap(next_col, live[0])
        unit, _ = h.a[r][next_col].normal_form()
        scale(next_col, RatFun.one() / unit)
        for c in range(next_col):
            if h.a[r][c]:
                q, _ = s_divide(h.a[r][c], h.a[r][next_col])
                addmul(c, next_col, -q)
        pivots.append((r, next_col))
        next_col += 1
    u = apply_col_ops(RatMat.identity(ncols), ops)
    return HermiteResult(h, u, ops, pivots)


def invariant_factor_orders(m: RatMat) -> list[int]:
    """Orders of the invariant factors over the stable ring, divisibility order.

    Computed from gcds of k-minors; exponential in size, intended for the
    small blocks this package manipulates.
    """
    if not m.in_ring():
        raise NotInRing("matrix has entries outside the stable-proper ring")
    nr, nc = m.shape
    out = []
    prev_ord = 0
    for k in range(1, min(nr, nc) + 1):
        g = RatFun.zero()
        for rsel in combinations(range(nr), k):
            for csel in combinations(range(nc), k):
                d = m.submatrix(rsel, csel).det()
                if d:
                    g = s_gcd(g, d) if g else d.normal_form()[1]
                    if g.is_unit():
                        break
            if g and g.is_unit():
                break
        if not g:
            break
        cur = g.order()
        out.append(cur - prev_ord)
        prev_ord = cur
    return out
