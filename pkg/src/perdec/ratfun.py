"""Rational functions and the ring of proper stable ones.

A rational function is stored reduced, denominator monic.  The subring S of
interest is the proper functions whose poles all lie strictly inside the unit
circle.  Division with remainder inside S works on orders, not degrees: the
order of f = b/a is (deg a - deg b) + (number of zeros of b outside or on the
circle), units are the order-0 elements, and each f factors as unit times a
normal form e(z)/z^k with e monic and zero-free inside the circle.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Union

from .errors import ImproperEntry, NotInRing, ZeroDivisor, ZeroElement
from .poly import Poly, split_stability

Coeffable = Union[int, Fraction, Poly, "RatFun"]


def _as_ratfun(v) -> "RatFun":
    if isinstance(v, RatFun):
        return v
    if isinstance(v, Poly):
        return RatFun(v, Poly.one())
    if isinstance(v, (int, Fraction)):
        return RatFun(Poly(v), Poly.one())
    return NotImplemented


class RatFun:
    """Reduced rational function num/den with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Union[Poly, int, Fraction], den: Union[Poly, int, Fraction] = 1):
        if not isinstance(num, Poly):
            num = Poly(num)
        if not isinstance(den, Poly):
            den = Poly(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = Poly.zero(), Poly.one()
            return
        g = num.gcd(den)
        if g.deg > 0:
            num, den = num // g, den // g
        lead = den.lead
        if lead != 1:
            num = (1 / lead) * num
            den = den.monic()
        self.num, self.den = num, den

    @staticmethod
    def zero() -> "RatFun":
        return RatFun(0)

    @staticmethod
    def one() -> "RatFun":
        return RatFun(1)

    @staticmethod
    def z_inv(k: int = 1) -> "RatFun":
        """1/z^k."""
        return RatFun(Poly.one(), Poly.z(k))

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = _as_ratfun(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        o = _as_ratfun(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_ratfun(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFun(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = _as_ratfun(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        r = RatFun.__new__(RatFun)
        r.num, r.den = -self.num, self.den
        return r

    def __mul__(self, other):
        o = _as_ratfun(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_ratfun(other)
        if o is NotImplemented:
            return NotImplemented
        if not o:
            raise ZeroDivisor("division by zero rational function")
        return RatFun(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = _as_ratfun(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFun.one() / self ** (-n)
        out = RatFun.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base, n = base * base, n >> 1
        return out

    def __call__(self, x: Union[int, Fraction]) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(x) / d

    def __repr__(self):
        return f"RatFun({self.to_str()})"

    def to_str(self, var: str = "z") -> str:
        n = self.num.to_str(var)
        if self.den == Poly.one():
            return n
        d = self.den.to_str(var)
        if self.num.deg > 0 or len(n.split()) > 1:
            n = f"({n})"
        if self.den.deg > 0 and len(d.split()) > 1:
            d = f"({d})"
        return f"{n}/{d}"

    # -- the stable-proper subring -------------------------------------------

    def is_proper(self) -> bool:
        return not self or self.num.deg <= self.den.deg

    def in_ring(self) -> bool:
        """Member of S: proper with all poles strictly inside the circle."""
        from .poly import all_roots_in_open_disk

        if not self:
            return True
        return self.num.deg <= self.den.deg and all_roots_in_open_disk(self.den)

    def order(self) -> int:
        """Ring order: relative degree plus zeros outside or on the circle.

        Undefined for the zero element; raises NotInRing outside S.
        """
        if not self:
            raise ZeroElement("the zero element has no order")
        if not self.in_ring():
            raise NotInRing(f"not proper-stable: {self.to_str()}")
        s = split_stability(self.num)
        return (self.den.deg - self.num.deg) + s.unstable.deg

    def is_unit(self) -> bool:
        return bool(self) and self.in_ring() and self.order() == 0

    def normal_form(self) -> tuple["RatFun", "RatFun"]:
        """Factor self = unit * nf with nf = e/z^k, e monic zero-free inside."""
        if not self:
            raise ZeroElement("the zero element has no normal form")
        k = self.order()
        s = split_stability(self.num)
        nf = RatFun(s.unstable, Poly.z(k))
        unit = self / nf
        return unit, nf

    def value_at_inf(self) -> Fraction:
        """Limit as z grows without bound; finite only for proper functions."""
        if not self:
            return Fraction(0)
        if self.num.deg > self.den.deg:
            raise ImproperEntry(f"improper: {self.to_str()}")
        if self.num.deg < self.den.deg:
            return Fraction(0)
        return self.num.lead / self.den.lead

    def series_zinv(self, terms: int) -> list[Fraction]:
        """Coefficients c_0..c_{terms-1} of the expansion sum c_i z^-i."""
        if self.num.deg > self.den.deg:
            raise ImproperEntry(f"improper: {self.to_str()}")
        shift = self.den.deg - self.num.deg
        b = list(reversed(self.num.c))  # numerator in w = 1/z, times w^shift
        a = list(reversed(self.den.c))
        out: list[Fraction] = [Fraction(0)] * terms
        inv0 = 1 / a[0]
        for i in range(terms):
            j = i - shift
            acc = b[j] if 0 <= j < len(b) else Fraction(0)
            for t in range(1, min(i, len(a) - 1) + 1):
                acc -= a[t] * out[i - t]
            out[i] = acc * inv0
        return out

    # -- periodicity helpers --------------------------------------------------

    def compress(self, period: int, shift: int = 0) -> Optional["RatFun"]:
        """Rewrite self * z^shift as a rational function of w = z^period.

        Returns None when the product is not expressible that way.
        """
        if not self:
            return RatFun.zero()
        num, den = self.num.shift(shift), self.den
        g = num.gcd(den)
        if g.deg > 0:
            num, den = num // g, den // g
        for p in (num, den):
            if any(p.c[i] and i % period for i in range(len(p.c))):
                return None
        take = lambda p: Poly(p.c[:: period])
        return RatFun(take(num), take(den))

    def expand(self, period: int, shift: int = 0) -> "RatFun":
        """Inverse of compress: self(z^period) * z^-shift."""
        if not self:
            return self
        return RatFun(self.num.subst_power(period), self.den.subst_power(period).shift(shift))


def s_divide(x: RatFun, y: RatFun) -> tuple[RatFun, RatFun]:
    """Division with remainder in the stable-proper ring: x = q*y + r.

    The remainder is the canonical residue g(z)/z^(k-1) with deg g < k,
    k the order of y; it is found by solving a square linear system whose
    rows demand the unstable numerator factor of y divides out and that the
    quotient stays proper.
    """
    from .linalg import solve_exact

    if not y:
        raise ZeroDivisor("division by zero")
    for f in (x, y):
        if not f.in_ring():
            raise NotInRing(f"not proper-stable: {f.to_str()}")
    k = y.order()
    if not x or k == 0:
        return (x / y, RatFun.zero())
    sy = split_stability(y.num)
    e_y = sy.unstable
    bx, ax, ay = x.num, x.den, y.den
    d_req = ax.deg + y.num.deg + k - 1
    d_top = ax.deg + ay.deg + k - 1

    def conditions(gpoly: Poly) -> list[Fraction]:
        numf = (bx.shift(k - 1) - gpoly * ax) * ay
        rows = list((numf % e_y).c) if e_y.deg > 0 else []
        rows += [Fraction(0)] * (e_y.deg - len(rows))
        cof = numf.c
        for d in range(d_req + 1, d_top + 1):
            rows.append(cof[d] if d < len(cof) else Fraction(0))
        return rows

    base = conditions(Poly.zero())
    cols = []
    for i in range(k):
        col = conditions(Poly.z(i) if i else Poly.one())
        cols.append([c - b for c, b in zip(col, base)])
    mat = [[cols[j][i] for j in range(k)] for i in range(len(base))]
    rhs = [-b for b in base]
    g = solve_exact(mat, rhs)
    if g is None:
        raise NotInRing(f"residue division failed for divisor {y.to_str()}")
    r = RatFun(Poly(g), Poly.z(k - 1))
    q = (x - r) / y
    if not q.in_ring():
        raise NotInRing("quotient left the ring; divisor not as classified")
    return q, r


def s_gcd(x: RatFun, y: RatFun) -> RatFun:
    """Greatest common divisor in the stable-proper ring, in normal form."""
    a, b = x, y
    for f in (a, b):
        if f and not f.in_ring():
            raise NotInRing(f"not proper-stable: {f.to_str()}")
    while b:
        _, r = s_divide(a, b)
        a, b = b, r
    return a.normal_form()[1] if a else RatFun.zero()
