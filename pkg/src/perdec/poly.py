"""Exact univariate polynomials over the rationals.

Thin class around the kernel's coefficient tuples plus the root-location
machinery the stable-ring layer needs: square-free splitting, rational root
extraction, and exact unit-circle classification (no floating point).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

from . import _kernel as K
from .errors import UnsupportedFactor

Scalar = Union[int, Fraction]


def _coerce(v) -> "Poly":
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, Fraction)):
        return Poly((Fraction(v),))
    return NotImplemented


class Poly:
    """Polynomial in one variable, exact Fraction coefficients, low power first."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Union[Scalar, Iterable[Scalar]] = ()):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (coeffs,)
        self.c = K.trim(Fraction(x) for x in coeffs)

    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def one() -> "Poly":
        return Poly((1,))

    @staticmethod
    def z(k: int = 1) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        return Poly((0,) * k + (1,))

    @property
    def deg(self) -> int:
        return len(self.c) - 1

    @property
    def lead(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    @property
    def const(self) -> Fraction:
        return self.c[0] if self.c else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        o = _coerce(other)
        return NotImplemented if o is NotImplemented else self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        o = _coerce(other)
        return NotImplemented if o is NotImplemented else Poly._raw(K.add(self.c, o.c))

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        return NotImplemented if o is NotImplemented else Poly._raw(K.sub(self.c, o.c))

    def __rsub__(self, other):
        o = _coerce(other)
        return NotImplemented if o is NotImplemented else Poly._raw(K.sub(o.c, self.c))

    def __neg__(self):
        return Poly._raw(K.neg(self.c))

    def __mul__(self, other):
        o = _coerce(other)
        return NotImplemented if o is NotImplemented else Poly._raw(K.mul(self.c, o.c))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out, base = Poly.one(), self
        while n:
            if n & 1:
                out = out * base
            base, n = base * base, n >> 1
        return out

    def __divmod__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        q, r = K.divmod_(self.c, o.c)
        return Poly._raw(q), Poly._raw(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        if isinstance(x, Poly):
            acc = Poly.zero()
            for c in reversed(self.c):
                acc = acc * x + c
            return acc
        return K.eval_at(self.c, Fraction(x))

    @staticmethod
    def _raw(coeffs: tuple) -> "Poly":
        p = Poly.__new__(Poly)
        p.c = coeffs
        return p

    def monic(self) -> "Poly":
        if not self.c:
            return self
        return Poly._raw(K.scale(self.c, 1 / self.lead))

    def derivative(self) -> "Poly":
        return Poly._raw(K.deriv(self.c))

    def shift(self, k: int) -> "Poly":
        """Multiply by z^k (k >= 0)."""
        if not self.c:
            return self
        return Poly._raw((Fraction(0),) * k + self.c)

    def reversed_(self, n: int | None = None) -> "Poly":
        """z^n * p(1/z); n defaults to deg p."""
        if not self.c:
            return self
        if n is None:
            n = self.deg
        if n < self.deg:
            raise ValueError("reversal length below degree")
        return Poly._raw(K.trim((Fraction(0),) * (n - self.deg) + tuple(reversed(self.c))))

    def divides(self, other: "Poly") -> bool:
        if not self:
            return not other
        return not (other % self)

    def gcd(self, other: "Poly") -> "Poly":
        return Poly._raw(K.gcd_monic(self.c, other.c))

    def lcm(self, other: "Poly") -> "Poly":
        if not self or not other:
            return Poly.zero()
        g = self.gcd(other)
        return ((self * other) // g).monic()

    def subst_power(self, t: int) -> "Poly":
        """p(z^t): spread coefficients t apart."""
        if t < 1:
            raise ValueError("power must be positive")
        out = [Fraction(0)] * (len(self.c) * t)
        for i, x in enumerate(self.c):
            out[i * t] = x
        return Poly._raw(K.trim(out))

    def low_power(self) -> int:
        """Multiplicity of the root at zero (0 for the zero polynomial)."""
        for i, x in enumerate(self.c):
            if x:
                return i
        return 0

    def to_str(self, var: str = "z") -> str:
        if not self.c:
            return "0"
        parts = []
        for i in range(self.deg, -1, -1):
            a = self.c[i]
            if not a:
                continue
            if i == 0:
                term = str(a)
            else:
                mag = "" if abs(a) == 1 else str(abs(a)) + "*"
                if a < 0:
                    mag = "-" + mag
                term = mag + (var if i == 1 else f"{var}^{i}")
            if parts and not term.startswith("-"):
                parts.append("+ " + term)
            elif parts:
                parts.append("- " + term[1:])
            else:
                parts.append(term)
        return " ".join(parts)

    def __repr__(self):
        return f"Poly({self.to_str()})"


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: p = lead * prod f_i^i with each f_i monic square-free."""
    if not p:
        raise ValueError("zero polynomial")
    p = p.monic()
    out: list[tuple[Poly, int]] = []
    g = p.gcd(p.derivative())
    w = p // g
    y = p.derivative() // g
    i = 1
    while w.deg > 0:
        zz = y - w.derivative()
        gi = w.gcd(zz)
        if gi.deg > 0:
            out.append((gi, i))
        w = w // gi
        y = zz // gi
        i += 1
    return out


def _divisors(n: int, cap: int = 1 << 20) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n and d <= cap:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def rational_roots(p: Poly) -> list[Fraction]:
    """All rational roots of p, with multiplicity, found by divisor trial."""
    if not p or p.deg == 0:
        return []
    den = 1
    for x in p.c:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in p.c]
    lo = next(i for i, v in enumerate(ints) if v)
    roots = [Fraction(0)] * lo
    ints = ints[lo:]
    if len(ints) == 1:
        return roots
    cands = set()
    for num in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            cands.add(Fraction(num, q))
            cands.add(Fraction(-num, q))
    rem = Poly(ints)
    for r in sorted(cands):
        while rem.deg > 0 and rem(r) == 0:
            roots.append(r)
            rem = rem // Poly((-r, 1))
    return roots


def all_roots_in_open_disk(p: Poly) -> bool:
    """True iff every root has modulus < 1.  Exact Schur-Cohn step-down."""
    if not p:
        raise ValueError("zero polynomial")
    f = p.monic()
    while f.deg > 0:
        k = f.const
        if abs(k) >= 1:
            return False
        if k == 0:
            f = Poly._raw(f.c[1:])
            continue
        g = f - k * f.reversed_()
        # constant term cancels by construction; step down one degree
        f = Poly._raw(K.scale(g.c[1:], 1 / (1 - k * k)))
    return True


def all_roots_in_closed_disk(p: Poly) -> bool:
    """True iff every root has modulus <= 1.

    Step-down while the reflection coefficient stays inside; on the boundary
    the polynomial must be self-inversive and the question drops to its
    derivative (Cohn's criterion).
    """
    if not p:
        raise ValueError("zero polynomial")
    f = p.monic()
    while f.deg > 0:
        k = f.const
        if abs(k) > 1:
            return False
        if abs(k) == 1:
            if f.reversed_() != k * f:
                return False
            f = f.derivative().monic()
            continue
        if k == 0:
            f = Poly._raw(f.c[1:])
            continue
        g = f - k * f.reversed_()
        f = Poly._raw(K.scale(g.c[1:], 1 / (1 - k * k)))
    return True


def all_roots_outside_or_on(p: Poly) -> bool:
    """True iff every root has modulus >= 1 (reciprocal of the closed test)."""
    if not p:
        raise ValueError("zero polynomial")
    if p.deg == 0:
        return True
    if p.const == 0:
        return False
    return all_roots_in_closed_disk(p.reversed_().monic())


class StabilitySplit:
    """p = unit * z^power * stable * unstable, the two parts monic.

    ``stable`` collects roots with 0 < |root| < 1, ``unstable`` the roots with
    |root| >= 1; the root at the origin is kept apart as the distinguished
    z^power factor.
    """

    __slots__ = ("unit", "power", "stable", "unstable")

    def __init__(self, unit: Fraction, power: int, stable: Poly, unstable: Poly):
        self.unit = unit
        self.power = power
        self.stable = stable
        self.unstable = unstable

    def recompose(self) -> Poly:
        return (self.unit * Poly.z(self.power)) * self.stable * self.unstable

    def __repr__(self):
        return (
            f"StabilitySplit(unit={self.unit}, power={self.power}, "
            f"stable={self.stable.to_str()}, unstable={self.unstable.to_str()})"
        )


def _classify_squarefree(f: Poly) -> tuple[Poly, Poly]:
    """Split a monic square-free f (f(0) != 0) into (stable, unstable) parts."""
    if all_roots_in_open_disk(f):
        return f, Poly.one()
    if all_roots_outside_or_on(f):
        return Poly.one(), f
    stable, unstable = Poly.one(), Poly.one()
    rem = f
    for r in rational_roots(f):
        lin = Poly((-r, 1))
        rem = rem // lin
        if abs(r) < 1:
            stable = stable * lin
        else:
            unstable = unstable * lin
    if rem.deg > 0:
        if all_roots_in_open_disk(rem):
            stable = stable * rem
        elif all_roots_outside_or_on(rem):
            unstable = unstable * rem
        else:
            raise UnsupportedFactor(
                f"cannot split factor with roots on both sides of the circle: {rem.to_str()}"
            )
    return stable, unstable


def split_stability(p: Poly) -> StabilitySplit:
    """Factor p by root location relative to the unit circle, exactly.

    Raises UnsupportedFactor when an irrational factor straddles the circle;
    everything else (powers of z, rational roots, one-sided factors) splits.
    """
    if not p:
        raise ValueError("zero polynomial")
    unit = p.lead
    power = p.low_power()
    q = Poly._raw(p.monic().c[power:])
    if q.deg == 0:
        return StabilitySplit(unit, power, Poly.one(), Poly.one())
    stable, unstable = Poly.one(), Poly.one()
    for f, mult in squarefree_decomposition(q):
        s, u = _classify_squarefree(f)
        stable = stable * s**mult
        unstable = unstable * u**mult
    return StabilitySplit(unit, power, stable, unstable)
