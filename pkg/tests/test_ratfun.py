"""Stable-proper ring: membership, orders, normal forms, residue division."""

import random
from fractions import Fraction

import pytest

from perdec.errors import NotInRing, ZeroElement
from perdec.poly import Poly
from perdec.ratfun import RatFun, s_divide, s_gcd


def rand_ring_elem(rng, max_ord=4):
    """Random nonzero ring member whose numerator splits exactly."""
    stable_roots = [Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3), Fraction(-2, 3)]
    num_roots = stable_roots + [Fraction(2), Fraction(-3), Fraction(3, 2), Fraction(1), Fraction(-1)]
    den = Poly.one()
    for _ in range(rng.randrange(0, max_ord)):
        den = den * Poly((-rng.choice(stable_roots), 1))
    num = Poly(rng.choice([1, 2, -1, Fraction(1, 2)]))
    for _ in range(rng.randrange(0, den.deg + 1)):
        num = num * Poly((-rng.choice(num_roots), 1))
    return RatFun(num, den)


class TestBasics:
    def test_reduction(self):
        f = RatFun(Poly([-4, 0, 1]), Poly([-2, 1]))  # (z^2-4)/(z-2) = z+2
        assert f.num == Poly([2, 1]) and f.den == Poly.one()
        g = RatFun(Poly([0, 2]), Poly([0, 0, 4]))  # 2z/4z^2 = 1/(2z)
        assert g.num == Poly(Fraction(1, 2)) and g.den == Poly.z()

    def test_arithmetic(self):
        a = RatFun(Poly([1]), Poly([0, 1]))
        b = RatFun(Poly([-2, 1]), Poly([0, 1]))
        assert a + b == RatFun(Poly([-1, 1]), Poly([0, 1]))
        assert a * b == RatFun(Poly([-2, 1]), Poly([0, 0, 1]))
        assert b / a == RatFun(Poly([-2, 1]))
        assert a - a == RatFun.zero()
        assert (a**2) == RatFun.z_inv(2)
        assert a ** (-1) == RatFun(Poly.z())

    def test_eval(self):
        f = RatFun(Poly([-2, 1]), Poly([0, 1]))
        assert f(2) == 0
        assert f(1) == -1
        with pytest.raises(ZeroDivisionError):
            f(0)

    def test_str(self):
        assert RatFun(Poly([-2, 1]), Poly([0, 1])).to_str() == "(z - 2)/z"
        assert RatFun(Poly([1]), Poly([0, 0, 1])).to_str() == "1/z^2"


class TestRingMembership:
    def test_members(self):
        assert RatFun.z_inv().in_ring()
        assert RatFun(Poly([-2, 1]), Poly([0, 1])).in_ring()
        assert RatFun(1).in_ring()
        assert RatFun.zero().in_ring()
        assert RatFun(Poly([1, 1]), Poly([Fraction(-1, 2), 1])).in_ring()

    def test_nonmembers(self):
        assert not RatFun(Poly.z()).in_ring()  # improper
        assert not RatFun(Poly([1]), Poly([-2, 1])).in_ring()  # pole at 2
        assert not RatFun(Poly([1]), Poly([-1, 1])).in_ring()  # pole on circle

    def test_order(self):
        assert RatFun(Poly([-4, 0, 1]), Poly.z(2)).order() == 2
        assert RatFun(Poly([-2, 1]), Poly.z()).order() == 1
        assert RatFun.z_inv(3).order() == 3
        assert RatFun(5).order() == 0
        with pytest.raises(ZeroElement):
            RatFun.zero().order()
        # stable numerator zeros cancel the relative degree: a unit
        assert RatFun(Poly([Fraction(-1, 2), 1]), Poly.z()).order() == 0

    def test_order_errors(self):
        with pytest.raises(NotInRing):
            RatFun(Poly.z()).order()

    def test_units(self):
        assert RatFun(3).is_unit()
        assert RatFun(Poly([Fraction(-1, 2), 1]), Poly.z()).is_unit()
        assert not RatFun.z_inv().is_unit()
        assert not RatFun.zero().is_unit()

    def test_normal_form(self):
        u, nf = RatFun(Poly([-8, 0, 2]), Poly([0, 0, 1])).normal_form()
        assert nf == RatFun(Poly([-4, 0, 1]), Poly.z(2))
        assert u == RatFun(2)
        assert u.is_unit()
        u2, nf2 = RatFun(Poly([Fraction(-1, 2), 1]), Poly.z()).normal_form()
        assert nf2 == RatFun.one()
        assert u2 == RatFun(Poly([Fraction(-1, 2), 1]), Poly.z())
        u3, nf3 = RatFun(Poly([Fraction(-1, 2), 1]), Poly.z(2)).normal_form()
        assert nf3 == RatFun.z_inv()
        assert u3 * nf3 == RatFun(Poly([Fraction(-1, 2), 1]), Poly.z(2))

    def test_normal_form_random(self):
        rng = random.Random(11)
        for _ in range(40):
            f = rand_ring_elem(rng)
            u, nf = f.normal_form()
            assert u * nf == f
            assert u.is_unit()
            assert nf.den == Poly.z(nf.den.deg)
            assert nf.num.lead == 1 if nf else True

    def test_value_at_inf(self):
        assert RatFun(Poly([-4, 0, 1]), Poly.z(2)).value_at_inf() == 1
        assert RatFun.z_inv().value_at_inf() == 0
        assert RatFun(Poly([1, 2]), Poly([3, 4])).value_at_inf() == Fraction(1, 2)

    def test_series(self):
        f = RatFun(Poly([-2, 1]), Poly.z())
        assert f.series_zinv(3) == [1, -2, 0]
        g = RatFun(Poly([1]), Poly([Fraction(-1, 2), 1]))
        assert g.series_zinv(4) == [0, 1, Fraction(1, 2), Fraction(1, 4)]


class TestDivision:
    def test_worked_examples(self):
        q, r = s_divide(RatFun(Poly([-2, 1]), Poly.z()), RatFun.z_inv())
        assert (q, r) == (RatFun(-2), RatFun(1))
        q, r = s_divide(RatFun.z_inv(1), RatFun.z_inv(2))
        assert (q, r) == (RatFun.zero(), RatFun.z_inv(1))

    def test_unit_divisor(self):
        x = RatFun(Poly([-2, 1]), Poly.z())
        q, r = s_divide(x, RatFun(2))
        assert r == RatFun.zero() and q * 2 == x

    def test_zero_dividend(self):
        q, r = s_divide(RatFun.zero(), RatFun.z_inv())
        assert (q, r) == (RatFun.zero(), RatFun.zero())

    def test_division_invariants(self):
        rng = random.Random(23)
        for _ in range(120):
            x = rand_ring_elem(rng)
            y = rand_ring_elem(rng)
            q, r = s_divide(x, y)
            assert q * y + r == x
            assert q.in_ring() and r.in_ring()
            if r:
                assert r.order() < y.order()
                k = y.order()
                assert r.den.deg <= k - 1 and r.num.deg <= k - 1

    def test_unstable_divisor_numerator(self):
        x = RatFun(Poly([1, 1]), Poly.z(2))
        y = RatFun(Poly([-2, 1]), Poly.z())  # order 1, unstable zero at 2
        q, r = s_divide(x, y)
        assert q * y + r == x
        assert r.order() == 0 or not r

    def test_gcd_worked(self):
        g = s_gcd(RatFun(Poly([-4, 0, 1]), Poly.z(2)), RatFun(Poly([-2, 1]), Poly.z()))
        assert g == RatFun(Poly([-2, 1]), Poly.z())

    def test_gcd_random(self):
        rng = random.Random(5)
        for _ in range(40):
            x, y = rand_ring_elem(rng, 3), rand_ring_elem(rng, 3)
            g = s_gcd(x, y)
            assert g
            # g divides both exactly
            for f in (x, y):
                q, r = s_divide(f, g)
                assert r == RatFun.zero()
            u, nf = g.normal_form()
            assert u == RatFun(1) and nf == g

    def test_gcd_with_zero(self):
        x = RatFun(Poly([-8, 0, 2]), Poly.z(2))
        assert s_gcd(x, RatFun.zero()) == x.normal_form()[1]
        assert s_gcd(RatFun.zero(), RatFun.zero()) == RatFun.zero()


class TestPeriodicity:
    def test_compress_basic(self):
        f = RatFun(Poly([-4, 0, 1]), Poly.z(2))
        c = f.compress(2)
        assert c == RatFun(Poly([-4, 1]), Poly.z())
        assert c.expand(2) == f

    def test_compress_with_shift(self):
        f = RatFun.z_inv(1)  # z * f = 1
        assert f.compress(2, 1) == RatFun.one()
        g = RatFun(Poly([0, 0, 0, 1]), Poly([1, 0, 0, 0, 2]))  # z^3/(2z^4+1)
        c = g.compress(2, 1)
        assert c == RatFun(Poly([0, 0, 1]), Poly([1, 0, 2]))
        assert c.expand(2, 1) == g

    def test_compress_rejects(self):
        assert RatFun(Poly([1, 1]), Poly.z()).compress(2) is None
        assert RatFun.z_inv(1).compress(2) is None  # needs the shift

    def test_roundtrip_random(self):
        rng = random.Random(31)
        for _ in range(40):
            h = rand_ring_elem(rng, 3)
            T = rng.choice([2, 3])
            gamma = rng.randrange(T)
            f = h.expand(T, gamma)
            assert f.compress(T, gamma) == h
