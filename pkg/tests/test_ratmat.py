"""Rational matrices: field ops, Hermite reduction, invariant factors."""

import random
from fractions import Fraction

import pytest

from perdec.errors import NotInRing, UnsupportedFactor
from perdec.poly import Poly
from perdec.ratfun import RatFun
from perdec.ratmat import (
    RatMat,
    apply_col_ops,
    hermite_form,
    invariant_factor_orders,
)

from helpers import rand_ratmat

zi = RatFun.z_inv


class TestMatrixOps:
    def test_arithmetic(self):
        a = RatMat([[1, zi(1)], [0, 1]])
        b = RatMat([[1, 0], [zi(1), 1]])
        assert (a * b)[0, 0] == RatFun(Poly([1, 0, 1]), Poly.z(2))
        assert (a + b)[0, 1] == zi(1)
        assert (a - a) == RatMat.zeros(2, 2)
        assert (a * 2)[0, 0] == RatFun(2)

    def test_det_inverse(self):
        m = RatMat([[zi(1), 1], [0, zi(2)]])
        assert m.det() == zi(3)
        inv = m.inverse()
        assert m * inv == RatMat.identity(2)
        assert RatMat([[1, 1], [1, 1]]).inverse() is None

    def test_normal_rank(self):
        # second row is 1/z times the first: rank 1
        assert RatMat([[zi(1), zi(2)], [zi(2), zi(3)]]).normal_rank() == 1
        assert RatMat([[zi(1), zi(2)], [zi(2), zi(3) * 2]]).normal_rank() == 2
        m = RatMat([[zi(1), zi(2)], [2 * zi(1), 2 * zi(2)]])
        assert m.normal_rank() == 1

    def test_zI_minus(self):
        m = RatMat.zI_minus([[0, 1], [-2, 3]])
        assert m.det() == RatFun(Poly([2, -3, 1]))

    def test_value_at_inf(self):
        m = RatMat([[RatFun(Poly([-4, 0, 1]), Poly.z(2)), zi(1)], [0, 3]])
        assert m.value_at_inf() == [[1, 0], [0, 3]]

    def test_stack_and_submatrix(self):
        a = RatMat([[1, 2], [3, 4]])
        b = RatMat([[5, 6]])
        v = a.vstack(b)
        assert v.shape == (3, 2) and v[2, 1] == RatFun(6)
        h = a.hstack(RatMat([[7], [8]]))
        assert h.shape == (2, 3) and h[1, 2] == RatFun(8)
        assert a.submatrix([1], [0, 1]).a == [[RatFun(3), RatFun(4)]]


class TestHermite:
    def check_form(self, m, res):
        h, u, pivots = res.h, res.u, res.pivots
        assert m * u == h
        assert u.is_unimodular()
        assert h.in_ring()
        for idx, (r, c) in enumerate(pivots):
            piv = h[r, c]
            _, nf = piv.normal_form()
            assert piv == nf, "pivot not in normal form"
            for j in range(c + 1, h.cols):
                assert not h[r, j], "nonzero right of pivot"
            k = piv.order()
            for j in range(c):
                left = h[r, j]
                if left:
                    assert left.den.deg <= max(k - 1, 0)
                    assert left.num.deg <= left.den.deg
                    assert left.order() < k
            if idx:
                assert pivots[idx - 1][0] < r

    def test_identity_fixed(self):
        res = hermite_form(RatMat.identity(3))
        assert res.h == RatMat.identity(3)
        assert res.ops == []

    def test_gcd_row(self):
        m = RatMat([[RatFun(Poly([-4, 0, 1]), Poly.z(2)), RatFun(Poly([-2, 1]), Poly.z())]])
        res = hermite_form(m)
        assert res.h[0, 0] == RatFun(Poly([-2, 1]), Poly.z())
        assert not res.h[0, 1]
        self.check_form(m, res)

    def test_triangularization(self):
        m = RatMat([[zi(1), zi(2)], [0, zi(1)]])
        res = hermite_form(m)
        assert res.h == RatMat([[zi(1), 0], [0, zi(1)]])
        self.check_form(m, res)

    def test_unit_normalization(self):
        m = RatMat([[RatFun(Poly([-8, 0, 2]), Poly.z(2))]])
        res = hermite_form(m)
        assert res.h[0, 0] == RatFun(Poly([-4, 0, 1]), Poly.z(2))

    def test_residue_reduction(self):
        m = RatMat([[1, 0], [RatFun(Poly([1, 1]), Poly.z()), zi(2)]])
        res = hermite_form(m)
        self.check_form(m, res)
        # left entry in the second pivot row must be a residue mod 1/z^2
        left = res.h[1, 0]
        assert left.den.deg <= 1 and left.order() < 2

    def test_strategies_agree(self):
        rng = random.Random(41)
        done = 0
        while done < 20:
            m = rand_ratmat(rng, rng.randrange(1, 4), rng.randrange(1, 4), max_ord=2)
            try:
                h1 = hermite_form(m, "min_order").h
                h2 = hermite_form(m, "min_order_last").h
            except UnsupportedFactor:
                continue  # an intermediate straddled the circle irrationally
            assert h1 == h2
            done += 1

    def test_unimodular_invariance(self):
        # the form depends only on the column module: permuting or mixing
        # columns by a unimodular factor cannot change it
        rng = random.Random(53)
        done = 0
        while done < 15:
            m = rand_ratmat(rng, rng.randrange(1, 4), 3, max_ord=2)
            order = [0, 1, 2]
            rng.shuffle(order)
            p = RatMat.identity(3).submatrix(range(3), order)
            low = RatMat.identity(3)
            low[1, 0] = zi(rng.randrange(1, 3))
            v = p * low
            assert v.is_unimodular()
            try:
                h1 = hermite_form(m).h
                h2 = hermite_form(m * v).h
            except UnsupportedFactor:
                continue
            assert h1 == h2
            done += 1

    def test_random_forms(self):
        rng = random.Random(43)
        done = 0
        while done < 25:
            m = rand_ratmat(rng, rng.randrange(1, 4), rng.randrange(1, 4), max_ord=3)
            try:
                res = hermite_form(m)
            except UnsupportedFactor:
                continue
            self.check_form(m, res)
            done += 1

    def test_zero_matrix(self):
        m = RatMat.zeros(2, 3)
        res = hermite_form(m)
        assert res.h == m and res.u == RatMat.identity(3) and res.pivots == []

    def test_rejects_outside_ring(self):
        with pytest.raises(NotInRing):
            hermite_form(RatMat([[RatFun(Poly.z())]]))
        with pytest.raises(ValueError):
            hermite_form(RatMat.identity(2), strategy="bogus")

    def test_apply_col_ops_replay(self):
        rng = random.Random(47)
        m = rand_ratmat(rng, 3, 3, max_ord=2)
        res = hermite_form(m)
        assert apply_col_ops(RatMat.identity(3), res.ops) == res.u
        assert apply_col_ops(m, res.ops) == res.h


class TestInvariantOrders:
    def test_diagonal(self):
        d = RatMat([[RatFun(Poly([-2, 1]), Poly.z()), 0], [0, RatFun(Poly([-4, 0, 1]), Poly.z(2))]])
        assert invariant_factor_orders(d) == [1, 2]

    def test_unimodular_mix(self):
        d = RatMat([[zi(2), 0], [0, 1]])
        u = RatMat([[1, 0], [RatFun(Poly([1, 1]), Poly.z()), 1]])
        assert invariant_factor_orders(u * d) == [0, 2]
        assert invariant_factor_orders(d * u) == [0, 2]

    def test_rank_deficient(self):
        m = RatMat([[zi(1), zi(1)], [zi(1), zi(1)]])
        assert invariant_factor_orders(m) == [1]

    def test_column_unimodular(self):
        tall = RatMat([[1, 0], [0, 1], [zi(1), zi(2)]])
        assert tall.is_column_unimodular()
        bad = RatMat([[zi(1)], [zi(2)]])
        assert not bad.is_column_unimodular()
        assert not RatMat([[1, 0]]).is_column_unimodular()  # wide
