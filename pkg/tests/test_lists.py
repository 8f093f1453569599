"""Integer-list calculus tests."""

from __future__ import annotations

import random
from itertools import product

import pytest

from perdec.errors import LengthMismatch
from perdec.lists import (
    add_lists,
    bounded_lists,
    dominates,
    index_set,
    is_sublist,
    joint_bounded_lists,
    list_calculus,
    list_sum,
    place_at,
    roundup_multiples,
    sub_lists,
)


class TestBasics:
    def test_sum_and_index_set(self):
        assert list_sum((2, 0, 3)) == 5
        assert index_set((2, 0, 3)) == {0, 2}
        assert index_set((0, 0)) == frozenset()

    def test_sublist(self):
        assert is_sublist((1, 0, 2), (1, 1, 2))
        assert not is_sublist((2, 0), (1, 3))
        with pytest.raises(LengthMismatch):
            is_sublist((1,), (1, 2))

    def test_add_sub(self):
        assert add_lists((1, 2), (3, 0)) == (4, 2)
        assert sub_lists((3, 2), (1, 2)) == (2, 0)
        with pytest.raises(ValueError):
            sub_lists((1, 2), (2, 2))

    def test_calculus_dispatch(self):
        assert list_calculus((1, 2), None, "sum") == 3
        assert list_calculus((1, 0), None, "index_set") == {0}
        assert list_calculus((1, 0), (1, 1), "sublist_le") is True
        assert list_calculus((2,), (2, 0), "dominates") is True
        with pytest.raises(ValueError):
            list_calculus((1,), None, "frobnicate")


class TestDominance:
    def test_known_cases(self):
        # unequal lengths are padded with zeros before sorting
        assert dominates((2,), (2, 0))
        assert not dominates((2, 0), (1, 1))
        assert dominates((1, 1), (2, 0))

    def test_reflexive(self):
        rng = random.Random(0)
        for _ in range(50):
            lam = tuple(rng.randrange(4) for _ in range(rng.randrange(1, 5)))
            assert dominates(lam, lam)

    def test_transitive_on_samples(self):
        rng = random.Random(1)
        pool = [tuple(rng.randrange(4) for _ in range(3)) for _ in range(12)]
        for a, b, c in product(pool, repeat=3):
            if dominates(a, b) and dominates(b, c):
                assert dominates(a, c)

    def test_padding_is_neutral(self):
        rng = random.Random(2)
        for _ in range(50):
            lam = tuple(rng.randrange(4) for _ in range(3))
            mu = tuple(rng.randrange(4) for _ in range(3))
            assert dominates(lam, mu) == dominates(lam + (0, 0), mu)
            assert dominates(lam, mu) == dominates(lam, mu + (0,))

    def test_padding_penalizes_concentration(self):
        # padding inserts zeros, so a short list cannot dominate a spread one
        assert not dominates((4,), (2, 2))
        assert dominates((2, 2), (4,))
        # at equal sums the evener list dominates
        assert dominates((2, 2), (3, 1))
        assert not dominates((3, 1), (2, 2))


class TestRounding:
    def test_roundup(self):
        assert roundup_multiples((0, 1, 2, 3), 2) == (0, 2, 2, 4)
        assert roundup_multiples((5,), 3) == (6,)
        assert roundup_multiples((4, 2), 1) == (4, 2)

    def test_roundup_fixed_on_multiples(self):
        rng = random.Random(3)
        for _ in range(30):
            t = rng.randrange(1, 5)
            lam = tuple(t * rng.randrange(4) for _ in range(4))
            assert roundup_multiples(lam, t) == lam

    def test_place_at(self):
        assert place_at((2,), (0,), 2) == (2, 0)
        assert place_at((1, 3), (2, 0), 3) == (3, 0, 1)
        with pytest.raises(LengthMismatch):
            place_at((1, 2), (0,), 3)


class TestEnumeration:
    def test_bounded_lists_complete(self):
        got = list(bounded_lists((1, 2)))
        assert got == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]

    def test_bounded_lists_with_total(self):
        got = list(bounded_lists((2, 2), total=2))
        assert got == [(0, 2), (1, 1), (2, 0)]
        assert list(bounded_lists((1, 1), total=3)) == []

    def test_joint_enumeration_matches_filter(self):
        bounds = [(1, 2), (2,)]
        brute = [
            (a, b)
            for a in bounded_lists(bounds[0])
            for b in bounded_lists(bounds[1])
            if sum(a) + sum(b) == 3
        ]
        assert list(joint_bounded_lists(bounds, 3)) == brute

    def test_joint_enumeration_lexicographic(self):
        seen = list(joint_bounded_lists([(2,), (2,)], 2))
        assert seen == [((0,), (2,)), ((1,), (1,)), ((2,), (0,))]
