"""Exact Fraction linear algebra."""

import random
from fractions import Fraction

from perdec import linalg as la
from perdec.poly import Poly


def rand_mat(rng, m, n, lo=-5, hi=5):
    return [[Fraction(rng.randrange(lo, hi + 1)) for _ in range(n)] for _ in range(m)]


def test_rref_canonical():
    r, piv = la.rref(la.fr([[2, 4], [1, 2]]))
    assert r == la.fr([[1, 2], [0, 0]])
    assert piv == [0]


def test_solve_and_residual():
    rng = random.Random(3)
    for _ in range(60):
        m, n = rng.randrange(1, 5), rng.randrange(1, 5)
        a = rand_mat(rng, m, n)
        x0 = [Fraction(rng.randrange(-3, 4)) for _ in range(n)]
        b = la.matvec(a, x0)
        x = la.solve_exact(a, b)
        assert x is not None
        assert la.matvec(a, x) == b


def test_solve_inconsistent():
    assert la.solve_exact([[1, 1], [1, 1]], [1, 2]) is None


def test_nullspace():
    rng = random.Random(9)
    for _ in range(40):
        m, n = rng.randrange(1, 5), rng.randrange(1, 5)
        a = rand_mat(rng, m, n)
        basis = la.nullspace(a)
        assert len(basis) == n - la.rank(a)
        for v in basis:
            assert la.matvec(a, v) == [Fraction(0)] * m


def test_inverse():
    a = la.fr([[1, 2], [3, 5]])
    inv = la.inverse(a)
    assert la.matmul(a, inv) == la.identity(2)
    assert la.inverse(la.fr([[1, 2], [2, 4]])) is None


def test_det():
    assert la.det(la.fr([[1, 2], [3, 5]])) == -1
    assert la.det(la.fr([[1, 2], [2, 4]])) == 0
    rng = random.Random(17)
    for _ in range(30):
        n = rng.randrange(1, 5)
        a = rand_mat(rng, n, n)
        d = la.det(a)
        assert (d != 0) == (la.inverse(a) is not None)


def test_char_poly():
    a = la.fr([[0, 1], [-2, 3]])  # z^2 - 3z + 2
    assert la.char_poly(a) == Poly([2, -3, 1])
    assert la.char_poly(la.identity(3)) == Poly([-1, 3, -3, 1])
    # companion matrix check
    rng = random.Random(21)
    for _ in range(20):
        coeffs = [Fraction(rng.randrange(-4, 5)) for _ in range(4)]
        comp = la.zeros(4, 4)
        for i in range(3):
            comp[i + 1][i] = Fraction(1)
        for i in range(4):
            comp[i][3] = -coeffs[i]
        assert la.char_poly(comp) == Poly(coeffs + [Fraction(1)])


def test_coords_in_basis():
    basis = [la.fr([[1, 0, 1]])[0], la.fr([[0, 1, 1]])[0]]
    assert la.coords_in_basis(basis, la.fr([[2, 3, 5]])[0]) == [2, 3]
    assert la.coords_in_basis(basis, la.fr([[1, 0, 0]])[0]) is None
    assert la.coords_in_basis([], [Fraction(0)] * 3) == []
    assert la.coords_in_basis([], la.fr([[1, 0, 0]])[0]) is None
