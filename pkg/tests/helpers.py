"""Shared generators and fixture access for the test suite."""

from fractions import Fraction
from pathlib import Path

from perdec.poly import Poly
from perdec.ratfun import RatFun
from perdec.ratmat import RatMat
from perdec.sysfile import load_system

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load_example(name: str):
    if not name.endswith(".json"):
        name += ".json"
    return load_system(FIXTURES / name)

STABLE_ROOTS = [Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3), Fraction(-2, 3)]
NUM_ROOTS = STABLE_ROOTS + [Fraction(2), Fraction(-3), Fraction(3, 2), Fraction(1), Fraction(-1)]


def rand_ring_elem(rng, max_ord=4, allow_zero=False):
    """Random ring member whose numerator splits over the rationals."""
    if allow_zero and rng.random() < 0.25:
        return RatFun.zero()
    den = Poly.one()
    for _ in range(rng.randrange(0, max_ord)):
        den = den * Poly((-rng.choice(STABLE_ROOTS), 1))
    num = Poly(rng.choice([1, 2, -1, Fraction(1, 2)]))
    for _ in range(rng.randrange(0, den.deg + 1)):
        num = num * Poly((-rng.choice(NUM_ROOTS), 1))
    return RatFun(num, den)


def rand_ratmat(rng, m, n, max_ord=3, density=1.0):
    out = RatMat.zeros(m, n)
    for i in range(m):
        for j in range(n):
            if rng.random() < density:
                out[i, j] = rand_ring_elem(rng, max_ord, allow_zero=True)
    return out
