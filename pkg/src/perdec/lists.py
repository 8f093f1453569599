"""Calculus of finite lists of nonnegative integers.

Lists enter the nonsquare synthesis as orders and indices grouped per
phase.  All operations are elementwise or work on sorted copies; inputs
are never mutated.  Lists are plain tuples of ints.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from .errors import LengthMismatch

IntList = tuple[int, ...]


def as_list(values: Sequence[int]) -> IntList:
    out = tuple(int(v) for v in values)
    if any(v < 0 for v in out):
        raise ValueError("list elements must be nonnegative")
    return out


def list_sum(lam: Sequence[int]) -> int:
    return sum(lam)


def index_set(lam: Sequence[int]) -> frozenset[int]:
    """Positions of the nonzero elements."""
    return frozenset(i for i, v in enumerate(lam) if v)


def is_sublist(mu: Sequence[int], lam: Sequence[int]) -> bool:
    """Elementwise mu <= lam for lists of equal length."""
    if len(mu) != len(lam):
        raise LengthMismatch(f"lengths {len(mu)} and {len(lam)} differ")
    return all(a <= b for a, b in zip(mu, lam))


def add_lists(lam: Sequence[int], mu: Sequence[int]) -> IntList:
    if len(lam) != len(mu):
        raise LengthMismatch(f"lengths {len(lam)} and {len(mu)} differ")
    return tuple(a + b for a, b in zip(lam, mu))


def sub_lists(lam: Sequence[int], mu: Sequence[int]) -> IntList:
    if not is_sublist(mu, lam):
        raise ValueError("difference defined only when mu <= lam")
    return tuple(a - b for a, b in zip(lam, mu))


def dominates(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """Prefix-sum comparison after zero padding and nondecreasing sort."""
    n = max(len(lam), len(mu))
    a = sorted(tuple(lam) + (0,) * (n - len(lam)))
    b = sorted(tuple(mu) + (0,) * (n - len(mu)))
    run_a = run_b = 0
    for x, y in zip(a, b):
        run_a += x
        run_b += y
        if run_a < run_b:
            return False
    return True


def list_calculus(lam: Sequence[int], mu: Sequence[int] | None, kind: str):
    """Single entry point covering the four textbook list operations."""
    if kind == "sum":
        return list_sum(lam)
    if kind == "index_set":
        return index_set(lam)
    if kind == "sublist_le":
        return is_sublist(lam, mu)
    if kind == "dominates":
        return dominates(lam, mu)
    raise ValueError(f"unknown kind {kind!r}")


def roundup_multiples(lam: Sequence[int], period: int) -> IntList:
    """Raise each element to the nearest multiple of the period above it."""
    if period <= 0:
        raise ValueError("period must be positive")
    return tuple(-(-v // period) * period for v in lam)


def place_at(values: Sequence[int], positions: Sequence[int], length: int) -> IntList:
    """Spread values over the given positions of a zero list."""
    if len(values) != len(positions):
        raise LengthMismatch("one value per position")
    out = [0] * length
    for v, pos in zip(values, positions):
        out[pos] = v
    return tuple(out)


def bounded_lists(bound: Sequence[int], total: int | None = None) -> Iterator[IntList]:
    """All lists elementwise below the bound, lexicographic.

    With a total, only lists of that exact sum are produced; infeasible
    branches are pruned on the remaining-capacity test.
    """
    bound = as_list(bound)

    def rec(i: int, left: int | None, acc: list[int]) -> Iterator[IntList]:
        if i == len(bound):
            if left is None or left == 0:
                yield tuple(acc)
            return
        cap = sum(bound[i:])
        for v in range(bound[i] + 1):
            if left is not None and (v > left or left - v > cap - bound[i]):
                continue
            acc.append(v)
            yield from rec(i + 1, None if left is None else left - v, acc)
            acc.pop()

    yield from rec(0, total, [])


def joint_bounded_lists(
    bounds: Sequence[Sequence[int]], total: int
) -> Iterator[tuple[IntList, ...]]:
    """Tuples of per-group lists with a shared total sum, lexicographic."""
    groups = [as_list(b) for b in bounds]

    def rec(i: int, left: int, acc: list[IntList]) -> Iterator[tuple[IntList, ...]]:
        if i == len(groups):
            if left == 0:
                yield tuple(acc)
            return
        cap = sum(sum(g) for g in groups[i + 1 :])
        for part in bounded_lists(groups[i]):
            s = sum(part)
            if s > left or left - s > cap:
                continue
            acc.append(part)
            yield from rec(i + 1, left - s, acc)
            acc.pop()

    yield from rec(0, total, [])
