"""Dense polynomial arithmetic over Fraction, pure Python backend.

Coefficient convention used across the package: a polynomial is a tuple of
Fraction coefficients, lowest power first, with no trailing zeros.  The zero
polynomial is the empty tuple.  Everything here is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd

ZERO = Fraction(0)
ONE = Fraction(1)


def trim(c):
    """Drop trailing zero coefficients; canonical form for all kernel output."""
    c = tuple(c)
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n]


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return trim(out)


def neg(a):
    return tuple(-x for x in a)


def sub(a, b):
    out = list(a) + [ZERO] * (len(b) - len(a))
    for i, x in enumerate(b):
        out[i] -= x
    return trim(out)


def mul(a, b):
    if not a or not b:
        return ()
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def scale(a, k):
    if not k:
        return ()
    return tuple(x * k for x in a)


def divmod_(a, b):
    """Exact Euclidean division, returns (quotient, remainder)."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    q = [ZERO] * max(len(a) - db, 0)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if not c:
            continue
        c /= lb
        q[i - db] = c
        for j in range(db):
            r[i - db + j] -= c * b[j]
        r[i] = ZERO
    return trim(q), trim(r[:db])


def eval_at(a, x):
    acc = ZERO
    for c in reversed(a):
        acc = acc * x + c
    return acc


def deriv(a):
    return trim(tuple(a[i] * i for i in range(1, len(a))))


def _int_primitive(c):
    """Clear denominators and divide out integer content; sign follows lead."""
    if not c:
        return ()
    den = 1
    for x in c:
        den = den * x.denominator // _igcd(den, x.denominator)
    ints = [int(x * den) for x in c]
    g = 0
    for v in ints:
        g = _igcd(g, v)
    if ints[-1] < 0:
        g = -g
    return tuple(v // g for v in ints)


def gcd_monic(a, b):
    """Monic gcd via the primitive PRS, integer arithmetic throughout."""
    a, b = trim(a), trim(b)
    if not a and not b:
        return ()
    A, B = _int_primitive(a), _int_primitive(b)
    if len(A) < len(B):
        A, B = B, A
    while B:
        # pseudo-remainder keeps coefficients integral
        R = list(A)
        dB, lB = len(B) - 1, B[-1]
        for i in range(len(R) - 1, dB - 1, -1):
            c = R[i]
            if c:
                for j in range(len(R)):
                    R[j] *= lB
                for j in range(dB + 1):
                    R[i - dB + j] -= c * B[j]
        n = len(R)
        while n and R[n - 1] == 0:
            n -= 1
        A, B = B, _int_primitive(tuple(Fraction(v) for v in R[:n]))
    lead = Fraction(A[-1])
    return tuple(Fraction(v) / lead for v in A)
