# cython: language_level=3, boundscheck=False
"""Compiled twin of polyops_py.  Same contract: Fraction tuples, low first."""

from fractions import Fraction
from math import gcd as _igcd

ZERO = Fraction(0)
ONE = Fraction(1)


def trim(c):
    cdef Py_ssize_t n
    c = tuple(c)
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n]


def add(a, b):
    cdef Py_ssize_t i
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i in range(len(b)):
        out[i] = out[i] + b[i]
    return trim(out)


def neg(a):
    return tuple(-x for x in a)


def sub(a, b):
    cdef Py_ssize_t i
    out = list(a) + [ZERO] * (len(b) - len(a))
    for i in range(len(b)):
        out[i] = out[i] - b[i]
    return trim(out)


def mul(a, b):
    cdef Py_ssize_t i, j, la, lb
    if not a or not b:
        return ()
    la, lb = len(a), len(b)
    out = [ZERO] * (la + lb - 1)
    for i in range(la):
        x = a[i]
        if x:
            for j in range(lb):
                out[i + j] = out[i + j] + x * b[j]
    return trim(out)


def scale(a, k):
    if not k:
        return ()
    return tuple(x * k for x in a)


def divmod_(a, b):
    cdef Py_ssize_t i, j, db
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    lb = b[db]
    q = [ZERO] * max(len(a) - db, 0)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if not c:
            continue
        c = c / lb
        q[i - db] = c
        for j in range(db):
            r[i - db + j] = r[i - db + j] - c * b[j]
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
    cdef Py_ssize_t i
    if not c:
        return ()
    den = 1
    for x in c:
        den = den * x.denominator // _igcd(den, x.denominator)
    ints = [int(x * den) for x in c]
    g = 0
    for v in ints:
        g = _igcd(g, v)
    if ints[len(ints) - 1] < 0:
        g = -g
    return tuple(v // g for v in ints)


def gcd_monic(a, b):
    cdef Py_ssize_t i, j, dB, n
    a, b = trim(a), trim(b)
    if not a and not b:
        return ()
    A, B = _int_primitive(a), _int_primitive(b)
    if len(A) < len(B):
        A, B = B, A
    while B:
        R = list(A)
        dB = len(B) - 1
        lB = B[dB]
        for i in range(len(R) - 1, dB - 1, -1):
            c = R[i]
            if c:
                for j in range(len(R)):
                    R[j] = R[j] * lB
                for j in range(dB + 1):
                    R[i - dB + j] = R[i - dB + j] - c * B[j]
        n = len(R)
        while n and R[n - 1] == 0:
            n -= 1
        A, B = B, _int_primitive(tuple(Fraction(v) for v in R[:n]))
    lead = Fraction(A[len(A) - 1])
    return tuple(Fraction(v) / lead for v in A)
