# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of :mod:`eqtodd._kernels_py` (same algorithm, C loops)."""
from fractions import Fraction
from math import lcm

from . import _kernels_py


cdef tuple _unpack(long long key, long long base, int nvars):
    cdef list exp = []
    cdef int i
    for i in range(nvars):
        exp.append(key % base)
        key //= base
    return tuple(exp)


def mul_terms(dict a, dict b, int nvars, order):
    if not a or not b:
        return {}
    cdef long long base
    if order is None:
        base = max(map(sum, a)) + max(map(sum, b)) + 1
    else:
        base = order + 1
    if base ** nvars >= 2 ** 62:
        return _kernels_py.mul_terms(a, b, nvars, order)

    cdef Py_ssize_t na_len = len(a), nb_len = len(b)
    cdef Py_ssize_t i, j
    cdef long long k, e
    cdef int d, limit, ordv = -1 if order is None else order
    cdef object a_den = 1, b_den = 1, c

    for c in a.values():
        a_den = lcm(a_den, c.denominator)
    for c in b.values():
        b_den = lcm(b_den, c.denominator)

    cdef list a_rows = []
    cdef list b_rows = []
    cdef tuple exp
    for exp, c in a.items():
        k = 0
        for e in reversed(exp):
            k = k * base + e
        a_rows.append((sum(exp), k, c.numerator * (a_den // c.denominator)))
    for exp, c in b.items():
        k = 0
        for e in reversed(exp):
            k = k * base + e
        b_rows.append((sum(exp), k, c.numerator * (b_den // c.denominator)))
    a_rows.sort(key=lambda t: t[0])
    b_rows.sort(key=lambda t: t[0])

    cdef long long[:] a_keys = _ll([r[1] for r in a_rows])
    cdef long long[:] b_keys = _ll([r[1] for r in b_rows])
    cdef int[:] a_deg = _ii([r[0] for r in a_rows])
    cdef int[:] b_deg = _ii([r[0] for r in b_rows])
    cdef list a_num = [r[2] for r in a_rows]
    cdef list b_num = [r[2] for r in b_rows]

    cdef dict acc = {}
    cdef object na, key
    for i in range(na_len):
        d = a_deg[i]
        if ordv >= 0:
            limit = ordv - d
            if limit < 0:
                break
        else:
            limit = 2147483647
        na = a_num[i]
        for j in range(nb_len):
            if b_deg[j] > limit:
                break
            key = a_keys[i] + b_keys[j]
            acc[key] = acc.get(key, 0) + na * b_num[j]

    cdef object den = a_den * b_den
    return {_unpack(kk, base, nvars): Fraction(v, den) for kk, v in acc.items() if v}


def _ll(list xs):
    import array
    return array.array("q", xs)


def _ii(list xs):
    import array
    return array.array("i", xs)
