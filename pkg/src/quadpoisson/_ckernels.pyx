# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse term kernels; same contract as ``_pykernels``."""
from fractions import Fraction

cdef object _Fraction = Fraction
cdef int FIELD_BITS = 16
cdef object FIELD_MASK = 0xFFFF


cpdef add_into(dict acc, dict src, object scale):
    cdef object k, c
    if scale == 1:
        for k, c in src.items():
            acc[k] = acc.get(k, 0) + c
    else:
        for k, c in src.items():
            acc[k] = acc.get(k, 0) + scale * c


cpdef mul_into(dict acc, dict a, dict b, object scale):
    cdef dict tmp
    cdef list bkeys, bvals
    cdef Py_ssize_t n, idx
    cdef object ka, ca, cs, k
    if len(a) > len(b):
        tmp = a
        a = b
        b = tmp
    bkeys = list(b.keys())
    bvals = list(b.values())
    n = len(bkeys)
    for ka, ca in a.items():
        cs = ca * scale if scale != 1 else ca
        for idx in range(n):
            k = ka + bkeys[idx]
            acc[k] = acc.get(k, 0) + cs * bvals[idx]


cpdef dict finish(dict acc):
    cdef dict out = {}
    cdef object k, c
    for k, c in acc.items():
        if c:
            if type(c) is _Fraction and c.denominator == 1:
                c = c.numerator
            out[k] = c
    return out


cpdef dict diff(dict src, int shift):
    cdef object one = (<object>1) << shift
    cdef dict out = {}
    cdef object k, c, e
    for k, c in src.items():
        e = (k >> shift) & FIELD_MASK
        if e:
            c = c * e
            if type(c) is _Fraction and c.denominator == 1:
                c = c.numerator
            out[k - one] = c
    return out


cpdef bint overflowed(dict terms, object guard):
    cdef object k
    for k in terms:
        if k & guard:
            return True
    return False
