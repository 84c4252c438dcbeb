"""Pure-Python sparse term kernels.

Term maps are plain dicts ``{packed_monomial: coeff}``.  A packed monomial is a
Python int holding one 16-bit exponent field per interned variable, so the
product of two monomials is integer addition.  Coefficients are ``int`` or
``Fraction``.  The compiled twin in ``_ckernels.pyx`` exposes the same names.
"""
from fractions import Fraction

FIELD_BITS = 16
FIELD_MASK = 0xFFFF


def add_into(acc, src, scale):
    """acc += scale * src (zeros are left for :func:`finish`)."""
    get = acc.get
    if scale == 1:
        for k, c in src.items():
            acc[k] = get(k, 0) + c
    else:
        for k, c in src.items():
            acc[k] = get(k, 0) + scale * c


def mul_into(acc, a, b, scale):
    """acc += scale * a * b."""
    get = acc.get
    if len(a) > len(b):
        a, b = b, a
    bitems = list(b.items())
    for ka, ca in a.items():
        cs = ca * scale if scale != 1 else ca
        for kb, cb in bitems:
            k = ka + kb
            acc[k] = get(k, 0) + cs * cb


def finish(acc):
    """Drop zero coefficients and demote integral fractions to int."""
    out = {}
    for k, c in acc.items():
        if c:
            if type(c) is Fraction and c.denominator == 1:
                c = c.numerator
            out[k] = c
    return out


def diff(src, shift):
    """Formal derivative by the variable whose field starts at bit ``shift``."""
    one = 1 << shift
    out = {}
    for k, c in src.items():
        e = (k >> shift) & FIELD_MASK
        if e:
            c = c * e
            if type(c) is Fraction and c.denominator == 1:
                c = c.numerator
            out[k - one] = c
    return out


def overflowed(terms, guard):
    """True if any monomial has a guard bit set (an exponent reached 2**15)."""
    for k in terms:
        if k & guard:
            return True
    return False
