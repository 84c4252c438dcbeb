"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python ``_pykernels`` module.  Set ``QUADPOISSON_PURE=1`` to force the
fallback (the test suite runs both ways).
"""
import os

from . import _pykernels

impl = _pykernels
BACKEND = "python"

if not os.environ.get("QUADPOISSON_PURE"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        impl = _ckernels
        BACKEND = "cython"

add_into = impl.add_into
mul_into = impl.mul_into
finish = impl.finish
diff = impl.diff
overflowed = impl.overflowed
FIELD_BITS = _pykernels.FIELD_BITS
FIELD_MASK = _pykernels.FIELD_MASK
