"""Exact sparse multivariate polynomials over the rationals.

Every scalar in the package is an exact rational: an ``int`` when integral,
otherwise a :class:`fractions.Fraction` (always in lowest terms with a positive
denominator).  Polynomials are immutable; arithmetic goes through the term
kernels selected in :mod:`quadpoisson.kernels`.

Variables are :class:`VarId` values.  Their total order is fixed: coordinates
``S[i,j]`` (lexicographic in ``(i, j)``), then ``S0``, then the parameters
``y0..y9``, ``t``, ``a`` and the pencil parameter ``lam``.  Printed output
uses graded lexicographic term order over that variable order, so it does not
depend on the order in which variables were first seen.
"""
from __future__ import annotations

import functools
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from . import kernels

Number = Union[int, Fraction]

_KINDS = ("S", "S0", "y", "t", "a", "lam")
_KIND_RANK = {k: r for r, k in enumerate(_KINDS)}
COORDINATE_KINDS = frozenset({"S", "S0"})
MAX_EXPONENT = (1 << (kernels.FIELD_BITS - 1)) - 1


class MissingVariableError(KeyError):
    """Raised by :meth:`Polynomial.eval` when a variable has no value."""

    def __init__(self, var: "VarId"):
        super().__init__(var)
        self.var = var

    def __str__(self):
        return f"no value assigned to variable {self.var}"


@functools.total_ordering
@dataclass(frozen=True, eq=True)
class VarId:
    """A polynomial variable: ``S[i,j]``, ``S0``, ``y<k>``, ``t``, ``a`` or ``lam``."""

    kind: str
    i: int = 0
    j: int = 0

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.kind == "S":
            if self.i < 1 or self.j < 1:
                raise ValueError("S indices start at 1")
        elif self.kind == "y":
            if not 0 <= self.i <= 9 or self.j:
                raise ValueError("y index must be in 0..9")
        elif self.i or self.j:
            raise ValueError(f"{self.kind} takes no indices")

    @property
    def key(self):
        return (_KIND_RANK[self.kind], self.i, self.j)

    def __lt__(self, other):
        if not isinstance(other, VarId):
            return NotImplemented
        return self.key < other.key

    @property
    def is_coordinate(self) -> bool:
        return self.kind in COORDINATE_KINDS

    def __str__(self):
        if self.kind == "S":
            return f"S[{self.i},{self.j}]"
        if self.kind == "y":
            return f"y{self.i}"
        return self.kind

    def __repr__(self):
        return f"VarId({self})"

    @classmethod
    def parse(cls, text: str) -> "VarId":
        m = _VAR_RE.fullmatch(text.strip())
        if not m:
            raise ValueError(f"not a variable name: {text!r}")
        return _var_from_match(m)


_VAR_RE = re.compile(r"S\[\s*(\d+)\s*,\s*(\d+)\s*\]|S0|y(\d)|lam|t|a")


def _var_from_match(m) -> VarId:
    if m.group(1) is not None:
        return VarId("S", int(m.group(1)), int(m.group(2)))
    if m.group(3) is not None:
        return VarId("y", int(m.group(3)))
    return VarId(m.group(0))


def S(i: int, j: int) -> VarId:
    return VarId("S", i, j)


def y(k: int) -> VarId:
    return VarId("y", k)


S0 = VarId("S0")
T = VarId("t")
A = VarId("a")
LAM = VarId("lam")


# Variable interning: each VarId owns one exponent field of a packed monomial.
_slot_of: dict = {}
_var_of: list = []
_guard = 0
_intern_lock = threading.Lock()


def _slot(v: VarId) -> int:
    s = _slot_of.get(v)
    if s is None:
        global _guard
        with _intern_lock:
            s = _slot_of.get(v)
            if s is None:
                s = len(_var_of)
                _var_of.append(v)
                _guard |= 1 << (s * kernels.FIELD_BITS + kernels.FIELD_BITS - 1)
                _slot_of[v] = s
    return s


def _unit(v: VarId) -> int:
    return 1 << (_slot(v) * kernels.FIELD_BITS)


def _decode(key: int):
    """Packed monomial -> list of (VarId, exponent)."""
    out = []
    s = 0
    while key:
        e = key & kernels.FIELD_MASK
        if e:
            out.append((_var_of[s], e))
        key >>= kernels.FIELD_BITS
        s += 1
    return out


def _encode(powers) -> int:
    key = 0
    for v, e in powers:
        if e < 0:
            raise ValueError("negative exponent")
        if e > MAX_EXPONENT:
            raise OverflowError(f"exponent {e} exceeds {MAX_EXPONENT}")
        key += e * _unit(v)
    return key


def as_rational(x) -> Number:
    """Normalize a scalar to ``int`` or a non-integral ``Fraction``.

    Accepts ints, Fractions and strings such as ``"-3/4"``; floats are
    refused because they would silently break exactness.
    """
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return as_rational(Fraction(x.strip()))
    raise TypeError(f"not an exact rational: {x!r}")


def format_rational(x) -> str:
    x = as_rational(x)
    if isinstance(x, int):
        return str(x)
    return f"{x.numerator}/{x.denominator}"


def _check_overflow(terms):
    if kernels.overflowed(terms, _guard):
        raise OverflowError(f"exponent exceeds {MAX_EXPONENT}")


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping = None):
        """Build from ``{monomial: coeff}`` where a monomial is a mapping or an
        iterable of ``(VarId, exponent)`` pairs (the empty one is the constant)."""
        acc = {}
        if terms:
            for mono, c in terms.items():
                items = mono.items() if isinstance(mono, Mapping) else mono
                k = _encode(items)
                acc[k] = acc.get(k, 0) + as_rational(c)
        self._t = kernels.finish(acc)
        self._hash = None

    @classmethod
    def _wrap(cls, t: dict) -> "Polynomial":
        p = object.__new__(cls)
        p._t = t
        p._hash = None
        return p

    @classmethod
    def constant(cls, c) -> "Polynomial":
        c = as_rational(c)
        return cls._wrap({0: c} if c else {})

    @classmethod
    def variable(cls, v: VarId, power: int = 1) -> "Polynomial":
        return cls._wrap({_encode([(v, power)]): 1})

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict:
        """``{((VarId, exp), ...): coeff}`` with variables in canonical order."""
        return {tuple(sorted(_decode(k))): c for k, c in self._t.items()}

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    @property
    def is_zero(self) -> bool:
        return not self._t

    @property
    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_value(self) -> Number:
        if not self.is_constant:
            raise ValueError(f"not a constant: {self}")
        return self._t.get(0, 0)

    def variables(self) -> set:
        mask = 0
        for k in self._t:
            mask |= k
        return {v for v, _ in _decode(mask)}

    def degree(self, kinds: Iterable[str] = None) -> int:
        """Maximal total degree, optionally counting only some variable kinds.
        The zero polynomial has degree -1."""
        kinds = None if kinds is None else frozenset(kinds)
        best = -1
        for k in self._t:
            d = sum(e for v, e in _decode(k) if kinds is None or v.kind in kinds)
            best = max(best, d)
        return best

    def is_homogeneous(self, degree: int, kinds: Iterable[str] = COORDINATE_KINDS) -> bool:
        kinds = frozenset(kinds)
        return all(
            sum(e for v, e in _decode(k) if v.kind in kinds) == degree for k in self._t
        )

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        return Polynomial.constant(x)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        acc = dict(self._t)
        kernels.add_into(acc, other._t, 1)
        return Polynomial._wrap(kernels.finish(acc))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._wrap({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self._t)
        kernels.add_into(acc, other._t, -1)
        return Polynomial._wrap(kernels.finish(acc))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if not self._t or not other._t:
                return ZERO
            acc = {}
            kernels.mul_into(acc, self._t, other._t, 1)
            out = kernels.finish(acc)
            _check_overflow(out)
            return Polynomial._wrap(out)
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = as_rational(c)
        if not c:
            return ZERO
        if c == 1:
            return self
        return Polynomial._wrap(kernels.finish({k: c * v for k, v in self._t.items()}))

    def __truediv__(self, other):
        c = as_rational(other)
        if not c:
            raise ZeroDivisionError("polynomial division by zero")
        return self.scale(Fraction(1) / c)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._t == other._t
        try:
            return self._t == Polynomial.constant(other)._t
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- calculus and evaluation ------------------------------------------
    def partial(self, v: VarId) -> "Polynomial":
        s = _slot_of.get(v)
        if s is None or not self._t:
            return ZERO
        return Polynomial._wrap(kernels.diff(self._t, s * kernels.FIELD_BITS))

    def _split(self, v: VarId) -> dict:
        """Group terms by the exponent of ``v``: ``{e: {rest_key: coeff}}``."""
        s = _slot_of.get(v)
        if s is None:
            return {0: self._t}
        shift = s * kernels.FIELD_BITS
        groups: dict = {}
        for k, c in self._t.items():
            e = (k >> shift) & kernels.FIELD_MASK
            groups.setdefault(e, {})[k - (e << shift)] = c
        return groups

    def substitute(self, v: VarId, r) -> "Polynomial":
        r = self._coerce(r)
        groups = self._split(v)
        if set(groups) == {0}:
            return self
        acc = dict(groups.pop(0, {}))
        powers = {1: r}
        for e in sorted(groups):
            if e not in powers:
                powers[e] = r ** e
            kernels.mul_into(acc, groups[e], powers[e]._t, 1)
        out = kernels.finish(acc)
        _check_overflow(out)
        return Polynomial._wrap(out)

    def specialize(self, assignment: Mapping[VarId, object]) -> "Polynomial":
        """Substitute values (rationals or polynomials) for some variables."""
        p = self
        for v, val in assignment.items():
            p = p.substitute(v, val)
        return p

    def eval(self, assignment: Mapping[VarId, object]) -> Fraction:
        total = Fraction(0)
        for k, c in self._t.items():
            term = Fraction(c)
            for v, e in _decode(k):
                if v not in assignment:
                    raise MissingVariableError(v)
                term *= Fraction(as_rational(assignment[v])) ** e
            total += term
        return total

    def coefficients_in(self, v: VarId) -> dict:
        """``{e: coefficient polynomial of v**e}``."""
        return {e: Polynomial._wrap(t) for e, t in self._split(v).items()}

    # -- text -------------------------------------------------------------
    def _sorted_terms(self):
        order = sorted(self.variables())
        rows = []
        for k, c in self._t.items():
            powers = dict(_decode(k))
            vec = tuple(powers.get(v, 0) for v in order)
            rows.append(((-sum(vec), tuple(-e for e in vec)), [(v, powers[v]) for v in order if v in powers], c))
        rows.sort(key=lambda r: r[0])
        return [(mono, c) for _, mono, c in rows]

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for idx, (mono, c) in enumerate(self._sorted_terms()):
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            factors = [str(v) if e == 1 else f"{v}^{e}" for v, e in mono]
            if not factors:
                body = format_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([format_rational(mag)] + factors)
            if idx == 0:
                parts.append(body if sign == "+" else "-" + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"

    def __reduce__(self):
        return (_rebuild, (tuple((tuple(_decode(k)), c) for k, c in self._t.items()),))


def _rebuild(items):
    return Polynomial({mono: c for mono, c in items})


ZERO = Polynomial._wrap({})
ONE = Polynomial._wrap({0: 1})


def var(v: VarId) -> Polynomial:
    return Polynomial.variable(v)


def const(c) -> Polynomial:
    return Polynomial.constant(c)


class Accumulator:
    """Mutable running sum used inside hot loops; call :meth:`result` once."""

    __slots__ = ("_acc",)

    def __init__(self):
        self._acc = {}

    def add(self, p: Polynomial, scale=1):
        if p._t:
            kernels.add_into(self._acc, p._t, scale)

    def addmul(self, p: Polynomial, q: Polynomial, scale=1):
        if p._t and q._t:
            kernels.mul_into(self._acc, p._t, q._t, scale)

    def result(self) -> Polynomial:
        out = kernels.finish(self._acc)
        _check_overflow(out)
        return Polynomial._wrap(out)


def poly_sum(items: Iterable[Polynomial]) -> Polynomial:
    acc = Accumulator()
    for p in items:
        acc.add(p)
    return acc.result()


# -- functional API -------------------------------------------
def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def partial(p: Polynomial, v: VarId) -> Polynomial:
    return p.partial(v)


def substitute(p: Polynomial, v: VarId, r) -> Polynomial:
    return p.substitute(v, r)


def evaluate(p: Polynomial, assignment: Mapping[VarId, object]) -> Fraction:
    return p.eval(assignment)


# -- parsing ----------------------------------------------------------------
_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>S\[\s*\d+\s*,\s*\d+\s*\]|S0|y\d|lam|t|a)|(?P<op>[-+*^()]))"
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse polynomial at {text[pos:]!r}")
            if m.group("num") is not None:
                self.toks.append(("num", m.group("num")))
            elif m.group("var") is not None:
                self.toks.append(("var", m.group("var")))
            else:
                self.toks.append(("op", m.group("op")))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ValueError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> Polynomial:
        if not self.toks:
            raise ValueError("empty polynomial text")
        p = self.expr()
        if self.i != len(self.toks):
            raise ValueError(f"trailing input in {self.text!r}")
        return p

    def expr(self) -> Polynomial:
        acc = Accumulator()
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc.add(self.term(), sign)
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                acc.add(self.term(), -1 if val == "-" else 1)
            else:
                return acc.result()

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        kind, val = self.take()
        if kind == "num":
            base = Polynomial.constant(Fraction(val))
        elif kind == "var":
            base = var(VarId.parse(val))
        elif (kind, val) == ("op", "("):
            base = self.expr()
            self.expect_op(")")
        elif (kind, val) == ("op", "-"):
            return -self.factor()
        else:
            raise ValueError(f"unexpected token {val!r} in {self.text!r}")
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num" or "/" in val:
                raise ValueError(f"exponent must be a non-negative integer in {self.text!r}")
            base = base ** int(val)
        return base


def parse(text: str) -> Polynomial:
    """Parse the textual form produced by ``str(Polynomial)``.

    Also accepts parentheses and repeated factors, e.g. ``"2*(S[1,1] - S0)^2"``.
    """
    return _Parser(text).parse()


def to_string(p: Polynomial) -> str:
    return str(p)
