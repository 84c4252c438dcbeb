"""Polynomial multivector fields and their Schouten bracket.

A multivector of degree ``p`` is written in odd generators ``z_u`` standing
for ``d/du``: ``sum_{u1<...<up} coeff * z_u1 ... z_up``.  The Schouten
bracket is the odd Poisson bracket

    [P, Q] = sum_u  dP/dz_u (right) . dQ/du  -  (-1)**((p-1)(q-1)) dQ/dz_u (right) . dP/du

so that ``[P, f]`` is the contraction of ``P`` with ``df`` in its last slot and
``-[[P, f], g] = {f, g}`` for a bivector.  This computes Schouten brackets from
components, independently of any Jacobiator.
"""
from __future__ import annotations

from dataclasses import dataclass

from .poly import ZERO, Accumulator, Polynomial, VarId


def _merge(a: tuple, b: tuple):
    """Sign and sorted key of ``z_a z_b``, or ``(0, None)`` if they share a generator."""
    if set(a) & set(b):
        return 0, None
    inversions = 0
    for x in a:
        for y in b:
            if y < x:
                inversions += 1
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


@dataclass(frozen=True)
class Multivector:
    degree: int
    terms: dict  # sorted tuple of VarId -> Polynomial

    @classmethod
    def from_bivector_table(cls, table) -> "Multivector":
        return cls(2, {(u, v): p for (u, v), p in table.entries.items() if p})

    def __getitem__(self, key: tuple) -> Polynomial:
        return self.terms.get(tuple(key), ZERO)

    def right_derivative(self, u: VarId) -> dict:
        """``{key: coeff}`` of the right odd derivative by ``z_u``."""
        out = {}
        for key, p in self.terms.items():
            if u in key:
                j = key.index(u)
                sign = -1 if (len(key) - 1 - j) % 2 else 1
                out[key[:j] + key[j + 1:]] = p if sign > 0 else -p
        return out

    def partial(self, u: VarId) -> dict:
        out = {}
        for key, p in self.terms.items():
            d = p.partial(u)
            if d:
                out[key] = d
        return out

    def coordinates(self) -> set:
        out = set()
        for key, p in self.terms.items():
            out.update(key)
            out.update(v for v in p.variables() if v.is_coordinate)
        return out

    def contract(self, f: Polynomial) -> "Multivector":
        """``[P, f] = sum_u dP/dz_u (right) * df/du``."""
        if self.degree == 0:
            return Multivector(-1, {})
        acc: dict = {}
        for u in sorted(self.coordinates()):
            fu = f.partial(u)
            if not fu:
                continue
            for key, p in self.right_derivative(u).items():
                acc.setdefault(key, Accumulator()).addmul(p, fu)
        return Multivector(self.degree - 1, _finish(acc))


def _finish(acc: dict) -> dict:
    out = {}
    for key, a in acc.items():
        p = a.result()
        if p:
            out[key] = p
    return out


def _wedge_into(acc: dict, left: dict, right: dict, scale):
    for ka, pa in left.items():
        for kb, pb in right.items():
            sign, key = _merge(ka, kb)
            if sign:
                acc.setdefault(key, Accumulator()).addmul(pa, pb, sign * scale)


def schouten(P: Multivector, Q: Multivector) -> Multivector:
    p, q = P.degree, Q.degree
    sign = -1 if ((p - 1) * (q - 1)) % 2 else 1
    acc: dict = {}
    for u in sorted(P.coordinates() | Q.coordinates()):
        _wedge_into(acc, P.right_derivative(u), Q.partial(u), 1)
        _wedge_into(acc, Q.right_derivative(u), P.partial(u), -sign)
    return Multivector(p + q - 1, _finish(acc))


def trilinear(T: Multivector, f1: Polynomial, f2: Polynomial, f3: Polynomial) -> Polynomial:
    """``(f1, f2, f3)_T = -[[[T, f1], f2], f3]``; on coordinates ``(a, b, c)_T = T_abc``."""
    if T.degree != 3:
        raise ValueError("trilinear form needs a trivector")
    r = T.contract(f1).contract(f2).contract(f3)
    return -r[()]
