"""Linear and quadratic brackets on (gl(N) + C)* in the coordinates S[i,j], S0.

A :class:`BracketTable` stores ``{u, v}`` for ordered coordinate pairs
``u < v`` and serves ``{v, u}`` as the negation, so antisymmetry holds by
construction.  The extension coordinate ``S0`` enters the quadratic table
rescaled by ``lam``: with ``lam = kappa**2`` the table is the bivector
``pi - kappa pi_1(H) ^ d/dS0 + kappa S0 pi_1`` written in ``kappa * S0``, and
``lam = 1`` is the unscaled one.
"""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .poly import (
    ONE,
    S0,
    ZERO,
    Accumulator,
    Polynomial,
    VarId,
    as_rational,
    format_rational,
    parse,
    var,
)
from .poly import S as Svar
from .tensor import FormatError, Tensor4, _load_json, tensor_from_json, tensor_to_json


@dataclass(frozen=True)
class CoordSet:
    """Ordered coordinates: all ``S[i,j]`` (minus ``S[N,N]`` when restricted)
    followed by ``S0`` when ``with_s0``."""

    N: int
    restricted: bool = False
    with_s0: bool = True

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")

    @functools.cached_property
    def members(self) -> tuple:
        out = [Svar(i, j) for i in range(1, self.N + 1) for j in range(1, self.N + 1)]
        if self.restricted:
            out.remove(Svar(self.N, self.N))
        if self.with_s0:
            out.append(S0)
        return tuple(out)

    @functools.cached_property
    def _set(self) -> frozenset:
        return frozenset(self.members)

    def __contains__(self, v):
        return v in self._set

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    @property
    def eliminated(self) -> VarId:
        return Svar(self.N, self.N)

    def trace_substitute(self) -> Polynomial:
        """``-sum_{i<N} S[i,i]``, the value of ``S[N,N]`` on the traceless subspace."""
        acc = Accumulator()
        for i in range(1, self.N):
            acc.add(var(Svar(i, i)), -1)
        return acc.result()


class BracketTable:
    """Antisymmetric table of coordinate brackets."""

    def __init__(self, coords: CoordSet, entries: Mapping = None, lam=None, source=None):
        self.coords = coords
        self.lam = None if lam is None else as_rational(lam)
        self.source = source
        e = {}
        for (u, v), p in (entries or {}).items():
            if u not in coords or v not in coords:
                raise ValueError(f"pair ({u}, {v}) not in coordinate set")
            if not isinstance(p, Polynomial):
                p = parse(p) if isinstance(p, str) else Polynomial.constant(p)
            if u == v:
                if p:
                    raise ValueError(f"diagonal entry {{{u},{u}}} must vanish")
                continue
            if v < u:
                u, v, p = v, u, -p
            if (u, v) in e and e[(u, v)] != p:
                raise ValueError(f"conflicting values for {{{u},{v}}}")
            if p:
                e[(u, v)] = p
            else:
                e.pop((u, v), None)
        self._e = e
        self._columns = None

    @property
    def N(self) -> int:
        return self.coords.N

    @property
    def restricted(self) -> bool:
        return self.coords.restricted

    @property
    def entries(self) -> dict:
        return dict(self._e)

    def get(self, u: VarId, v: VarId) -> Polynomial:
        if u == v:
            return ZERO
        if u < v:
            return self._e.get((u, v), ZERO)
        p = self._e.get((v, u))
        return ZERO if p is None else -p

    def items(self):
        return sorted(self._e.items(), key=lambda kv: (kv[0][0].key, kv[0][1].key))

    def column(self, w: VarId) -> dict:
        """``{x: {x, w}}`` over coordinates with a nonzero bracket."""
        if self._columns is None:
            cols: dict = {}
            for (u, v), p in self._e.items():
                cols.setdefault(v, {})[u] = p
                cols.setdefault(u, {})[v] = -p
            self._columns = cols
        return self._columns.get(w, {})

    def __eq__(self, other):
        if not isinstance(other, BracketTable):
            return NotImplemented
        return self.coords == other.coords and self._e == other._e and self.lam == other.lam

    def __len__(self):
        return len(self._e)

    def combine(self, other: "BracketTable", weight) -> "BracketTable":
        """``self + weight * other``; ``weight`` may be a polynomial (e.g. a pencil parameter)."""
        if other.coords != self.coords:
            raise ValueError("coordinate sets differ")
        w = weight if isinstance(weight, Polynomial) else Polynomial.constant(weight)
        e = dict(self._e)
        for k, p in other._e.items():
            e[k] = e.get(k, ZERO) + p * w
        return BracketTable(self.coords, e)

    def with_entry(self, u: VarId, v: VarId, p: Polynomial) -> "BracketTable":
        e = dict(self._e)
        if v < u:
            u, v, p = v, u, -p
        e[(u, v)] = p
        return BracketTable(self.coords, e, self.lam, self.source)


@dataclass
class VectorFieldX:
    """Vector field ``sum components[u] d/du`` over a coordinate set."""

    coords: CoordSet
    components: dict

    def __getitem__(self, u):
        return self.components.get(u, ZERO)

    def apply(self, f: Polynomial) -> Polynomial:
        acc = Accumulator()
        for u, comp in self.components.items():
            if comp:
                acc.addmul(comp, f.partial(u))
        return acc.result()

    def scale(self, s) -> "VectorFieldX":
        return VectorFieldX(self.coords, {u: p * s for u, p in self.components.items() if p})

    def restrict(self) -> "VectorFieldX":
        rc = CoordSet(self.coords.N, True, self.coords.with_s0)
        sub = rc.trace_substitute()
        drop = rc.eliminated
        return VectorFieldX(rc, {u: p.substitute(drop, sub) for u, p in self.components.items()
                                 if u != drop and u in rc})


# -- construction -------------------------------------------------------------
def _check_N(*tensors):
    Ns = {t.N for t in tensors}
    if len(Ns) != 1:
        raise ValueError(f"dimension mismatch: {sorted(Ns)}")
    return Ns.pop()


def _lie_poisson(i, j, k, l, S) -> Polynomial:
    """``delta_jk S[i,l] - delta_li S[k,j]``."""
    acc = Accumulator()
    if j == k:
        acc.add(S[(i, l)])
    if l == i:
        acc.add(S[(k, j)], -1)
    return acc.result()


def _svars(N):
    return {(i, j): var(Svar(i, j)) for i in range(1, N + 1) for j in range(1, N + 1)}


def linear_bracket(N: int, with_s0: bool = True) -> BracketTable:
    """Lie-Poisson bracket on gl(N)*, trivially extended to ``S0``."""
    coords = CoordSet(N, False, with_s0)
    S = _svars(N)
    e = {}
    keys = sorted(S)
    for a, (i, j) in enumerate(keys):
        for (k, l) in keys[a + 1:]:
            p = _lie_poisson(i, j, k, l, S)
            if p:
                e[(Svar(i, j), Svar(k, l))] = p
    return BracketTable(coords, e)


def _linear_forms(t: Tensor4, S) -> dict:
    """``L[(k,j)] = sum_{m,n} t[k,j,n,m] S[m,n]``."""
    accs: dict = {}
    for (k, j, n, m), v in t.entries.items():
        accs.setdefault((k, j), Accumulator()).addmul(v, S[(m, n)])
    return {kj: acc.result() for kj, acc in accs.items()}


def quadratic_part(c: Tensor4, with_s0: bool = False) -> BracketTable:
    """The bracket of the quadratic bivector built from ``c`` alone:

    ``{S_ij, S_kl} = sum_{m,n} (c_kjnm S_mn S_il - c_ilnm S_mn S_kj)
    + sum_{s,t} (c_iskt S_sj S_tl - c_sjtl S_is S_kt)``.
    """
    N = c.N
    S = _svars(N)
    L = _linear_forms(c, S)
    by_13: dict = {}  # (i, k) -> [(s, t, c_iskt)]
    by_24: dict = {}  # (j, l) -> [(s, t, c_sjtl)]
    for (p, q, r, u), v in c.entries.items():
        by_13.setdefault((p, r), []).append((q, u, v))
        by_24.setdefault((q, u), []).append((p, r, v))
    keys = sorted(S)
    e = {}
    for a, (i, j) in enumerate(keys):
        for (k, l) in keys[a + 1:]:
            acc = Accumulator()
            if (k, j) in L:
                acc.addmul(L[(k, j)], S[(i, l)])
            if (i, l) in L:
                acc.addmul(L[(i, l)], S[(k, j)], -1)
            for s, t, v in by_13.get((i, k), ()):
                acc.addmul(v, S[(s, j)] * S[(t, l)])
            for s, t, v in by_24.get((j, l), ()):
                acc.addmul(v, S[(i, s)] * S[(k, t)], -1)
            p = acc.result()
            if p:
                e[(Svar(i, j), Svar(k, l))] = p
    return BracketTable(CoordSet(N, False, with_s0), e)


def hamiltonian_H(c: Tensor4, b: Tensor4) -> Polynomial:
    """``H = sum b_klnm S_mn S_lk - 1/2 sum c_klnm c_mnn'm' S_lk S_m'n'``."""
    N = _check_N(c, b)
    S = _svars(N)
    acc = Accumulator()
    for (k, l, n, m), v in b.entries.items():
        acc.addmul(v, S[(m, n)] * S[(l, k)])
    Lc = _linear_forms(c, S)  # Lc[(m,n)] = sum c_mnn'm' S_m'n'
    half = Fraction(-1, 2)
    for (k, l, n, m), v in c.entries.items():
        if (m, n) in Lc:
            acc.addmul(v * S[(l, k)], Lc[(m, n)], half)
    return acc.result()


def ham_vector_field(c: Tensor4, b: Tensor4, with_s0: bool = True) -> VectorFieldX:
    """Hamiltonian vector field of ``H`` with respect to the linear bracket,
    from the closed component formula

    ``V_kl = sum (-c_ksnm c_mnn'm' S_m'n' S_sl + c_slnm c_mnn'm' S_m'n' S_ks)
    + 2 sum (b_ksnm S_mn S_sl - b_slnm S_mn S_ks)``.
    """
    N = _check_N(c, b)
    S = _svars(N)
    Lc = _linear_forms(c, S)
    # Q[(k,s)] = sum_{m,n} c_ksnm Lc[(m,n)] ;  Bl[(k,s)] = sum_{m,n} b_ksnm S_mn
    qacc: dict = {}
    for (k, s, n, m), v in c.entries.items():
        if (m, n) in Lc:
            qacc.setdefault((k, s), Accumulator()).addmul(v, Lc[(m, n)])
    Q = {ks: a.result() for ks, a in qacc.items()}
    Bl = _linear_forms(b, S)
    comps = {}
    R = range(1, N + 1)
    for k in R:
        for l in R:
            acc = Accumulator()
            for s in R:
                if (k, s) in Q:
                    acc.addmul(Q[(k, s)], S[(s, l)], -1)
                if (s, l) in Q:
                    acc.addmul(Q[(s, l)], S[(k, s)])
                if (k, s) in Bl:
                    acc.addmul(Bl[(k, s)], S[(s, l)], 2)
                if (s, l) in Bl:
                    acc.addmul(Bl[(s, l)], S[(k, s)], -2)
            p = acc.result()
            if p:
                comps[Svar(k, l)] = p
    return VectorFieldX(CoordSet(N, False, with_s0), comps)


def quadratic_bracket(c: Tensor4, b: Tensor4, lam) -> BracketTable:
    """Quadratic bracket on (gl(N) + C)*:

    ``{S_ij, S_kl} = S0 (delta_jk S_il - delta_li S_kj) + [c-part]`` and
    ``{S0, S_kl} = lam * V_kl`` with ``V`` from :func:`ham_vector_field`.
    """
    lam = as_rational(lam)
    if lam == 0:
        raise ValueError("lam must be nonzero")
    N = _check_N(c, b)
    S = _svars(N)
    s0 = var(S0)
    pi = quadratic_part(c)
    keys = sorted(S)
    e = {}
    for a, (i, j) in enumerate(keys):
        for (k, l) in keys[a + 1:]:
            u, v = Svar(i, j), Svar(k, l)
            acc = Accumulator()
            acc.add(pi.get(u, v))
            acc.addmul(s0, _lie_poisson(i, j, k, l, S))
            p = acc.result()
            if p:
                e[(u, v)] = p
    V = ham_vector_field(c, b)
    for u, comp in V.components.items():
        e[(S0, u)] = comp.scale(lam)
    return BracketTable(CoordSet(N, False, True), e, lam=lam, source=(c, b))


def restrict_sl(t: BracketTable) -> BracketTable:
    """Eliminate ``S[N,N] = -sum_{i<N} S[i,i]`` and drop its row and column."""
    if t.restricted:
        return t
    rc = CoordSet(t.N, True, t.coords.with_s0)
    drop = rc.eliminated
    sub = rc.trace_substitute()
    e = {}
    for (u, v), p in t._e.items():
        if u == drop or v == drop:
            continue
        q = p.substitute(drop, sub)
        if q:
            e[(u, v)] = q
    return BracketTable(rc, e, lam=t.lam, source=t.source)


def restrict_poly(p: Polynomial, N: int) -> Polynomial:
    rc = CoordSet(N, True)
    return p.substitute(rc.eliminated, rc.trace_substitute())


def _check_foreign(t: BracketTable, f: Polynomial):
    for v in f.variables():
        if v.is_coordinate and v not in t.coords:
            raise ValueError(f"coordinate {v} is not in the table's coordinate set")


def bracket_of(t: BracketTable, f: Polynomial, g: Polynomial) -> Polynomial:
    """``{f, g} = sum_{u,v} {u, v} df/du dg/dv``; parameters act as constants."""
    _check_foreign(t, f)
    _check_foreign(t, g)
    fvars = [u for u in f.variables() if u.is_coordinate]
    gvars = [v for v in g.variables() if v.is_coordinate]
    if not fvars or not gvars:
        return ZERO
    dg = [(v, g.partial(v)) for v in gvars]
    acc = Accumulator()
    for u in fvars:
        inner = Accumulator()
        for v, gv in dg:
            e = t.get(u, v)
            if e:
                inner.addmul(e, gv)
        acc.addmul(inner.result(), f.partial(u))
    return acc.result()


def coordinate_bracket(t: BracketTable, f: Polynomial, w: VarId) -> Polynomial:
    """``{f, w}`` for a coordinate ``w``, via the cached column of the table."""
    acc = Accumulator()
    for x, e in t.column(w).items():
        acc.addmul(e, f.partial(x))
    return acc.result()


# -- JSON ---------------------------------------------------------------------
def table_to_json(t: BracketTable, include_source: bool = True) -> dict:
    out = {
        "N": t.N,
        "lambda": None if t.lam is None else format_rational(t.lam),
        "restricted": t.restricted,
        "with_s0": t.coords.with_s0,
        "entries": [{"u": str(u), "v": str(v), "poly": str(p)} for (u, v), p in t.items()],
    }
    if include_source and t.source is not None:
        c, b = t.source
        out["source"] = {"c": tensor_to_json(c), "b": tensor_to_json(b)}
    return out


def table_from_json(data) -> BracketTable:
    try:
        N = int(data["N"])
        lam = data.get("lambda")
        lam = None if lam is None else as_rational(str(lam))
        coords = CoordSet(N, bool(data.get("restricted", False)), bool(data.get("with_s0", True)))
        e = {}
        for row in data.get("entries", []):
            u, v = VarId.parse(row["u"]), VarId.parse(row["v"])
            if not (u < v):
                raise FormatError(f"entry ({u}, {v}) must have u < v")
            e[(u, v)] = parse(row["poly"])
        source = None
        if data.get("source") is not None:
            source = (tensor_from_json(data["source"]["c"]), tensor_from_json(data["source"]["b"]))
        return BracketTable(coords, e, lam=lam, source=source)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed bracket table: {exc}") from exc


def load_table(path) -> BracketTable:
    return table_from_json(_load_json(path))


def save_table(t: BracketTable, path, include_source: bool = True):
    with open(path, "w") as fh:
        json.dump(table_to_json(t, include_source), fh, indent=1)
        fh.write("\n")
