"""Sparse 4-index tensors on sl(N) x sl(N) and the quadratic-linear (c, b) equation.

A :class:`Tensor4` stores the coefficients ``t[i,j,k,l]`` of
``sum t[i,j,k,l] E_ij (x) E_kl`` with 1-based indices; entries are
polynomials so that families depending on parameters can be handled in one
pass.  The residual of the defining equation for a pair ``(c, b)`` is kept as
a sparse six-index map so that a failure points at concrete indices.
"""
from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping

from .poly import ZERO, Accumulator, Polynomial, as_rational, format_rational, parse
from .report import Report


class FormatError(ValueError):
    """Malformed tensor, matrix or table input."""


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, str):
        return parse(x)
    return Polynomial.constant(x)


def _delta(a, b):
    return 1 if a == b else 0


class Tensor4:
    """Immutable sparse tensor ``t[i,j,k,l]`` with polynomial entries."""

    __slots__ = ("N", "_e")

    def __init__(self, N: int, entries: Mapping = None):
        if N < 2:
            raise ValueError("N must be at least 2")
        self.N = N
        e = {}
        for idx, val in (entries or {}).items():
            idx = tuple(idx)
            if len(idx) != 4 or not all(1 <= x <= N for x in idx):
                raise ValueError(f"index {idx} out of range for N={N}")
            p = _as_poly(val)
            if idx in e:
                p = e[idx] + p
            if p:
                e[idx] = p
            else:
                e.pop(idx, None)
        self._e = e

    @classmethod
    def _wrap(cls, N, e):
        t = object.__new__(cls)
        t.N = N
        t._e = {k: v for k, v in e.items() if v}
        return t

    @classmethod
    def from_pairs(cls, N: int, listed: Mapping, symmetry: str) -> "Tensor4":
        """Expand one representative per ``(ij, kl)`` pair.

        ``symmetry`` is ``"skew"`` (partner gets ``-coeff``), ``"sym"``
        (partner gets ``coeff``) or ``"none"``.  Listing both members of a pair
        is allowed only when they agree with the declared symmetry.
        """
        if symmetry not in ("skew", "sym", "none"):
            raise FormatError(f"unknown symmetry {symmetry!r}")
        e: dict = {}
        sign = -1 if symmetry == "skew" else 1
        for idx, val in listed.items():
            i, j, k, l = idx
            p = _as_poly(val)
            todo = [((i, j, k, l), p)]
            if symmetry != "none":
                todo.append(((k, l, i, j), p.scale(sign)))
            for key, q in todo:
                if key in e and e[key] != q:
                    raise FormatError(f"conflicting values for entry {key}: {e[key]} vs {q}")
                e[key] = q
        if symmetry == "skew":
            for (i, j, k, l), p in e.items():
                if (i, j) == (k, l) and p:
                    raise FormatError(f"skew tensor has nonzero diagonal entry {(i, j, k, l)}")
        return cls(N, e)

    # -- access -----------------------------------------------------------
    @property
    def entries(self) -> Mapping:
        return MappingProxyType(self._e)

    def get(self, i, j, k, l) -> Polynomial:
        return self._e.get((i, j, k, l), ZERO)

    def __getitem__(self, idx):
        return self._e.get(tuple(idx), ZERO)

    def items(self):
        return sorted(self._e.items())

    def __len__(self):
        return len(self._e)

    def __bool__(self):
        return bool(self._e)

    def variables(self) -> set:
        out = set()
        for p in self._e.values():
            out |= p.variables()
        return out

    def __eq__(self, other):
        if not isinstance(other, Tensor4):
            return NotImplemented
        return self.N == other.N and self._e == other._e

    def __hash__(self):
        return hash((self.N, frozenset(self._e.items())))

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in self.items())
        return f"Tensor4(N={self.N}, {{{body}}})"

    # -- linear algebra ---------------------------------------------------
    def _check_same(self, other):
        if not isinstance(other, Tensor4):
            raise TypeError("expected Tensor4")
        if other.N != self.N:
            raise ValueError(f"dimension mismatch: {self.N} vs {other.N}")

    def __add__(self, other):
        self._check_same(other)
        e = dict(self._e)
        for k, v in other._e.items():
            e[k] = e[k] + v if k in e else v
        return Tensor4._wrap(self.N, e)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Tensor4._wrap(self.N, {k: -v for k, v in self._e.items()})

    def scale(self, s) -> "Tensor4":
        s = _as_poly(s)
        return Tensor4._wrap(self.N, {k: v * s for k, v in self._e.items()})

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    def swap_pairs(self) -> "Tensor4":
        """``t'[i,j,k,l] = t[k,l,i,j]``."""
        return Tensor4._wrap(self.N, {(k, l, i, j): v for (i, j, k, l), v in self._e.items()})

    def specialize(self, assignment) -> "Tensor4":
        return Tensor4._wrap(self.N, {k: v.specialize(assignment) for k, v in self._e.items()})

    def trace1(self) -> dict:
        """``{(k, l): sum_i t[i,i,k,l]}`` (nonzero entries only)."""
        acc: dict = {}
        for (i, j, k, l), v in self._e.items():
            if i == j:
                acc[(k, l)] = acc.get((k, l), ZERO) + v
        return {kl: v for kl, v in acc.items() if v}

    def trace2(self) -> dict:
        """``{(i, j): sum_k t[i,j,k,k]}`` (nonzero entries only)."""
        acc: dict = {}
        for (i, j, k, l), v in self._e.items():
            if k == l:
                acc[(i, j)] = acc.get((i, j), ZERO) + v
        return {ij: v for ij, v in acc.items() if v}

    def symmetry(self) -> str:
        """``"skew"``, ``"sym"`` or ``"none"`` (the zero tensor reports ``"skew"``)."""
        if all(self.get(k, l, i, j) == -v for (i, j, k, l), v in self._e.items()):
            return "skew"
        if all(self.get(k, l, i, j) == v for (i, j, k, l), v in self._e.items()):
            return "sym"
        return "none"


@dataclass(frozen=True)
class MatrixX:
    """An ``N x N`` matrix with exact rational entries, ``{(i, j): value}``."""

    N: int
    entries: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in dict(self.entries).items():
            if not (1 <= i <= self.N and 1 <= j <= self.N):
                raise ValueError(f"matrix index {(i, j)} out of range for N={self.N}")
            v = as_rational(v)
            if v:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", MappingProxyType(clean))

    def __getitem__(self, ij):
        return self.entries.get(tuple(ij), 0)

    def trace(self):
        return as_rational(sum((self.entries.get((i, i), 0) for i in range(1, self.N + 1)), Fraction(0)))

    def __neg__(self):
        return MatrixX(self.N, {k: -v for k, v in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, MatrixX):
            return NotImplemented
        return self.N == other.N and dict(self.entries) == dict(other.entries)

    def __hash__(self):
        return hash((self.N, frozenset(self.entries.items())))

    @classmethod
    def unit(cls, N, i, j, coeff=1):
        return cls(N, {(i, j): coeff})

    @classmethod
    def identity(cls, N):
        return cls(N, {(i, i): 1 for i in range(1, N + 1)})


@dataclass
class Residual6:
    """Sparse ``{(i,j,k,l,m,n): Polynomial}`` map of nonzero residual entries."""

    N: int
    entries: dict

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def __len__(self):
        return len(self.entries)

    def first(self):
        if not self.entries:
            return None
        key = min(self.entries)
        return key, self.entries[key]

    def rotated(self) -> "Residual6":
        """Relabel so that index pairs cycle ``(ij) -> (kl) -> (mn) -> (ij)``."""
        return Residual6(self.N, {(k, l, m, n, i, j): v for (i, j, k, l, m, n), v in self.entries.items()})

    def __add__(self, other):
        e = dict(self.entries)
        for k, v in other.entries.items():
            s = e.get(k, ZERO) + v
            if s:
                e[k] = s
            else:
                e.pop(k, None)
        return Residual6(self.N, e)

    def __sub__(self, other):
        return self + Residual6(other.N, {k: -v for k, v in other.entries.items()})


# -- validation ---------------------------------------------------------------
def _validate(t: Tensor4, name: str, sign: int) -> Report:
    start = time.perf_counter()
    checked = 0
    for idx, v in t.items():
        checked += 1
        i, j, k, l = idx
        partner = t.get(k, l, i, j)
        if partner != v.scale(sign):
            what = "skewness" if sign < 0 else "symmetry"
            return Report(
                name, False, checked,
                witness={"violation": what, "index": list(idx), "value": str(v),
                         "partner": [k, l, i, j], "partner_value": str(partner)},
                elapsed=time.perf_counter() - start,
            )
    for label, tr in (("trace1", t.trace1()), ("trace2", t.trace2())):
        checked += 1
        if tr:
            key = min(tr)
            return Report(
                name, False, checked,
                witness={"violation": label, "index": list(key), "value": str(tr[key])},
                elapsed=time.perf_counter() - start,
            )
    return Report(name, True, checked, elapsed=time.perf_counter() - start)


def validate_c(c: Tensor4) -> Report:
    """Skew pair symmetry ``c[i,j,k,l] = -c[k,l,i,j]`` and vanishing partial traces."""
    return _validate(c, "validate_c", -1)


def validate_b(b: Tensor4) -> Report:
    """Pair symmetry ``b[i,j,k,l] = b[k,l,i,j]`` and vanishing partial traces."""
    return _validate(b, "validate_b", 1)


# -- Casimir and projector ----------------------------------------------------
def omega(N: int) -> Tensor4:
    """Tensor Casimir of sl(N): ``delta_jk delta_il - delta_ij delta_kl / N``."""
    if N < 2:
        raise ValueError("N must be at least 2")
    inv = Fraction(1, N)
    e = {}
    r = range(1, N + 1)
    for i, j, k, l in itertools.product(r, r, r, r):
        v = _delta(j, k) * _delta(i, l) - inv * _delta(i, j) * _delta(k, l)
        if v:
            e[(i, j, k, l)] = v
    return Tensor4(N, e)


def project_pN(m) -> MatrixX:
    """Orthogonal projection gl(N) -> sl(N): subtract ``trace/N`` times the identity."""
    if not isinstance(m, MatrixX):
        raise TypeError("expected MatrixX")
    if m.N < 2:
        raise ValueError("N must be at least 2")
    shift = Fraction(m.trace()) / m.N
    e = dict(m.entries)
    for i in range(1, m.N + 1):
        e[(i, i)] = e.get((i, i), 0) - shift
    return MatrixX(m.N, e)


# -- the defining equation ----------------------------------------------------
def _pair_products(c: Tensor4) -> dict:
    """``P[(kl, mn)][(i, j)] = sum_r c[k,l,i,r] c[r,j,m,n]``."""
    left: dict = {}   # left[(k,l)][i][r] = c[k,l,i,r]
    right: dict = {}  # right[(m,n)][r][j] = c[r,j,m,n]
    for (p, q, s, u), v in c.entries.items():
        left.setdefault((p, q), {}).setdefault(s, {})[u] = v
        right.setdefault((s, u), {}).setdefault(p, {})[q] = v
    P = {}
    for kl, A in left.items():
        for mn, B in right.items():
            block = {}
            for i, row in A.items():
                accs = {}
                for r, a in row.items():
                    for j, bv in B.get(r, {}).items():
                        acc = accs.get(j)
                        if acc is None:
                            acc = accs[j] = Accumulator()
                        acc.addmul(a, bv)
                for j, acc in accs.items():
                    p = acc.result()
                    if p:
                        block[(i, j)] = p
            if block:
                P[(kl, mn)] = block
    return P


def fp4_residual(c: Tensor4, b: Tensor4) -> Residual6:
    """Left side minus right side of the quadratic-linear equation on (c, b),
    at every index sextuple; an empty result means (c, b) is a solution."""
    if c.N != b.N:
        raise ValueError(f"dimension mismatch: c has N={c.N}, b has N={b.N}")
    N = c.N
    inv = Fraction(1, N)
    P = _pair_products(c)
    pairs = [(i, j) for i in range(1, N + 1) for j in range(1, N + 1)]

    def pp(x, y, z):
        blk = P.get((x, y))
        return ZERO if blk is None else blk.get(z, ZERO)

    # D[(kl, mn)] = sum_{r,s} c[k,l,r,s] c[s,r,m,n]
    D = {}
    for key, blk in P.items():
        acc = Accumulator()
        for r in range(1, N + 1):
            acc.add(blk.get((r, r), ZERO))
        d = acc.result()
        if d:
            D[key] = d
    bg = b.get
    out = {}
    for (i, j), (k, l), (m, n) in itertools.product(pairs, pairs, pairs):
        ij, kl, mn = (i, j), (k, l), (m, n)
        acc = Accumulator()
        acc.add(pp(kl, mn, ij))
        acc.add(pp(ij, kl, mn))
        acc.add(pp(mn, ij, kl))
        if i == j:
            acc.add(D.get((kl, mn), ZERO), -inv)
            acc.add(bg(k, l, m, n), inv)
            acc.add(bg(m, n, k, l), inv)
        if m == n:
            acc.add(D.get((ij, kl), ZERO), -inv)
            acc.add(bg(i, j, k, l), inv)
            acc.add(bg(k, l, i, j), inv)
        if k == l:
            acc.add(D.get((mn, ij), ZERO), -inv)
            acc.add(bg(m, n, i, j), inv)
            acc.add(bg(i, j, m, n), inv)
        if k == n:
            acc.add(bg(m, l, i, j), -1)
        if m == j:
            acc.add(bg(i, n, k, l), -1)
        if i == l:
            acc.add(bg(k, j, m, n), -1)
        v = acc.result()
        if v:
            out[(i, j, k, l, m, n)] = v
    return Residual6(N, out)


def fp4_report(c: Tensor4, b: Tensor4, name: str = "fp4") -> Report:
    start = time.perf_counter()
    res = fp4_residual(c, b)
    checked = c.N ** 6
    if res.is_zero:
        return Report(name, True, checked, elapsed=time.perf_counter() - start)
    idx, v = res.first()
    return Report(
        name, False, checked,
        witness={"index": list(idx), "residual": str(v)},
        elapsed=time.perf_counter() - start,
        details={"nonzero_entries": len(res)},
    )


# -- gauge transforms ---------------------------------------------------------
def ad_first(X: MatrixX, t: Tensor4) -> Tensor4:
    """``(ad_X (x) Id) t`` with ``ad_X M = XM - MX`` on the first tensor slot."""
    if X.N != t.N:
        raise ValueError("dimension mismatch")
    N = t.N
    xe = X.entries
    rows: dict = {}  # X column index -> [(p, X[p, i])]
    cols: dict = {}  # X row index -> [(q, X[j, q])]
    for (p, q), v in xe.items():
        rows.setdefault(q, []).append((p, v))
        cols.setdefault(p, []).append((q, v))
    e: dict = {}
    for (i, j, k, l), v in t.entries.items():
        # X E_ij = sum_p X[p,i] E_pj ;  E_ij X = sum_q X[j,q] E_iq
        for p, x in rows.get(i, ()):
            key = (p, j, k, l)
            e[key] = e.get(key, ZERO) + v.scale(x)
        for q, x in cols.get(j, ()):
            key = (i, q, k, l)
            e[key] = e.get(key, ZERO) - v.scale(x)
    return Tensor4(N, e)


def gauge_transform(c: Tensor4, b: Tensor4, X: MatrixX):
    """Infinitesimal gauge transform of a pair by a traceless matrix ``X``.

    Returns ``(c + ad_X Omega, b + 1/2 ad_X^2 Omega + ad_X c)`` with ``ad_X``
    acting on the first slot only.  Properties of the output are not assumed;
    use :func:`gauge_report` to inspect them.
    """
    if c.N != b.N or X.N != c.N:
        raise ValueError("dimension mismatch")
    if X.trace() != 0:
        raise ValueError(f"gauge generator must be traceless (trace {format_rational(X.trace())})")
    om = omega(c.N)
    adom = ad_first(X, om)
    c2 = c + adom
    b2 = b + ad_first(X, adom).scale(Fraction(1, 2)) + ad_first(X, c)
    return c2, b2


def gauge_report(c2: Tensor4, b2: Tensor4) -> Report:
    """Per-instance properties of a gauge image: c' skew, b' symmetric, (c', b') a solution."""
    subs = [validate_c(c2), validate_b(b2), fp4_report(c2, b2)]
    return Report("gauge image properties (informational)", True, sum(r.checked for r in subs),
                  details={r.name: r.status for r in subs}, subreports=subs)


# -- JSON ---------------------------------------------------------------------
def tensor_to_json(t: Tensor4) -> dict:
    sym = t.symmetry()
    listed = []
    for (i, j, k, l), v in t.items():
        if sym != "none" and (k, l) < (i, j):
            continue
        listed.append({"i": i, "j": j, "k": k, "l": l, "coeff": str(v)})
    return {"N": t.N, "symmetry": sym, "entries": listed}


def tensor_from_json(data) -> Tensor4:
    try:
        N = int(data["N"])
        sym = data.get("symmetry", "none")
        listed = {}
        for row in data.get("entries", []):
            idx = (int(row["i"]), int(row["j"]), int(row["k"]), int(row["l"]))
            if not all(1 <= x <= N for x in idx):
                raise FormatError(f"index {idx} out of range for N={N}")
            coeff = row["coeff"]
            if isinstance(coeff, float):
                raise FormatError("coefficients must be exact (string or integer)")
            p = _as_poly(str(coeff) if not isinstance(coeff, str) else coeff)
            if idx in listed and listed[idx] != p:
                raise FormatError(f"entry {idx} listed twice with different values")
            listed[idx] = p
        return Tensor4.from_pairs(N, listed, sym)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed tensor file: {exc}") from exc


def matrix_to_json(m: MatrixX) -> dict:
    return {"N": m.N, "entries": [{"i": i, "j": j, "coeff": format_rational(v)}
                                  for (i, j), v in sorted(m.entries.items())]}


def matrix_from_json(data) -> MatrixX:
    try:
        N = int(data["N"])
        e = {}
        for row in data.get("entries", []):
            coeff = row["coeff"]
            if isinstance(coeff, float):
                raise FormatError("coefficients must be exact (string or integer)")
            e[(int(row["i"]), int(row["j"]))] = as_rational(str(coeff))
        return MatrixX(N, e)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed matrix file: {exc}") from exc


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def load_tensor(path) -> Tensor4:
    return tensor_from_json(_load_json(path))


def save_tensor(t: Tensor4, path):
    with open(path, "w") as fh:
        json.dump(tensor_to_json(t), fh, indent=1)
        fh.write("\n")


def load_matrix(path) -> MatrixX:
    return matrix_from_json(_load_json(path))
