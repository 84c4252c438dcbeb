"""Symbolic certification of Poisson identities.

Every check returns a :class:`~quadpoisson.report.Report`.  Triples are
visited in sorted coordinate order, so the witness of a failing check is the
lexicographically first failing triple regardless of ``jobs``.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .brackets import (
    BracketTable,
    CoordSet,
    VectorFieldX,
    bracket_of,
    coordinate_bracket,
    ham_vector_field,
    hamiltonian_H,
    linear_bracket,
    quadratic_part,
    restrict_poly,
    restrict_sl,
)
from .multivector import Multivector, schouten, trilinear
from .poly import LAM, S0, ZERO, Polynomial, VarId, var
from .poly import S as Svar
from .report import Report
from .tensor import Tensor4, fp4_residual


def _perm_sign(order) -> int:
    sign = 1
    order = list(order)
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[j] < order[i]:
                sign = -sign
    return sign


@dataclass
class Trilinear:
    """Alternating trilinear form on coordinates, stored on sorted distinct triples."""

    coords: CoordSet
    values: dict = field(default_factory=dict)

    def get(self, u: VarId, v: VarId, w: VarId) -> Polynomial:
        if len({u, v, w}) < 3:
            return ZERO
        key = tuple(sorted((u, v, w)))
        p = self.values.get(key, ZERO)
        return p if _perm_sign((u, v, w)) > 0 else -p

    def __sub__(self, other: "Trilinear") -> "Trilinear":
        keys = sorted(set(self.values) | set(other.values))
        vals = {k: self.values.get(k, ZERO) - other.values.get(k, ZERO) for k in keys}
        return Trilinear(self.coords, {k: p for k, p in vals.items() if p})

    def scale(self, s) -> "Trilinear":
        return Trilinear(self.coords, {k: p * s for k, p in self.values.items() if p})

    def first_nonzero(self):
        for k in sorted(self.values):
            if self.values[k]:
                return k, self.values[k]
        return None


def _as_poly(f):
    return var(f) if isinstance(f, VarId) else f


def jacobiator(t: BracketTable, f1, f2, f3) -> Polynomial:
    """``{{f1,f2},f3} + {{f3,f1},f2} + {{f2,f3},f1}``."""
    f1, f2, f3 = _as_poly(f1), _as_poly(f2), _as_poly(f3)
    return (bracket_of(t, bracket_of(t, f1, f2), f3)
            + bracket_of(t, bracket_of(t, f3, f1), f2)
            + bracket_of(t, bracket_of(t, f2, f3), f1))


def _coord_jacobiator(t: BracketTable, u: VarId, v: VarId, w: VarId) -> Polynomial:
    return (coordinate_bracket(t, t.get(u, v), w)
            + coordinate_bracket(t, t.get(w, u), v)
            + coordinate_bracket(t, t.get(v, w), u))


def check_triples(coords) -> list:
    """Distinct unordered triples plus one ``(u, u, v)`` per pair, sorted."""
    cs = sorted(coords)
    out = list(itertools.combinations(cs, 3))
    out += [(u, u, v) for u, v in itertools.combinations(cs, 2)]
    return sorted(out)


def _jacobi_chunk(args):
    t, triples = args
    for k, tr in enumerate(triples):
        r = _coord_jacobiator(t, *tr)
        if r:
            return k, r
    return None


def _chunks(seq, n):
    size = max(1, -(-len(seq) // n))
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def _witness(triple, residual) -> dict:
    return {"triple": [str(x) for x in triple], "residual": str(residual)}


def jacobi_check(t: BracketTable, jobs: int = 1, allow_unrestricted: bool = False,
                 name: str = "jacobi") -> Report:
    """Jacobi identity on every coordinate triple of ``t``."""
    if not t.restricted and t.coords.with_s0 and not allow_unrestricted:
        raise ValueError("table is not restricted to sl(N); pass allow_unrestricted=True to check anyway")
    start = time.perf_counter()
    triples = check_triples(t.coords.members)
    t.column(t.coords.members[0])  # build the column cache before pickling
    hit = None
    if jobs > 1 and len(triples) > 1:
        chunks = _chunks(triples, jobs * 4)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for chunk, res in zip(chunks, pool.map(_jacobi_chunk, [(t, c) for c in chunks])):
                if res is not None:
                    hit = (chunk[res[0]], res[1])
                    break
    else:
        res = _jacobi_chunk((t, triples))
        if res is not None:
            hit = (triples[res[0]], res[1])
    details = {"coordinates": len(t.coords), "restricted": t.restricted}
    if t.lam is not None:
        details["lambda"] = str(t.lam)
    return Report(name, hit is None, len(triples), None if hit is None else _witness(*hit),
                  time.perf_counter() - start, details)


def pencil(t1: BracketTable, t2: BracketTable, param: VarId = LAM) -> BracketTable:
    """``t1 + param * t2`` with ``param`` a free polynomial variable."""
    if t1.coords != t2.coords:
        raise ValueError(f"coordinate sets differ: {t1.coords} vs {t2.coords}")
    return t1.combine(t2, var(param))


def compatibility_check(t1: BracketTable, t2: BracketTable, jobs: int = 1) -> Report:
    """Jacobi for the pencil ``t1 + lam' t2`` as a polynomial identity in ``lam'``."""
    start = time.perf_counter()
    p = pencil(t1, t2)
    allow = True
    subs = [jacobi_check(t1, jobs, allow, "jacobi(first)"),
            jacobi_check(t2, jobs, allow, "jacobi(second)")]
    r = jacobi_check(p, jobs, allow, "jacobi(pencil)")
    subs.append(r)
    ok = all(subs)
    witness = None
    if not ok:
        witness = next(s.witness for s in subs if not s)
    return Report("compatibility", ok, r.checked, witness, time.perf_counter() - start,
                  {"pencil_parameter": str(LAM)}, subs)


# -- Schouten factor ----------------------------------------------------------
def schouten_trilinear(t: BracketTable) -> Trilinear:
    """``[P, P]`` from components, as a trilinear form on coordinate triples."""
    P = Multivector.from_bivector_table(t)
    PP = schouten(P, P)
    return Trilinear(t.coords, {k: p for k, p in PP.terms.items() if p})


def jacobi_trilinear(t: BracketTable, scale=-2) -> Trilinear:
    """``scale * jacobiator`` on all distinct coordinate triples."""
    vals = {}
    for tr in itertools.combinations(sorted(t.coords.members), 3):
        r = _coord_jacobiator(t, *tr)
        if r:
            vals[tr] = r * scale
    return Trilinear(t.coords, vals)


def schouten_factor_check(t: BracketTable, samples=()) -> Report:
    """``(f1,f2,f3)_[P,P] = -2 * jacobiator`` with the left side from the Schouten bracket.

    Checked on every distinct coordinate triple and on each polynomial triple
    in ``samples``.
    """
    start = time.perf_counter()
    P = Multivector.from_bivector_table(t)
    PP = schouten(P, P)
    triples = [(var(a), var(b), var(c))
               for a, b, c in itertools.combinations(sorted(t.coords.members), 3)]
    triples += [tuple(_as_poly(f) for f in s) for s in samples]
    for f1, f2, f3 in triples:
        lhs = trilinear(PP, f1, f2, f3)
        rhs = jacobiator(t, f1, f2, f3) * -2
        if lhs != rhs:
            return Report("schouten_factor", False, len(triples),
                          {"triple": [str(f1), str(f2), str(f3)], "residual": str(lhs - rhs),
                           "schouten": str(lhs), "minus_two_jacobiator": str(rhs)},
                          time.perf_counter() - start)
    return Report("schouten_factor", True, len(triples), None, time.perf_counter() - start,
                  {"trivector_terms": len(PP.terms)})


# -- decomposition identities -------------------------------------------------
def J(t: BracketTable) -> Trilinear:
    """Trilinear form of ``[P, P]``: ``-2`` times the Jacobiator."""
    return jacobi_trilinear(t, -2)


def polarized(a: BracketTable, b: BracketTable) -> Trilinear:
    """Trilinear form of ``[A, B] = (J(A+B) - J(A) - J(B)) / 2``."""
    return (J(a.combine(b, 1)) - J(a) - J(b)).scale(Fraction(1, 2))


def wedge_trilinear(V: VectorFieldX, t: BracketTable) -> Trilinear:
    """``<df1^df2^df3, V ^ P> = V(f1){f2,f3} + V(f2){f3,f1} + V(f3){f1,f2}``."""
    vals = {}
    for f1, f2, f3 in itertools.combinations(sorted(t.coords.members), 3):
        r = V[f1] * t.get(f2, f3) + V[f2] * t.get(f3, f1) + V[f3] * t.get(f1, f2)
        if r:
            vals[(f1, f2, f3)] = r
    return Trilinear(t.coords, vals)


def _trilinear_report(name, diff: Trilinear, checked, start) -> Report:
    hit = diff.first_nonzero()
    return Report(name, hit is None, checked, None if hit is None else _witness(*hit),
                  time.perf_counter() - start)


@dataclass
class _Parts:
    pi: BracketTable
    pi1: BracketTable
    V: VectorFieldX
    lam: Fraction


def _decomposition_parts(c: Tensor4, b: Tensor4, lam) -> _Parts:
    res = fp4_residual(c, b)
    if not res.is_zero:
        raise ValueError(f"precondition violated: fp4 residual has {len(res.entries)} nonzero entries")
    pi = restrict_sl(quadratic_part(c))
    pi1 = restrict_sl(linear_bracket(c.N, with_s0=False))
    V = ham_vector_field(c, b, with_s0=False).restrict()
    return _Parts(pi, pi1, V, Fraction(lam))


def _defect_identity(p: _Parts) -> Report:
    start = time.perf_counter()
    lhs = J(p.pi)
    rhs = wedge_trilinear(p.V, p.pi1).scale(2 * p.lam)
    n = len(list(itertools.combinations(p.pi.coords.members, 3)))
    return _trilinear_report("[pi,pi] = 2 lam V^pi1", lhs - rhs, n, start)


def _flow_identity(p: _Parts) -> Report:
    start = time.perf_counter()
    pairs = list(itertools.combinations(sorted(p.pi.coords.members), 2))
    for u, v in pairs:
        r = (p.V.apply(p.pi.get(u, v)) - bracket_of(p.pi, p.V[u], var(v))
             - bracket_of(p.pi, var(u), p.V[v]))
        if r:
            return Report("[pi,V] = 0", False, len(pairs),
                          {"pair": [str(u), str(v)], "residual": str(r)}, time.perf_counter() - start)
    return Report("[pi,V] = 0", True, len(pairs), None, time.perf_counter() - start)


def _mixed_identity(p: _Parts) -> Report:
    start = time.perf_counter()
    n = len(list(itertools.combinations(p.pi.coords.members, 3)))
    return _trilinear_report("[pi,pi1] = 0", polarized(p.pi, p.pi1), n, start)


def decomposition_check(c: Tensor4, b: Tensor4, lam) -> Report:
    """The three identities that together make the quadratic bracket Poisson on sl(N):

    ``[pi, pi] = 2 lam V ^ pi1``, ``[pi, V] = 0`` and ``[pi, pi1] = 0``, where
    ``pi`` is the quadratic part, ``pi1`` the linear bracket and ``V`` the
    Hamiltonian vector field of ``H``, all restricted to the traceless subspace.
    """
    start = time.perf_counter()
    p = _decomposition_parts(c, b, lam)
    subs = [_defect_identity(p), _flow_identity(p), _mixed_identity(p)]
    ok = all(subs)
    witness = None if ok else {"identity": next(s.name for s in subs if not s),
                               **next(s.witness for s in subs if not s)}
    return Report("decomposition", ok, sum(s.checked for s in subs), witness,
                  time.perf_counter() - start, {"lambda": str(p.lam)}, subs)


def eqbasic2_followup_check(c: Tensor4, b: Tensor4, lam) -> Report:
    """For N >= 3, ``[pi, V] = 0`` should follow from the other two identities."""
    if c.N < 3:
        raise ValueError("precondition violated: N >= 3 required")
    start = time.perf_counter()
    p = _decomposition_parts(c, b, lam)
    first, third = _defect_identity(p), _mixed_identity(p)
    if not (first and third):
        raise ValueError("precondition violated: [pi,pi] = 2 lam V^pi1 and [pi,pi1] = 0 must both pass")
    second = _flow_identity(p)
    return Report("follow-up [pi,V] = 0", second.passed, second.checked, second.witness,
                  time.perf_counter() - start, {"lambda": str(p.lam)}, [first, third, second])


# -- Casimir and S0 flow ------------------------------------------------------
def trace_poly(N: int) -> Polynomial:
    return sum((var(Svar(k, k)) for k in range(1, N + 1)), ZERO)


def casimir_check(t: BracketTable) -> Report:
    """``{u, sum_k S[k,k]} = 0`` for every coordinate ``u``, before restriction."""
    if t.restricted:
        raise ValueError("the trace Casimir check needs the unrestricted table")
    start = time.perf_counter()
    tr = trace_poly(t.N)
    for u in t.coords.members:
        r = bracket_of(t, var(u), tr)
        if r:
            return Report("trace_casimir", False, len(t.coords),
                          {"coordinate": str(u), "residual": str(r)}, time.perf_counter() - start)
    return Report("trace_casimir", True, len(t.coords), None, time.perf_counter() - start)


def s0flow_check(t: BracketTable, c: Tensor4 = None, b: Tensor4 = None, lam=None,
                 sign: int = -1) -> Report:
    """``{S0, S[k,l]} = sign * lam * {H, S[k,l]}_1`` for every ``(k, l)``, through :func:`bracket_of`.

    ``sign=-1`` is the relation as usually stated.  With ``H`` from
    :func:`hamiltonian_H` the tables actually satisfy ``sign=+1``; both are
    exposed so the discrepancy stays visible.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if c is None or b is None:
        if t.source is None:
            raise ValueError("the S0-flow check needs the (c, b) source of the table")
        c, b = t.source
    lam = t.lam if lam is None else Fraction(lam)
    if lam is None:
        raise ValueError("the S0-flow check needs lambda")
    start = time.perf_counter()
    H = hamiltonian_H(c, b)
    lin = linear_bracket(t.N)
    if t.restricted:
        lin = restrict_sl(lin)
        H = restrict_poly(H, t.N)
    s = var(S0)
    targets = [u for u in t.coords.members if u != S0]
    details = {"lambda": str(lam), "relation": f"{{S0,S}} = {'-' if sign < 0 else '+'}lam*{{H,S}}_1"}
    for u in targets:
        r = bracket_of(t, s, var(u)) - bracket_of(lin, H, var(u)) * (sign * lam)
        if r:
            return Report("s0_flow", False, len(targets),
                          {"coordinate": str(u), "residual": str(r)}, time.perf_counter() - start, details)
    return Report("s0_flow", True, len(targets), None, time.perf_counter() - start, details)
