"""Slow, obviously-correct reference computations used only by the tests."""
import itertools
from fractions import Fraction

from quadpoisson.brackets import BracketTable
from quadpoisson.poly import ZERO, var
from quadpoisson.poly import S as Svar
from quadpoisson.tensor import Tensor4


def d(a, b):
    return 1 if a == b else 0


def fp4_brute(c: Tensor4, b: Tensor4) -> dict:
    """Both sides of the defining equation by six nested loops, returned as LHS - RHS."""
    N = c.N
    R = range(1, N + 1)
    cg, bg = c.get, b.get
    inv = Fraction(1, N)
    out = {}
    for i, j, k, l, m, n in itertools.product(R, repeat=6):
        lhs = ZERO
        for r in R:
            lhs += cg(k, l, i, r) * cg(r, j, m, n) + cg(i, j, m, r) * cg(r, n, k, l) + cg(m, n, k, r) * cg(r, l, i, j)
        for r, s in itertools.product(R, R):
            lhs -= inv * (d(i, j) * cg(k, l, r, s) * cg(s, r, m, n) + d(m, n) * cg(i, j, r, s) * cg(s, r, k, l)
                          + d(k, l) * cg(m, n, r, s) * cg(s, r, i, j))
        rhs = (d(k, n) * bg(m, l, i, j) + d(m, j) * bg(i, n, k, l) + d(i, l) * bg(k, j, m, n)
               - inv * (d(m, n) * bg(i, j, k, l) + d(i, j) * bg(k, l, m, n) + d(k, l) * bg(m, n, i, j))
               - inv * (d(m, n) * bg(k, l, i, j) + d(i, j) * bg(m, n, k, l) + d(k, l) * bg(i, j, m, n)))
        v = lhs - rhs
        if v:
            out[(i, j, k, l, m, n)] = v
    return out


def Sv(i, j):
    return var(Svar(i, j))


def qpb_entry(c: Tensor4, i, j, k, l):
    """c-part of the quadratic bracket by direct summation over all indices."""
    R = range(1, c.N + 1)
    acc = ZERO
    for m, n in itertools.product(R, R):
        acc += c.get(k, j, n, m) * Sv(m, n) * Sv(i, l) - c.get(i, l, n, m) * Sv(m, n) * Sv(k, j)
    for s, t in itertools.product(R, R):
        acc += c.get(i, s, k, t) * Sv(s, j) * Sv(t, l) - c.get(s, j, t, l) * Sv(i, s) * Sv(k, t)
    return acc


def H_brute(c: Tensor4, b: Tensor4):
    R = range(1, c.N + 1)
    h = ZERO
    for k, l, m, n in itertools.product(R, repeat=4):
        h += b.get(k, l, n, m) * Sv(m, n) * Sv(l, k)
        for m2, n2 in itertools.product(R, R):
            h -= Fraction(1, 2) * c.get(k, l, n, m) * c.get(m, n, n2, m2) * Sv(l, k) * Sv(m2, n2)
    return h


def V_brute(c: Tensor4, b: Tensor4) -> dict:
    R = range(1, c.N + 1)
    out = {}
    for k, l in itertools.product(R, R):
        v = ZERO
        for s, m, n in itertools.product(R, repeat=3):
            v += 2 * (b.get(k, s, n, m) * Sv(m, n) * Sv(s, l) - b.get(s, l, n, m) * Sv(m, n) * Sv(k, s))
            for n2, m2 in itertools.product(R, R):
                cc = c.get(m, n, n2, m2)
                if cc:
                    v += cc * Sv(m2, n2) * (c.get(s, l, n, m) * Sv(k, s) - c.get(k, s, n, m) * Sv(s, l))
        out[Svar(k, l)] = v
    return out


def jacobiator_expanded(t: BracketTable, u, v, w):
    """Jacobiator of three coordinates, expanded with explicit partial derivatives."""
    total = ZERO
    for a, b_, c_ in ((u, v, w), (w, u, v), (v, w, u)):
        inner = t.get(a, b_)
        for x in t.coords.members:
            total += inner.partial(x) * t.get(x, c_)
    return total


def ad_matrix(X, i, j, N):
    """Entries of X E_ij - E_ij X as a dict {(p, q): value}."""
    out = {}
    for p in range(1, N + 1):
        v = X[(p, i)]
        if v:
            out[(p, j)] = out.get((p, j), 0) + v
    for q in range(1, N + 1):
        v = X[(j, q)]
        if v:
            out[(i, q)] = out.get((i, q), 0) - v
    return out


def ad_first_brute(X, t: Tensor4) -> Tensor4:
    e = {}
    for (i, j, k, l), v in t.entries.items():
        for (p, q), x in ad_matrix(X, i, j, t.N).items():
            e[(p, q, k, l)] = e.get((p, q, k, l), ZERO) + v * x
    return Tensor4(t.N, e)
