import itertools
from fractions import Fraction

import pytest

from quadpoisson import sl3
from quadpoisson.brackets import bracket_of, linear_bracket, quadratic_bracket, quadratic_part, restrict_sl
from quadpoisson.multivector import Multivector, schouten, trilinear
from quadpoisson.poly import ONE, parse, var
from quadpoisson.poly import S as Svar

a, b, c = Svar(1, 1), Svar(1, 2), Svar(2, 1)


def test_pairing_normalisation():
    T = Multivector(3, {(a, b, c): ONE})
    assert trilinear(T, var(a), var(b), var(c)) == 1
    assert trilinear(T, var(b), var(a), var(c)) == -1
    assert trilinear(T, var(a), var(a), var(c)) == 0


def test_contraction_gives_hamiltonian_field():
    L = linear_bracket(2, with_s0=False)
    P = Multivector.from_bivector_table(L)
    f = parse("S[1,2]*S[2,1]")
    X = P.contract(f)
    for u in L.coords.members:
        assert X[(u,)] == bracket_of(L, var(u), f)
    g = parse("S[1,1]^2")
    assert -X.contract(g)[()] == bracket_of(L, f, g)


def test_wedge_pairing_with_vector_field():
    # <df1^df2^df3, V^P> = V(f1){f2,f3} + cyclic, with V^P built by hand
    L = linear_bracket(2, with_s0=False)
    V = Multivector(1, {(a,): parse("S[1,2]"), (c,): parse("2")})
    P = Multivector.from_bivector_table(L)
    terms = {}
    for (k1,), p1 in V.terms.items():
        for k2, p2 in P.terms.items():
            if k1 in k2:
                continue
            key = tuple(sorted((k1,) + k2))
            order = (k1,) + k2
            sign = 1
            for i, j in itertools.combinations(range(3), 2):
                if order[j] < order[i]:
                    sign = -sign
            terms[key] = terms.get(key, parse("0")) + p1 * p2 * sign
    VP = Multivector(3, terms)
    f1, f2, f3 = var(a), var(b), var(c)
    vf = {u: V[(u,)] for u in L.coords.members}
    V_of = lambda f: sum((vf[u] * f.partial(u) for u in vf), parse("0"))
    expected = (V_of(f1) * bracket_of(L, f2, f3) + V_of(f2) * bracket_of(L, f3, f1)
                + V_of(f3) * bracket_of(L, f1, f2))
    assert trilinear(VP, f1, f2, f3) == expected


def test_linear_bracket_has_vanishing_schouten_square():
    P = Multivector.from_bivector_table(linear_bracket(3))
    assert not schouten(P, P).terms


def test_schouten_square_vanishes_exactly_when_jacobi_does():
    c_, b_ = sl3.normal_form("a4", t=1)
    good = Multivector.from_bivector_table(restrict_sl(quadratic_bracket(c_, b_, Fraction(1, 3))))
    bad = Multivector.from_bivector_table(restrict_sl(quadratic_bracket(c_, b_, 1)))
    assert not schouten(good, good).terms
    assert schouten(bad, bad).terms


def test_graded_antisymmetry_on_bivectors():
    pi = Multivector.from_bivector_table(quadratic_part(sl3.basis_c(7)))
    lin = Multivector.from_bivector_table(linear_bracket(3, with_s0=False))
    ab, ba = schouten(pi, lin), schouten(lin, pi)
    assert ab.terms == ba.terms  # (-1)^{(p-1)(q-1)} = -1 for p = q = 2 gives [A,B] = [B,A]


def test_trilinear_rejects_wrong_degree():
    with pytest.raises(ValueError):
        trilinear(Multivector(2, {}), ONE, ONE, ONE)
