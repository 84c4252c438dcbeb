import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import ad_first_brute, fp4_brute
from quadpoisson import sl3
from quadpoisson.poly import parse
from quadpoisson.tensor import (
    FormatError,
    MatrixX,
    Tensor4,
    ad_first,
    fp4_report,
    fp4_residual,
    gauge_report,
    gauge_transform,
    load_tensor,
    matrix_from_json,
    matrix_to_json,
    omega,
    project_pN,
    save_tensor,
    tensor_from_json,
    tensor_to_json,
    validate_b,
    validate_c,
)

N3 = 3
ZERO3 = Tensor4(N3)


def unit_sym(i, j, k, l, coeff=1):
    """A symmetric traceless unit perturbation (off-diagonal index pairs)."""
    return Tensor4.from_pairs(N3, {(i, j, k, l): coeff}, "sym")


@pytest.fixture(scope="module")
def perturbed_a1():
    c, b = sl3.normal_form("a1")
    return c, b + unit_sym(1, 2, 2, 3)


def test_zero_pair_has_empty_residual():
    assert fp4_residual(ZERO3, ZERO3).is_zero


def test_perturbed_pair_matches_brute_force(perturbed_a1):
    c, b = perturbed_a1
    res = fp4_residual(c, b)
    assert not res.is_zero
    assert res.entries == fp4_brute(c, b)


@pytest.mark.parametrize("key", ["a4", "b2", "c3"])
def test_normal_forms_agree_with_brute_force(key):
    c, b = sl3.normal_form(key, t=Fraction(2, 3), a=-2)
    assert fp4_brute(c, b) == {} == fp4_residual(c, b).entries


def test_residual_is_invariant_under_cyclic_rotation(perturbed_a1):
    res = fp4_residual(*perturbed_a1)
    assert res.rotated().entries == res.entries
    assert res.rotated().rotated().entries == res.entries


def test_residual_is_affine_in_b(perturbed_a1):
    c, b1 = perturbed_a1
    b2 = unit_sym(1, 3, 3, 2, 5)
    lhs = fp4_residual(c, b1 + b2)
    rhs = fp4_residual(c, b1) + fp4_residual(c, b2) - fp4_residual(c, ZERO3)
    assert lhs.entries == rhs.entries


def test_fp4_report_witness(perturbed_a1):
    r = fp4_report(*perturbed_a1)
    assert not r.passed
    assert r.witness["index"] == list(fp4_residual(*perturbed_a1).first()[0])


@pytest.mark.parametrize("N", [2, 3, 4])
def test_omega_properties(N):
    om = omega(N)
    assert om.swap_pairs() == om
    assert om.trace1() == {} and om.trace2() == {}
    assert om[(1, 2, 2, 1)] == 1
    assert om[(1, 1, 1, 1)] == Fraction(N - 1, N)
    assert om[(1, 1, 2, 2)] == Fraction(-1, N)


def test_projector():
    I3 = MatrixX.identity(3)
    assert project_pN(I3) == MatrixX(3, {})
    E11 = MatrixX.unit(3, 1, 1)
    p = project_pN(E11)
    assert p == MatrixX(3, {(1, 1): Fraction(2, 3), (2, 2): Fraction(-1, 3), (3, 3): Fraction(-1, 3)})
    assert project_pN(p) == p


@given(st.dictionaries(st.tuples(st.integers(1, 3), st.integers(1, 3)),
                       st.fractions(max_denominator=5), max_size=6))
@settings(max_examples=40, deadline=None)
def test_projector_is_idempotent_and_traceless(entries):
    p = project_pN(MatrixX(3, entries))
    assert p.trace() == 0 and project_pN(p) == p


def test_validate_detects_violations():
    bad = Tensor4(3, {(1, 2, 2, 1): 1, (2, 1, 1, 2): 1})
    r = validate_c(bad)
    assert not r and r.witness["violation"] == "skewness"
    tr = Tensor4(3, {(1, 1, 1, 2): 1, (1, 2, 1, 1): 1})
    r = validate_b(tr)
    assert not r and r.witness["violation"] == "trace1"
    assert validate_c(sl3.basis_c(0)) and validate_b(omega(3))


def test_from_pairs_conflicts():
    with pytest.raises(FormatError):
        Tensor4.from_pairs(3, {(1, 2, 2, 1): 1, (2, 1, 1, 2): 1}, "skew")
    with pytest.raises(FormatError):
        Tensor4.from_pairs(3, {(1, 2, 1, 2): 1}, "skew")
    with pytest.raises(FormatError):
        Tensor4.from_pairs(3, {}, "weird")
    t = Tensor4.from_pairs(3, {(1, 2, 2, 1): 2, (2, 1, 1, 2): -2}, "skew")
    assert t[(2, 1, 1, 2)] == -2


def test_index_range_checked():
    with pytest.raises(ValueError):
        Tensor4(3, {(1, 2, 3, 4): 1})
    with pytest.raises(ValueError):
        Tensor4(1)


# -- gauge --------------------------------------------------------------------
X12 = MatrixX(3, {(1, 2): 1, (2, 1): -1})


def test_gauge_identity():
    c, b = sl3.normal_form("a4", t=1)
    assert gauge_transform(c, b, MatrixX(3, {})) == (c, b)


def test_gauge_of_zero_pair_against_basis_expansion():
    c2, b2 = gauge_transform(ZERO3, ZERO3, X12)
    assert c2 == ad_first_brute(X12, omega(3))
    assert b2 == ad_first_brute(X12, ad_first_brute(X12, omega(3))).scale(Fraction(1, 2))
    assert validate_c(c2)


@pytest.mark.parametrize("key", ["a1", "a4", "c3"])
def test_gauge_round_trip(key):
    c, b = sl3.normal_form(key, t=1, a=2)
    X = MatrixX(3, {(1, 3): 2, (2, 2): 1, (3, 3): -1, (3, 1): Fraction(1, 2)})
    c1, b1 = gauge_transform(c, b, X)
    c2, b2 = gauge_transform(c1, b1, -X)
    assert c2 == c
    expected_b = (b1 + ad_first_brute(-X, ad_first_brute(-X, omega(3))).scale(Fraction(1, 2))
                  + ad_first_brute(-X, c1))
    assert b2 == expected_b
    assert b2 == b


def test_gauge_rejects_traced_generator():
    with pytest.raises(ValueError):
        gauge_transform(ZERO3, ZERO3, MatrixX.unit(3, 1, 1))


def test_ad_first_matches_brute_force():
    c = sl3.basis_c(3)
    X = MatrixX(3, {(1, 2): 3, (3, 1): -1})
    assert ad_first(X, c) == ad_first_brute(X, c)


def test_gauge_report_is_informational():
    c2, b2 = gauge_transform(ZERO3, ZERO3, X12)
    r = gauge_report(c2, b2)
    assert r.passed
    assert set(r.details) == {"validate_c", "validate_b", "fp4"}


# -- JSON ---------------------------------------------------------------------
@pytest.mark.parametrize("t", [
    sl3.basis_c(1),
    sl3.b_of_y(sl3.symbolic_y()),
    Tensor4(3, {(1, 2, 3, 1): parse("1/2*t"), (2, 2, 1, 1): 3}),
    Tensor4(2),
], ids=["skew", "sym-symbolic", "none", "empty"])
def test_tensor_json_round_trip(t, tmp_path):
    path = tmp_path / "t.json"
    save_tensor(t, path)
    assert load_tensor(path) == t
    assert tensor_from_json(json.loads(json.dumps(tensor_to_json(t)))) == t


@pytest.mark.parametrize("doc", [
    {"entries": []},
    {"N": 3, "symmetry": "skew", "entries": [{"i": 1, "j": 2, "k": 2, "l": 5, "coeff": "1"}]},
    {"N": 3, "entries": [{"i": 1, "j": 2, "k": 2, "l": 1, "coeff": 0.5}]},
    {"N": 3, "entries": [{"i": 1, "j": 2, "k": 2, "coeff": "1"}]},
    {"N": 3, "entries": [{"i": 1, "j": 2, "k": 2, "l": 1, "coeff": "1+"}]},
])
def test_malformed_tensor_json(doc):
    with pytest.raises(FormatError):
        tensor_from_json(doc)


def test_matrix_json_round_trip():
    X = MatrixX(3, {(1, 2): Fraction(-2, 3), (3, 3): 4})
    assert matrix_from_json(matrix_to_json(X)) == X
