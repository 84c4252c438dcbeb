"""Acceptance suite: every criterion records one pass/fail line in the terminal summary."""
from fractions import Fraction

import pytest

from oracles import jacobiator_expanded
from quadpoisson import sl3
from quadpoisson.brackets import linear_bracket, quadratic_bracket, quadratic_part, restrict_sl
from quadpoisson.poly import parse
from quadpoisson.poly import S as Svar
from quadpoisson.tensor import Tensor4, fp4_residual, validate_b
from quadpoisson.verify import (
    casimir_check,
    compatibility_check,
    decomposition_check,
    eqbasic2_followup_check,
    jacobi_check,
    s0flow_check,
    schouten_factor_check,
)

SYM = {"t": "symbolic", "a": "symbolic"}
CANDIDATES = (Fraction(1), Fraction(1, 3))


def pair(key):
    return sl3.entry(key, **SYM, want_pair=True)


def restricted(key, lam):
    e = pair(key)
    return restrict_sl(quadratic_bracket(e.c, e.b, lam))


@pytest.fixture(scope="module")
def certification():
    """``{lam: {case: passed}}`` for the λ candidates, on the three required cases."""
    return {lam: {k: jacobi_check(restricted(k, lam)).passed for k in ("a1", "a4", "c3")}
            for lam in CANDIDATES}


@pytest.fixture(scope="module")
def lam_star(certification):
    good = [lam for lam, row in certification.items() if all(row.values())]
    assert len(good) == 1, certification
    return good[0]


def test_criterion_1_master_identity(criterion):
    ys = sl3.symbolic_y()
    res = fp4_residual(sl3.c_of_y(ys), sl3.b_of_y(ys))
    ok = criterion(1, res.is_zero, f"fp4 residual of the ten-parameter family: {len(res)} nonzero entries")
    assert ok


def test_criterion_2_normal_forms(criterion):
    bad = []
    for key in sl3.NORMAL_FORM_KEYS:
        c, b = sl3.normal_form(key, **SYM)
        ys = sl3.y_assignment(key, **SYM)
        if not fp4_residual(c, b).is_zero or c != sl3.c_of_y(ys) or b != sl3.b_of_y(ys):
            bad.append(key)
    ok = criterion(2, not bad, f"{len(sl3.NORMAL_FORM_KEYS) - len(bad)}/9 normal forms solve fp4 and match the family"
                   f" (corrected a3, c1, c2)")
    assert ok


def test_criterion_3_lambda_certification(criterion, certification):
    row = "; ".join(f"lambda={lam}: " + ",".join(f"{k}={'ok' if v else 'fail'}" for k, v in r.items())
                    for lam, r in certification.items())
    good = [lam for lam, r in certification.items() if all(r.values())]
    ok = criterion(3, len(good) == 1, f"certified lambda*={good[0] if len(good) == 1 else good} ({row})")
    assert ok


def test_criterion_4_poisson_property(criterion, lam_star):
    keys = list(sl3.NORMAL_FORM_KEYS) + ["rmatrix-example"]
    bad = [k for k in keys if not jacobi_check(restricted(k, lam_star))]
    ok = criterion(4, not bad, f"jacobi at lambda*={lam_star}: {len(keys) - len(bad)}/{len(keys)} pass{' ' + str(bad) if bad else ''}")
    assert ok


def test_criterion_5_compatibility(criterion, lam_star):
    lin = restrict_sl(linear_bracket(3))
    keys = ("a1", "a4", "b1", "c3")
    bad = [k for k in keys if not compatibility_check(lin, restricted(k, lam_star))]
    ok = criterion(5, not bad, f"pencil pi1 + L*pi2 Poisson for {len(keys) - len(bad)}/{len(keys)} cases{' ' + str(bad) if bad else ''}")
    assert ok


def test_criterion_6_trace_casimir(criterion, lam_star):
    keys = list(sl3.NORMAL_FORM_KEYS) + ["rmatrix-example"]
    bad = []
    for k in keys:
        e = pair(k)
        if not casimir_check(quadratic_bracket(e.c, e.b, lam_star)):
            bad.append(k)
    ok = criterion(6, not bad, f"trace is a Casimir before restriction for {len(keys) - len(bad)}/{len(keys)} cases")
    assert ok


def test_criterion_7_s0_flow(criterion, lam_star):
    keys = list(sl3.NORMAL_FORM_KEYS) + ["rmatrix-example"]
    stated, observed = [], []
    for k in keys:
        e = pair(k)
        t = quadratic_bracket(e.c, e.b, lam_star)
        if not s0flow_check(t):
            stated.append(k)
        if not s0flow_check(t, sign=1):
            observed.append(k)
    ok = criterion(7, not stated,
                   f"{{S0,S}} + lambda*{{H,S}}_1 = 0 fails for {len(stated)}/{len(keys)} cases {stated};"
                   f" {{S0,S}} - lambda*{{H,S}}_1 = 0 fails for {len(observed)}")
    assert ok


def test_criterion_8_schouten_factor(criterion):
    c, _ = sl3.normal_form("a1")
    pi = quadratic_part(c)
    lin = linear_bracket(3, with_s0=False)
    bad = [name for name, t in (("pi1", lin), ("pi(a1)", pi), ("pi(a1)+pi1", pi.combine(lin, 1)))
           if not schouten_factor_check(t)]
    ok = criterion(8, not bad, f"trilinear [P,P] = -2 Jacobiator on pi1, pi(a1), their sum{' ' + str(bad) if bad else ''}")
    assert ok


def test_criterion_9_decomposition(criterion, lam_star):
    lines = []
    ok = True
    for k in ("a1", "a4"):
        c, b = sl3.normal_form(k, **SYM)
        r = decomposition_check(c, b, lam_star)
        f = eqbasic2_followup_check(c, b, lam_star)
        ok = ok and r.passed and f.passed and all(s.passed for s in r.subreports)
        lines.append(f"{k}: {sum(s.passed for s in r.subreports)}/3 identities, follow-up {f.status}")
    assert criterion(9, ok, "; ".join(lines))


def test_criterion_10a_constant_part(criterion):
    c, _ = sl3.rmatrix_example_parts()
    claimed = (sl3.basis_c(8) - sl3.basis_c(4)).scale(Fraction(1, 2))
    alt = (sl3.basis_c(8) + sl3.basis_c(4)).scale(Fraction(-1, 2))
    ok = criterion("10a", c == claimed,
                   f"constant part == (-c4 + c8)/2: {c == claimed}; == (-c4 - c8)/2: {c == alt}")
    assert ok


def test_criterion_10b_example_fp4(criterion):
    res = fp4_residual(*sl3.rmatrix_example_parts())
    printed = fp4_residual(*sl3.rmatrix_example_parts(printed=True))
    ok = criterion("10b", res.is_zero,
                   f"fp4 residual {len(res)} entries with b_2121=2; {len(printed)} with the printed b_2121=4")
    assert ok


def test_criterion_11_negative_controls(criterion, lam_star):
    found = {}
    # (i) one sign flipped in c0, skew partner kept consistent
    c0 = sl3.basis_c(0)
    flipped = Tensor4(3, {**c0.entries, (1, 1, 2, 2): -c0.get(1, 1, 2, 2), (2, 2, 1, 1): -c0.get(2, 2, 1, 1)})
    b0 = sl3.b_of_y([1] + [0] * 9)
    found["c0 sign"] = fp4_residual(c0, b0).is_zero and not fp4_residual(flipped, b0).is_zero
    # (ii) a1's b perturbed by one unit symmetric traceless entry
    c, b = sl3.normal_form("a1")
    b2 = b + Tensor4(3, {(1, 2, 1, 2): 1})
    assert validate_b(b2)
    found["a1 b"] = not fp4_residual(c, b2).is_zero
    # (iii) one bracket entry corrupted
    t = restricted("a1", lam_star)
    u, v = Svar(1, 2), Svar(2, 3)
    bad = t.with_entry(u, v, t.get(u, v) + parse("S[1,2]^2"))
    r = jacobi_check(bad)
    names = {str(x): x for x in t.coords.members}
    found["table entry"] = (not r.passed and r.witness["residual"]
                            == str(jacobiator_expanded(bad, *(names[s] for s in r.witness["triple"]))))
    ok = criterion(11, all(found.values()), ", ".join(f"{k}: {'detected' if v else 'missed'}" for k, v in found.items()))
    assert ok
