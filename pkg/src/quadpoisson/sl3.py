"""Catalog of explicit sl(3) solutions of the quadratic-linear (c, b) equation.

All data are hard-coded tables, one per entry.  Indices are written as
4-digit strings ``"ijkl"``; ``c`` tables list one member of each skew pair,
``b`` tables one member of each symmetric pair.  Cross-identities between the
tables (normal forms vs. the ten-parameter family, the r-matrix example vs.
the basis) are enforced by the test suite, not assumed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .poly import A, T, Polynomial, VarId, parse, var, y
from .tensor import Tensor4

N3 = 3

BASIS_C = {
    0: {"1122": 1, "3311": 1, "2233": 1, "1221": 1, "3113": 1, "2332": 1},
    1: {"2212": 2, "1233": 2, "1332": 2},
    2: {"1333": 2, "2213": 2, "2312": 2},
    3: {"2311": 2, "2113": 2, "3323": 2},
    4: {"2111": 2, "3321": 2, "3123": 2},
    5: {"1131": 2, "3221": 2, "3122": 2},
    6: {"1132": 2, "1231": 2, "3222": 2},
    7: {"2131": 6},
    8: {"3212": 6},
    9: {"1323": 6},
}

# Symmetric b solving the equation for c = sum_alpha y_alpha c_alpha.
B_OF_Y = {
    "1111": "2*y0^2 - 8*y3*y6",
    "1211": "-4*y0*y1 - 4*y2*y6 + 12*y3*y8",
    "1212": "8*y1^2 + 24*y2*y8",
    "1311": "-4*y0*y2 - 4*y1*y3 + 12*y6*y9",
    "1312": "4*y1*y2 - 36*y8*y9",
    "1313": "24*y1*y9 + 8*y2^2",
    "2111": "4*y0*y4 + 8*y3*y5",
    "2112": "-y0^2 - 4*y1*y4 + 4*y2*y5 + 4*y3*y6",
    "2113": "-4*y2*y4 - 12*y5*y9",
    "2121": "24*y3*y7 + 8*y4^2",
    "2211": "-y0^2 - 4*y1*y4 + 4*y2*y5 + 4*y3*y6",
    "2212": "4*y0*y1 + 8*y2*y6",
    "2213": "-4*y1*y3 - 12*y6*y9",
    "2221": "-4*y0*y4 + 12*y2*y7 - 4*y3*y5",
    "2222": "2*y0^2 - 8*y2*y5",
    "2311": "-4*y2*y4 - 12*y5*y9",
    "2312": "-4*y1*y3 - 12*y6*y9",
    "2313": "12*y0*y9 - 8*y2*y3",
    "2321": "4*y3*y4 - 36*y7*y9",
    "2322": "-4*y0*y3 - 4*y2*y4 + 12*y5*y9",
    "2323": "8*y3^2 + 24*y4*y9",
    "3111": "4*y0*y5 + 8*y4*y6",
    "3112": "-4*y1*y5 - 12*y4*y8",
    "3113": "-y0^2 + 4*y1*y4 - 4*y2*y5 + 4*y3*y6",
    "3121": "12*y0*y7 - 8*y4*y5",
    "3122": "-12*y1*y7 - 4*y4*y6",
    "3123": "-12*y2*y7 - 4*y3*y5",
    "3131": "8*y5^2 + 24*y6*y7",
    "3211": "-4*y1*y5 - 12*y4*y8",
    "3212": "12*y0*y8 - 8*y1*y6",
    "3213": "-4*y2*y6 - 12*y3*y8",
    "3221": "-12*y1*y7 - 4*y4*y6",
    "3222": "4*y0*y6 + 8*y1*y5",
    "3223": "-y0^2 + 4*y1*y4 + 4*y2*y5 - 4*y3*y6",
    "3231": "4*y5*y6 - 36*y7*y8",
    "3232": "24*y5*y8 + 8*y6^2",
    "3311": "-y0^2 + 4*y1*y4 - 4*y2*y5 + 4*y3*y6",
    "3312": "-4*y2*y6 - 12*y3*y8",
    "3313": "4*y0*y2 + 8*y1*y3",
    "3321": "-12*y2*y7 - 4*y3*y5",
    "3322": "-y0^2 + 4*y1*y4 + 4*y2*y5 - 4*y3*y6",
    "3323": "4*y0*y3 + 8*y2*y4",
    "3331": "-4*y0*y5 + 12*y1*y7 - 4*y4*y6",
    "3332": "-4*y0*y6 - 4*y1*y5 + 12*y4*y8",
    "3333": "2*y0^2 - 8*y1*y4",
}

_C0 = ("1122", "3311", "2233", "1221", "3113", "2332")

# Normal forms as printed, before errata.  Values are polynomial strings in t, a.
NORMAL_FORMS_PRINTED = {
    "a1": {
        "params": (), "y": {7: "1"},
        "c": {"2131": "6"}, "b": {},
    },
    "a2": {
        "params": (), "y": {5: "-1"},
        "c": {"1131": "-2", "3221": "-2", "3122": "-2"}, "b": {"3131": "8"},
    },
    "a3": {
        "params": (), "y": {5: "-1", 6: "-1"},
        "c": {"1131": "-2", "3221": "-2", "3122": "-2"},
        "b": {"3131": "8", "3232": "8", "3231": "4"},
    },
    "a4": {
        "params": ("t",), "y": {0: "t"},
        "c": {k: "t" for k in _C0},
        "b": {"1111": "2*t^2", "2112": "-t^2", "2211": "-t^2", "2222": "2*t^2", "3113": "-t^2",
              "3223": "-t^2", "3311": "-t^2", "3322": "-t^2", "3333": "2*t^2"},
    },
    "b1": {
        "params": (), "y": {5: "-1", 2: "1"},
        "c": {"1131": "-2", "3221": "-2", "3122": "-2", "1333": "2", "2213": "2", "2312": "2"},
        "b": {"1313": "8", "2112": "-4", "2211": "-4", "2222": "8", "3113": "4", "3131": "8",
              "3223": "-4", "3311": "4", "3322": "-4"},
    },
    "b2": {
        "params": ("t",), "y": {0: "-t", 7: "t"},
        "c": {**{k: "-t" for k in _C0}, "2131": "6*t"},
        "b": {"1111": "2*t^2", "2112": "-t^2", "2211": "-t^2", "2222": "2*t^2", "3113": "-t^2",
              "3121": "-12*t^2", "3223": "-t^2", "3311": "-t^2", "3322": "-t^2", "3333": "2*t^2"},
    },
    "c1": {
        "params": (), "y": {1: "-1", 7: "-1"},
        "c": {"2212": "-2", "1233": "-2", "1332": "-2", "2131": "-6"},
        "b": {"1212": "8", "3122": "-12", "3221": "-12", "3321": "12"},
    },
    "c2": {
        "params": ("t",), "y": {1: "-t", 7: "-t", 4: "t"},
        "c": {"2212": "-2*t", "1233": "-2*t", "1332": "-2*t", "2111": "2*t", "3321": "2*t",
              "3123": "2*t", "2131": "-6*t"},
        # b_{3311} = -4t^2 is printed twice; stored once.
        "b": {"1212": "8*t^2", "2112": "4*t^2", "2121": "8*t^2", "2211": "4*t^2", "3113": "-4*t^2",
              "3122": "-12*t^2", "3221": "-12*t^2", "3223": "-4*t^2", "3311": "-4*t^2",
              "3322": "-4*t^2", "3333": "8*t^2"},
    },
    "c3": {
        "params": ("t", "a"), "y": {7: "t", 8: "t", 9: "t", 0: "a"},
        "c": {**{k: "a" for k in _C0}, "2131": "6*t", "3212": "6*t", "1323": "6*t"},
        "b": {"1111": "2*a^2", "1312": "-36*t^2", "2112": "-a^2", "2211": "-a^2", "2222": "2*a^2",
              "2313": "12*t*a", "2321": "-36*t^2", "3113": "-a^2", "3121": "12*t*a",
              "3212": "12*t*a", "3223": "-a^2", "3231": "-36*t^2", "3311": "-a^2", "3322": "-a^2",
              "3333": "2*a^2"},
    },
}

# Corrections applied on top of the printed tables, each confirmed by the
# equation residual and by the ten-parameter family.
ERRATA = {
    "a3": {"c": {"1132": "-2", "1231": "-2", "3222": "-2"}, "b": {},
           "note": "printed c omits the y6 = -1 contribution (-c_6)"},
    "c1": {"c": {}, "b": {"3321": None, "3331": "12"},
           "note": "printed b_3321 = 12 is b_3331 = 12"},
    "c2": {"c": {}, "b": {"3331": "12*t^2"},
           "note": "printed b omits b_3331 = 12 t^2; b_3311 = -4 t^2 is printed twice"},
}

NORMAL_FORM_KEYS = tuple(NORMAL_FORMS_PRINTED)
BASIS_KEYS = tuple(f"c{k}" for k in range(10))
ALL_KEYS = NORMAL_FORM_KEYS + BASIS_KEYS + ("rmatrix-example",)


def _idx(s: str):
    return tuple(int(ch) for ch in s)


def _pairs(table: Mapping, subs: Mapping = None) -> dict:
    out = {}
    for k, v in table.items():
        if v is None:
            continue
        p = v if isinstance(v, Polynomial) else parse(str(v))
        if subs:
            p = p.specialize(subs)
        out[_idx(k)] = p
    return out


def basis_c(alpha: int) -> Tensor4:
    """The weight-basis tensor ``c_alpha`` of the 10-dimensional component."""
    if alpha not in BASIS_C:
        raise ValueError(f"basis index must be in 0..9, got {alpha!r}")
    return Tensor4.from_pairs(N3, _pairs(BASIS_C[alpha]), "skew")


def c_of_y(ys) -> Tensor4:
    """``sum_alpha y_alpha c_alpha`` for 10 scalars or polynomials."""
    ys = list(ys)
    if len(ys) != 10:
        raise ValueError("need exactly 10 coefficients")
    total = Tensor4(N3)
    for alpha, ya in enumerate(ys):
        if ya is not None and ya != 0:
            total = total + basis_c(alpha).scale(ya)
    return total


def b_of_y(ys) -> Tensor4:
    """The symmetric ``b`` paired with ``c_of_y(ys)``."""
    ys = list(ys)
    if len(ys) != 10:
        raise ValueError("need exactly 10 coefficients")
    subs = {y(k): (0 if v is None else v) for k, v in enumerate(ys)}
    return Tensor4.from_pairs(N3, _pairs(B_OF_Y, subs), "sym")


def symbolic_y() -> list:
    return [var(y(k)) for k in range(10)]


def _param(value, name: str, sym: VarId):
    if value is None:
        raise ValueError(f"missing parameter {name!r}")
    if isinstance(value, str) and value.strip() == "symbolic":
        return var(sym)
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, str):
        return parse(value)
    return Polynomial.constant(value)


def _bindings(key: str, t=None, a=None) -> dict:
    row = NORMAL_FORMS_PRINTED[key]
    binds = {}
    if "t" in row["params"]:
        binds[T] = _param(t, "t", T)
    if "a" in row["params"]:
        binds[A] = _param(a, "a", A)
    return binds


def y_assignment(key: str, t=None, a=None) -> list:
    """The family coordinates ``y_0..y_9`` that produce normal form ``key``."""
    if key not in NORMAL_FORMS_PRINTED:
        raise ValueError(f"unknown normal form {key!r}")
    binds = _bindings(key, t, a)
    ys = [Polynomial.constant(0)] * 10
    for k, v in NORMAL_FORMS_PRINTED[key]["y"].items():
        ys[k] = parse(v).specialize(binds)
    return ys


def normal_form(key: str, t=None, a=None, *, printed: bool = False):
    """``(c, b)`` for one of ``a1 a2 a3 a4 b1 b2 c1 c2 c3``.

    ``t`` is required for a4, b2, c2, c3 and ``a`` for c3; each may be a
    rational, a polynomial, or ``"symbolic"``.  With ``printed=True`` the
    tables are returned as printed, without :data:`ERRATA`.
    """
    if key not in NORMAL_FORMS_PRINTED:
        raise ValueError(f"unknown normal form {key!r}")
    row = NORMAL_FORMS_PRINTED[key]
    binds = _bindings(key, t, a)
    c_tab = dict(row["c"])
    b_tab = dict(row["b"])
    if not printed and key in ERRATA:
        c_tab.update(ERRATA[key]["c"])
        b_tab.update(ERRATA[key]["b"])
    c = Tensor4.from_pairs(N3, _pairs(c_tab, binds), "skew")
    b = Tensor4.from_pairs(N3, _pairs(b_tab, binds), "sym")
    return c, b


def _expand(N: int, terms, sign: int) -> Tensor4:
    """Expand ``coeff * E_ij (op) E_kl`` with ``op`` the wedge (sign -1) or
    the symmetric product (sign +1); ``k E_ij . E_ij`` contributes ``2k``."""
    e: dict = {}
    for coeff, (i, j), (k, l) in terms:
        for key, val in (((i, j, k, l), coeff), ((k, l, i, j), sign * coeff)):
            e[key] = e.get(key, 0) + val
    return Tensor4(N, e)


def rmatrix_example_parts(printed: bool = False):
    """Constant and linear Laurent coefficients ``(c, b)`` of the sl(3) r-matrix example.

    The printed linear part carries ``2 E_21 . E_21``, i.e. ``b[2,1,2,1] = 4``;
    the pair solves the equation only with ``E_21 . E_21`` (``b[2,1,2,1] = 2``,
    the family value at ``y4 = y8 = -1/2``), which is the default.
    ``printed=True`` returns the printed coefficient.
    """
    c = _expand(N3, [
        (1, (1, 1), (2, 1)),
        (1, (2, 1), (3, 3)),
        (1, (2, 3), (3, 1)),
        (-3, (3, 2), (1, 2)),
    ], -1)
    b = _expand(N3, [
        (3, (3, 3), (3, 2)),
        (-3, (1, 2), (3, 1)),
        (-3, (1, 1), (3, 2)),
        (2 if printed else 1, (2, 1), (2, 1)),
    ], +1)
    return c, b


@dataclass
class CatalogEntry:
    key: str
    parameters: tuple
    c: Tensor4
    b: Optional[Tensor4] = None
    provenance: str = ""
    notes: list = field(default_factory=list)

    @property
    def is_pair(self) -> bool:
        return self.b is not None


def resolve_key(key: str, want_pair: bool = False) -> tuple:
    """Split a catalog key into ``(kind, label)`` with kind ``basis``, ``case`` or ``rmatrix``.

    The labels ``c1 c2 c3`` name both basis tensors and normal forms.  A
    ``basis:`` or ``case:`` prefix selects one explicitly; a bare label means
    the normal form when a ``(c, b)`` pair is wanted and the basis tensor
    otherwise.
    """
    kind, _, label = key.rpartition(":")
    if kind:
        ok = {"basis": BASIS_KEYS, "case": NORMAL_FORM_KEYS}.get(kind, ())
        if label not in ok:
            raise ValueError(f"unknown catalog key {key!r}")
        return kind, label
    if key == "rmatrix-example":
        return "rmatrix", key
    in_basis, in_case = key in BASIS_KEYS, key in NORMAL_FORM_KEYS
    if in_case and (want_pair or not in_basis):
        return "case", key
    if in_basis:
        return "basis", key
    raise ValueError(f"unknown catalog key {key!r}")


def entry(key: str, t=None, a=None, want_pair: bool = False) -> CatalogEntry:
    """Look up a catalog key (see :func:`resolve_key`)."""
    kind, key = resolve_key(key, want_pair)
    if kind == "basis":
        alpha = int(key[1:])
        return CatalogEntry(key, (), basis_c(alpha),
                            provenance=f"sl(3) weight basis tensor c_{alpha}")
    if kind == "case":
        row = NORMAL_FORMS_PRINTED[key]
        c, b = normal_form(key, t, a)
        ys = ", ".join(f"y{k}={v}" for k, v in sorted(row["y"].items()))
        notes = [ERRATA[key]["note"]] if key in ERRATA else []
        return CatalogEntry(key, row["params"], c, b,
                            provenance=f"sl(3) normal form ({key}), family point {ys}", notes=notes)
    if kind == "rmatrix":
        c, b = rmatrix_example_parts()
        return CatalogEntry(key, (), c, b,
                            provenance="constant and linear Laurent parts of the sl(3) r-matrix example",
                            notes=["linear part uses E_21 . E_21 where 2 E_21 . E_21 is printed"])
    raise AssertionError(kind)  # pragma: no cover


