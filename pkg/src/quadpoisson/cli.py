"""Command-line front end: ``quadpoisson <verb> ...``.

Exit codes: 0 when every requested check passes, 1 when one fails, 2 on
malformed input (unreadable files, bad JSON, bad parameters).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import sl3
from .brackets import (
    linear_bracket,
    load_table,
    quadratic_bracket,
    quadratic_part,
    restrict_sl,
    save_table,
)
from .poly import as_rational
from .report import Report
from .tensor import (
    FormatError,
    fp4_report,
    gauge_report,
    gauge_transform,
    load_matrix,
    load_tensor,
    save_tensor,
    tensor_to_json,
    validate_b,
    validate_c,
)
from . import verify as V


class InputError(Exception):
    """User input that cannot be acted on; maps to exit code 2."""


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"not an exact rational: {text!r}") from exc


def _bindings(items) -> dict:
    out = {"t": "symbolic", "a": "symbolic"}
    for item in items or ():
        name, sep, value = item.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or name not in out:
            raise InputError(f"bad parameter binding {item!r}; expected t=VALUE or a=VALUE")
        out[name] = "symbolic" if value == "symbolic" else _rational(value)
    return out


def _emit(args, command: str, reports, extra=None) -> int:
    ok = all(reports)
    if args.format == "json":
        doc = {"command": command, "status": "pass" if ok else "fail",
               "reports": [r.to_dict() for r in reports]}
        if extra:
            doc.update(extra)
        print(json.dumps(doc, indent=1, sort_keys=True))
    else:
        for k, v in (extra or {}).items():
            print(f"{k}: {v}")
        for r in reports:
            print(r)
    return 0 if ok else 1


# -- verbs ----------------------------------------------------------------------
def cmd_catalog(args) -> int:
    if args.action == "list":
        rows = []
        for key in sl3.NORMAL_FORM_KEYS:
            row = sl3.NORMAL_FORMS_PRINTED[key]
            rows.append({"key": key, "kind": "case", "parameters": list(row["params"]),
                         "errata": key in sl3.ERRATA})
        for key in sl3.BASIS_KEYS:
            rows.append({"key": key, "kind": "basis", "parameters": [], "errata": False})
        rows.append({"key": "rmatrix-example", "kind": "rmatrix", "parameters": [], "errata": True})
        if args.format == "json":
            print(json.dumps({"command": "catalog list", "entries": rows}, indent=1, sort_keys=True))
        else:
            for r in rows:
                params = ",".join(r["parameters"]) or "-"
                print(f"{r['key']:<16} {r['kind']:<8} params={params}{'  (corrected)' if r['errata'] else ''}")
        return 0
    if not args.key:
        raise InputError("catalog export needs a key")
    b = _bindings(args.param)
    try:
        e = sl3.entry(args.key, b["t"], b["a"])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.out_prefix:
        save_tensor(e.c, f"{args.out_prefix}.c.json")
        if e.b is not None:
            save_tensor(e.b, f"{args.out_prefix}.b.json")
    else:
        doc = {"key": e.key, "provenance": e.provenance, "notes": e.notes, "c": tensor_to_json(e.c)}
        if e.b is not None:
            doc["b"] = tensor_to_json(e.b)
        print(json.dumps(doc, indent=1, sort_keys=True))
    return 0


def cmd_check_fp4(args) -> int:
    c, b = load_tensor(args.c), load_tensor(args.b)
    if c.N != b.N:
        raise InputError(f"dimension mismatch: c has N={c.N}, b has N={b.N}")
    reports = [validate_c(c), validate_b(b), fp4_report(c, b)]
    n = reports[-1].details.get("nonzero_entries", 0)
    return _emit(args, "check-fp4", reports, {"summary": f"{n} nonzero residual entries"})


def _source(args):
    if args.case:
        b = _bindings(args.param)
        try:
            e = sl3.entry(args.case, b["t"], b["a"], want_pair=True)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if e.b is None:
            raise InputError(f"catalog key {args.case!r} is not a (c, b) pair")
        return e.c, e.b
    if not (args.c and args.b):
        raise InputError("build needs --case KEY or both --c FILE and --b FILE")
    c, b = load_tensor(args.c), load_tensor(args.b)
    if c.N != b.N:
        raise InputError(f"dimension mismatch: c has N={c.N}, b has N={b.N}")
    return c, b


def cmd_build(args) -> int:
    c, b = _source(args)
    lam = _rational(args.lam)
    if lam == 0:
        raise InputError("--lambda must be nonzero")
    checks = [validate_c(c), validate_b(b)]
    if not all(checks):
        return _emit(args, "build", checks)
    t = quadratic_bracket(c, b, lam)
    if args.restrict:
        t = restrict_sl(t)
    save_table(t, args.out)
    return _emit(args, "build", checks, {"table": args.out, "entries": len(t), "lambda": str(lam)})


def _precondition_failure(name: str, exc: Exception) -> Report:
    return Report(name, False, 0, {"precondition": str(exc)})


def cmd_verify(args) -> int:
    t = load_table(args.table)
    wanted = [k for k in ("casimir", "jacobi", "compat", "decomp", "s0flow") if getattr(args, k)]
    explicit = bool(wanted) and not args.all
    if not explicit:
        wanted = ["casimir", "jacobi", "compat", "decomp", "s0flow"]
    reports = []
    restricted = t
    if not t.restricted:
        # Restriction to the traceless subspace is only sound once the trace is a Casimir.
        cas = V.casimir_check(t)
        reports.append(cas)
        if not cas and any(k in wanted for k in ("jacobi", "compat")):
            return _emit(args, "verify", reports, {"stopped": "trace Casimir failed; restriction unsound"})
        restricted = restrict_sl(t)
    elif "casimir" in wanted and explicit:
        raise InputError("the trace Casimir check needs an unrestricted table")
    if "jacobi" in wanted:
        reports.append(V.jacobi_check(restricted, jobs=args.jobs))
    if "compat" in wanted:
        lin = linear_bracket(t.N, with_s0=t.coords.with_s0)
        lin = restrict_sl(lin)
        reports.append(V.compatibility_check(lin, restricted, jobs=args.jobs))
    if "decomp" in wanted or "s0flow" in wanted:
        if t.source is None or t.lam is None:
            raise InputError("this check needs a table built with its (c, b) source and lambda")
        c, b = t.source
    if "decomp" in wanted:
        try:
            reports.append(V.decomposition_check(c, b, t.lam))
        except ValueError as exc:
            reports.append(_precondition_failure("decomposition", exc))
        if c.N >= 3:
            try:
                reports.append(V.eqbasic2_followup_check(c, b, t.lam))
            except ValueError as exc:
                if reports[-1]:
                    reports.append(_precondition_failure("follow-up [pi,V] = 0", exc))
    if "s0flow" in wanted:
        reports.append(V.s0flow_check(t, c, b, sign=args.s0_sign))
    return _emit(args, "verify", reports)


def cmd_gauge(args) -> int:
    c, b, X = load_tensor(args.c), load_tensor(args.b), load_matrix(args.x)
    try:
        c2, b2 = gauge_transform(c, b, X)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    save_tensor(c2, f"{args.out_prefix}.c.json")
    save_tensor(b2, f"{args.out_prefix}.b.json")
    r = gauge_report(c2, b2)
    return _emit(args, "gauge", [r], {"outputs": [f"{args.out_prefix}.c.json", f"{args.out_prefix}.b.json"]})


def selftest_reports() -> list:
    """The catalog identities in symbolic parameters plus the Schouten factor."""
    from .tensor import Tensor4, fp4_residual

    reports = []
    ys = sl3.symbolic_y()
    c = Tensor4(3, {})
    for alpha, yv in enumerate(ys):
        c = c + sl3.basis_c(alpha).scale(yv)
    reports.append(fp4_report(c, sl3.b_of_y(ys), "fp4(family, symbolic y)"))
    for key in sl3.NORMAL_FORM_KEYS:
        cn, bn = sl3.normal_form(key, "symbolic", "symbolic")
        reports.append(fp4_report(cn, bn, f"fp4({key})"))
        fy = sl3.y_assignment(key, "symbolic", "symbolic")
        cf, bf = sl3.c_of_y(fy), sl3.b_of_y(fy)
        same = cf == cn and bf == bn
        reports.append(Report(f"family match({key})", same, 2,
                              None if same else {"case": key, "detail": "tables differ from family point"}))
    cr, br = sl3.rmatrix_example_parts()
    reports.append(fp4_report(cr, br, "fp4(rmatrix-example)"))
    ca1, _ = sl3.normal_form("a1")
    pi = quadratic_part(ca1)
    lin = linear_bracket(3, with_s0=False)
    for name, t in (("pi1", lin), ("pi(a1)", pi), ("pi(a1)+pi1", pi.combine(lin, 1))):
        r = V.schouten_factor_check(t)
        r.name = f"schouten_factor({name})"
        reports.append(r)
    return reports


def cmd_selftest(args) -> int:
    return _emit(args, "selftest", selftest_reports())


# -- parser ---------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    p = argparse.ArgumentParser(prog="quadpoisson", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("catalog", parents=[common], help="list or export sl(3) catalog data")
    s.add_argument("action", choices=("list", "export"))
    s.add_argument("key", nargs="?", help="a1..c3, c0..c9, rmatrix-example; prefix case: or basis: to disambiguate")
    s.add_argument("--param", action="append", metavar="NAME=VALUE", help="t=2/3, a=symbolic, ...")
    s.add_argument("--out-prefix")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("check-fp4", parents=[common], help="residual of the tensor equation for (c, b)")
    s.add_argument("--c", required=True)
    s.add_argument("--b", required=True)
    s.set_defaults(func=cmd_check_fp4)

    s = sub.add_parser("build", parents=[common], help="build the quadratic bracket table")
    s.add_argument("--case")
    s.add_argument("--c")
    s.add_argument("--b")
    s.add_argument("--param", action="append", metavar="NAME=VALUE")
    s.add_argument("--lambda", dest="lam", required=True, help="S0 row scale, e.g. 1 or 1/3")
    s.add_argument("--restrict", action="store_true", help="write the table restricted to sl(N)")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("verify", parents=[common], help="certify identities of a bracket table")
    s.add_argument("--table", required=True)
    for flag in ("all", "jacobi", "compat", "decomp", "casimir", "s0flow"):
        s.add_argument(f"--{flag}", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--s0-sign", type=int, choices=(-1, 1), default=-1,
                   help="sign in {S0,S} = sign*lambda*{H,S}_1 (default -1)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("gauge", parents=[common], help="gauge-transform (c, b) by a traceless X")
    s.add_argument("--c", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--out-prefix", required=True)
    s.set_defaults(func=cmd_gauge)

    s = sub.add_parser("selftest", parents=[common], help="catalog identities and the Schouten factor")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
