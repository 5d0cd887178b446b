"""Command line front end.

Subcommands: decompose, verify-theorem, scalar-waring, count, tables.
Exit codes: 0 success/PASS, 1 parse or usage error, 2 provably not
decomposable (or FAIL for checks), 3 unsupported (no strategy in
budget).  Matrix input is read from a file or stdin, either as n lines
of whitespace-separated element literals or as the JSON object form.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import config
from .errors import NotDecomposable, Unsupported, UnknownTheorem, WaringmatError
from .gf import parse_field, scalar_profile
from .matgf import Mat, min_poly, is_idempotent
from .census import (
    KNOWN_CHECKS,
    check_theorem,
    conjugacy_classes,
    count_invertible_cyclic,
    m22_expected,
    m23_expected,
    m32_expected,
    power_sumsets,
)
from .waring import Constraint, decompose


def _read_matrix(field, path: str) -> Mat:
    if path in ("-", ""):
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        obj = json.loads(stripped)
        return Mat.from_json_obj(obj, field=field)
    return Mat.from_text(field, text)


def cmd_decompose(args) -> int:
    field = parse_field(args.field)
    config.set_seed(args.seed)
    try:
        A = _read_matrix(field, args.infile)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        dec = decompose(A, args.k, Constraint.coerce(args.constraint))
    except NotDecomposable as exc:
        if args.out == "json":
            print(json.dumps({"decomposable": False, "citation": exc.citation, "reason": str(exc)}))
        else:
            print(f"not decomposable: {exc}")
            if exc.citation:
                print(f"citation: {exc.citation}")
        return 2
    except Unsupported as exc:
        if args.out == "json":
            print(json.dumps({"decomposable": None, "reason": str(exc)}))
        else:
            print(f"unsupported: {exc}")
        return 3
    if args.out == "json":
        print(json.dumps(dec.to_json_obj()))
    else:
        print(f"strategy: {dec.strategy}")
        print("B:")
        print(dec.B.to_text())
        print("C:")
        print(dec.C.to_text())
        print(f"certificate: {json.dumps(dec.certificate)}")
    return 0


def cmd_verify_theorem(args) -> int:
    params = {}
    for name in ("k", "n", "q"):
        val = getattr(args, name, None)
        if val is not None:
            params[name] = val
    try:
        check = check_theorem(args.id, jobs=args.jobs, **params)
    except UnknownTheorem as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"known checks: {', '.join(KNOWN_CHECKS)}", file=sys.stderr)
        return 1
    if args.out == "json":
        print(json.dumps(check.to_json_obj()))
    else:
        print(f"{check.theorem} {check.params}: {check.status}")
        if check.details:
            print(f"details: {json.dumps(check.details)}")
        if check.mismatches:
            print(f"mismatches ({len(check.mismatches)} shown):")
            for m in check.mismatches[:8]:
                print(f"  {m}")
    return 0 if check.status == "PASS" else 2


def cmd_scalar_waring(args) -> int:
    field = parse_field(args.field)
    prof = scalar_profile(field, args.k, mmax=args.mmax)
    obj = {
        "field": field.spec_string,
        "k": prof.k,
        "d": prof.d,
        "d_m": list(prof.d_m),
        "residues": sorted(field.format_code(c) for c in prof.residues),
        "gamma": prof.gamma,
        "ell": prof.ell,
        "k1": prof.k1,
        "k2": prof.k2,
    }
    if args.out == "json":
        print(json.dumps(obj))
    else:
        print(f"field {obj['field']}  k = {obj['k']}")
        print(f"d = gcd(k, q-1) = {obj['d']}   d_m = {obj['d_m']}")
        print(f"residues = {{{', '.join(obj['residues'])}}}")
        print(f"gamma = {obj['gamma']}   span GF(p^ell) with ell = {obj['ell']}")
        print(f"k = k1 * k2 = {obj['k1']} * {obj['k2']}")
    return 0


def cmd_count(args) -> int:
    field = parse_field(args.field)
    n = args.n
    if args.what == "cyclic":
        cc = count_invertible_cyclic(field, n)
        obj = {
            "count": cc.count,
            "group_order": cc.group_order,
            "2c_gt_qnn": cc.doubling_exceeds_space,
            "np00_lower_bound_holds": cc.lower_bound_holds,
        }
        if args.out == "json":
            print(json.dumps(obj))
        else:
            print(f"invertible cyclic matrices: {cc.count} of |GL| = {cc.group_order}")
            print(f"2c > q^(n^2): {cc.doubling_exceeds_space}; lower bound holds: {cc.lower_bound_holds}")
    elif args.what == "idempotent":
        total = 0
        for code in range(field.q ** (n * n)):
            A = Mat.from_code(field, n, code)
            if is_idempotent(A):
                total += 1
        if args.out == "json":
            print(json.dumps({"count": total}))
        else:
            print(f"idempotent matrices: {total}")
    else:  # classes
        rows = conjugacy_classes(field, n)
        if args.out == "json":
            print(json.dumps([
                {"size": r.size, "representative": Mat.from_code(field, n, r.representative).to_json_obj(), "tag": r.tag}
                for r in rows
            ]))
        else:
            print(f"{len(rows)} conjugacy classes:")
            for r in rows:
                rep = Mat.from_code(field, n, r.representative)
                flat = "; ".join(" ".join(field.format_code(e) for e in row) for row in rep.rows)
                print(f"  size {r.size:4d}  {r.tag:12s}  rep [{flat}]")
    return 0


_CASES = {"2,2": (2, 2, m22_expected, 24), "3,2": (2, 3, m32_expected, 84), "2,3": (3, 2, m23_expected, 24)}


def cmd_tables(args) -> int:
    if args.case not in _CASES:
        print("error: --case must be one of 2,2 / 3,2 / 2,3 (n,q)", file=sys.stderr)
        return 1
    p, n, expected_fn, _default = _CASES[args.case]
    field = parse_field(str(p))
    all_match = True
    rows = []
    for k in range(1, args.kmax + 1):
        rep = power_sumsets(field, n, k, jobs=args.jobs, with_classes=False)
        expected = expected_fn(field, k)
        match = set(rep.P) == expected
        all_match = all_match and match
        rows.append({"k": k, "P_size": len(rep.P), "predicted_size": len(expected), "match": match})
    if args.out == "json":
        print(json.dumps(rows))
    else:
        for r in rows:
            mark = "ok" if r["match"] else "MISMATCH"
            print(f"k = {r['k']:3d}: |P| = {r['P_size']:4d}  predicted {r['predicted_size']:4d}  {mark}")
    return 0 if all_match else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="waringmat",
        description="sums of two k-th powers of matrices over finite fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pd = sub.add_parser("decompose", help="decompose A = B^k + C^k")
    pd.add_argument("--field", required=True, help='field spec "p^l", e.g. 3^2')
    pd.add_argument("--k", type=int, required=True)
    pd.add_argument("--constraint", default="NONE", choices=[c.value for c in Constraint])
    pd.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    pd.add_argument("--in", dest="infile", default="-", help="matrix file or - for stdin")
    pd.add_argument("--out", default="text", choices=("text", "json"))
    pd.set_defaults(func=cmd_decompose)

    pv = sub.add_parser("verify-theorem", help="replay a registered classification check")
    pv.add_argument("--id", required=True)
    pv.add_argument("--k", type=int)
    pv.add_argument("--n", type=int)
    pv.add_argument("--q", type=int)
    pv.add_argument("--jobs", type=int, default=0)
    pv.add_argument("--out", default="text", choices=("text", "json"))
    pv.set_defaults(func=cmd_verify_theorem)

    ps = sub.add_parser("scalar-waring", help="power residues and sumset closure of a field")
    ps.add_argument("--field", required=True)
    ps.add_argument("--k", type=int, required=True)
    ps.add_argument("--mmax", type=int, default=3)
    ps.add_argument("--out", default="text", choices=("text", "json"))
    ps.set_defaults(func=cmd_scalar_waring)

    pc = sub.add_parser("count", help="count cyclic/idempotent matrices or list classes")
    pc.add_argument("--field", required=True)
    pc.add_argument("--n", type=int, required=True)
    pc.add_argument("--what", required=True, choices=("cyclic", "idempotent", "classes"))
    pc.add_argument("--out", default="text", choices=("text", "json"))
    pc.set_defaults(func=cmd_count)

    pt = sub.add_parser("tables", help="regenerate a small-case P table and diff the prediction")
    pt.add_argument("--case", required=True, help="2,2 or 3,2 or 2,3 (n,q)")
    pt.add_argument("--kmax", type=int, default=24)
    pt.add_argument("--jobs", type=int, default=0)
    pt.add_argument("--out", default="text", choices=("text", "json"))
    pt.set_defaults(func=cmd_tables)

    args = parser.parse_args(argv)
    if getattr(args, "jobs", None) == 0:
        args.jobs = os.cpu_count() or 1
    try:
        return args.func(args)
    except WaringmatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
