"""Command-line front end.

Exit codes: 0 verified/true, 1 falsified, 2 indeterminate (boundary or
precision), 10+ usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from . import cover, cusp, elliptic, monodromy, qseries, reproductions, sphere, suites

EXIT_OK, EXIT_FALSE, EXIT_INDETERMINATE = 0, 1, 2
EXIT_USAGE, EXIT_BAD_RATIONAL, EXIT_BAD_INPUT = 10, 11, 12

PRECISION = {"standard": 30, "extended": 60}


class UsageError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed rational {text!r}", EXIT_BAD_RATIONAL)


def rational_list(text: str) -> list:
    return [rational(x) for x in text.split(",") if x.strip()]


def int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"malformed integer list {text!r}")


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    if isinstance(obj, qseries.QSeries):
        return obj.to_record()
    return str(obj)


# ----------------------------------------------------------------- commands
def cmd_eisenstein(args, dps):
    if args.order < 0:
        raise UsageError("order must be nonnegative")
    try:
        f = qseries.eisenstein(args.k, args.order)
    except ValueError as exc:
        raise UsageError(str(exc))
    return EXIT_OK, {"k": args.k, "series": f.to_record()}


def _load_potential(text: str, order: int) -> qseries.QSeries:
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"potential is not valid JSON: {exc}", EXIT_BAD_INPUT)
    if "q3" in data:
        r, s, t = (rational(str(x)) for x in data["q3"])
        return cusp.q3_over_pi2(r, s, t, order + 1)
    if "coeffs" in data:
        return qseries.QSeries.from_record(data)
    raise UsageError("potential must be a series record or {\"q3\": [r, s, t]}", EXIT_BAD_INPUT)


def cmd_apparent_cusp(args, dps):
    Q = _load_potential(args.potential, args.order)
    try:
        ode = cusp.make_cusp_ode(Q)
    except ValueError as exc:
        return EXIT_INDETERMINATE, {"error": str(exc)}
    report = {"kappa_inf": ode.kappa_inf}
    try:
        ob = cusp.cusp_obstruction(ode)
    except cusp.NotApplicable:
        report.update({"obstruction": None, "apparent": True, "note": "exponent difference not integral"})
        return EXIT_OK, report
    except ValueError as exc:
        return EXIT_INDETERMINATE, {**report, "error": str(exc)}
    report.update({"obstruction": ob, "apparent": ob == 0})
    return (EXIT_OK if ob == 0 else EXIT_FALSE), report


def cmd_apparent_poly(args, dps):
    kappa = rational(args.kappa)
    try:
        rep = elliptic.root_report(args.family, kappa, dps)
    except ArithmeticError as exc:
        return EXIT_INDETERMINATE, {"error": str(exc)}
    ok = rep["degree"] == rep["expected_degree"] and rep["max_distance"] < 1e-6
    return (EXIT_OK if ok else EXIT_FALSE), rep


def cmd_sphere_apparent(args, dps):
    alphas = rational_list(args.alphas)
    points = rational_list(args.points) if args.points else []
    orders = int_list(args.orders) if args.orders else []
    try:
        ode = sphere.SphereODE(tuple(alphas), tuple(points), tuple(orders))
    except ValueError as exc:
        raise UsageError(str(exc), EXIT_BAD_INPUT)
    report = {"fuchs_relations": [str(e) for e in sphere.fuchs_relations(ode)]}
    report["polynomials"] = [str(sphere.sphere_apparentness_polynomial(ode, j)) for j in range(1, ode.m + 1)]
    report["bezout_bound"] = 1
    for n in orders:
        report["bezout_bound"] *= n + 1
    if ode.m == 1:
        sol = sphere.solve_apparent_system(ode)
        report["eliminated"] = str(sol["polynomial"].as_expr())
        report["solution_count"] = sol["degree"]
        report["distinct_roots"] = sol["distinct_roots"]
        report["solutions"] = [{k: str(v) for k, v in s.items()} for s in sol["rational_solutions"]]
        report["real_root_intervals"] = [[str(lo), str(hi), m] for (lo, hi), m in sol["real_root_intervals"]]
        return (EXIT_OK if sol["within_bound"] else EXIT_FALSE), report
    return EXIT_OK, report


def cmd_metric_exists(args, dps):
    if args.modular:
        if not (args.kappas and args.rinf):
            raise UsageError("--modular needs --kappas and --rinf")
        ki, kr = rational_list(args.kappas)
        try:
            rep = monodromy.modular_threshold(ki, kr, rational(args.rinf))
        except ValueError as exc:
            raise UsageError(str(exc), EXIT_BAD_INPUT)
    else:
        if not args.alphas or args.parity is None:
            raise UsageError("--alphas and --parity are required")
        alphas = rational_list(args.alphas)
        if len(alphas) != 3:
            raise UsageError("three alphas are required")
        rep = monodromy.metric_exists(alphas, 0 if args.parity == "even" else 1)
    code = {monodromy.EXISTS: EXIT_OK, monodromy.NOT_EXISTS: EXIT_FALSE}.get(rep["verdict"], EXIT_INDETERMINATE)
    return code, rep


def cmd_cover_check(args, dps):
    params = int_list(args.params)
    builders = {
        "triangle": (cover.triangle_cover_data, 3),
        "overlap": (cover.overlap_cover_data, 2),
        "three-cycle": (cover.three_cycle_cover_data, 3),
    }
    # numeric labels are kept as aliases for the documented interface
    builders.update({"1.4": builders["triangle"], "1.5": builders["overlap"], "1.7": builders["three-cycle"]})
    build, arity = builders[args.theorem]
    if len(params) != arity:
        raise UsageError(f"construction {args.theorem} takes {arity} parameters")
    try:
        rep = build(*params)[3]
    except ValueError as exc:
        return EXIT_FALSE, {"valid": False, "reason": str(exc)}
    ok = rep["type_ok"] and rep["transitive"] and rep["genus"] == 0
    return (EXIT_OK if ok else EXIT_FALSE), rep


def cmd_weight_neg2(args, dps):
    if args.n <= 0 or args.n % 2 == 0:
        raise UsageError("n must be a positive odd integer")
    try:
        w = reproductions.compute_F(args.n, args.order)
    except ArithmeticError as exc:
        return EXIT_INDETERMINATE, {"error": str(exc), "flag": "truncation-insufficient"}
    return EXIT_OK, {
        "n": w.n,
        "c": w.c,
        "P": [c for c in w.P],
        "P_text": reproductions.format_poly(w.P),
        "table_scale": w.table_scale,
        "table_c": w.table_c,
        "table_P_text": reproductions.format_poly(w.table_P),
        "verified_orders": w.verified_orders,
        "T_antisymmetric": reproductions.verify_T_antisymmetry(w.F),
    }


def cmd_verify(args, dps):
    if args.suite == "schwarzian":
        rows = reproductions.verify_schwarzian_tables(max(args.order, 30))
        return (EXIT_OK if all(r["ok"] for r in rows) else EXIT_FALSE), {"rows": rows}
    if args.suite == "example1":
        rep = reproductions.verify_example1(max(args.order, 30))
    elif args.suite == "example2":
        rep = reproductions.verify_example2(max(args.order, 40), dps)
    else:
        rep = {"ok": qseries.ramanujan_check(max(args.order, 1))}
    return (EXIT_OK if rep["ok"] else EXIT_FALSE), rep


def cmd_suite(args, dps):
    if not args.profile:
        raise UsageError("empty profile")
    try:
        rows = suites.suite_all(args.profile)
    except KeyError as exc:
        raise UsageError(str(exc))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["suite", "passed", "seconds"])
            for r in rows:
                w.writerow([r["suite"], r["passed"], r["seconds"]])
    return (EXIT_OK if all(r["passed"] for r in rows) else EXIT_FALSE), {"profile": args.profile, "suites": rows}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="modular-ode", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument("--precision", choices=sorted(PRECISION), default=None)
    common.add_argument("--json", dest="json_path", default=None, help="also write the report here")
    common.add_argument("--csv", default=None, help="CSV summary path (suite only)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("eisenstein", help="q-expansion of E2, E4 or E6")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--order", type=int, default=10)
    s.set_defaults(func=cmd_eisenstein)

    s = sub.add_parser("apparent-cusp", help="cusp obstruction for Q/pi^2")
    s.add_argument("--potential", required=True, help="JSON series record, {\"q3\": [r,s,t]}, or a path")
    s.add_argument("--order", type=int, default=30)
    s.set_defaults(func=cmd_apparent_cusp)

    s = sub.add_parser("apparent-poly", help="obstruction polynomial at rho (q1) or i (q2)")
    s.add_argument("--family", choices=["q1", "q2"], required=True)
    s.add_argument("--kappa", required=True)
    s.set_defaults(func=cmd_apparent_poly)

    s = sub.add_parser("sphere-apparent", help="apparentness on the sphere")
    s.add_argument("--alphas", required=True)
    s.add_argument("--points", default="")
    s.add_argument("--orders", default="")
    s.set_defaults(func=cmd_sphere_apparent)

    s = sub.add_parser("metric-exists", help="closed-form existence verdicts")
    s.add_argument("--alphas")
    s.add_argument("--parity", choices=["even", "odd"])
    s.add_argument("--modular", action="store_true")
    s.add_argument("--kappas")
    s.add_argument("--rinf")
    s.set_defaults(func=cmd_metric_exists)

    s = sub.add_parser("cover-check", help="permutation certificates")
    s.add_argument(
        "--theorem",
        choices=["triangle", "overlap", "three-cycle", "1.4", "1.5", "1.7"],
        required=True,
        help="construction: triangle (n_i, n_rho, n_inf), overlap (l0, ell), three-cycle (kappa_i, ell, sign)",
    )
    s.add_argument("--params", required=True)
    s.set_defaults(func=cmd_cover_check)

    s = sub.add_parser("weight-neg2", help="the weight -2 form F for odd n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--order", type=int, default=60)
    s.set_defaults(func=cmd_weight_neg2)

    s = sub.add_parser("verify", help="table and example checks")
    s.add_argument("--suite", choices=["schwarzian", "example1", "example2", "ramanujan"], required=True)
    s.add_argument("--order", type=int, default=40)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("suite", help="run every acceptance suite")
    s.add_argument("--profile", default="default")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a command is required")
        level = args.precision or os.environ.get("MODULAR_ODE_PRECISION", "standard")
        if level not in PRECISION:
            raise UsageError(f"unknown precision level {level!r}")
        code, report = args.func(args, PRECISION[level])
    except UsageError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return exc.code
    text = json.dumps(_jsonable({"command": args.command, "exit": code, "report": report}), indent=2, sort_keys=True)
    print(text)
    if args.json_path:
        with open(args.json_path, "w") as fh:
            fh.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
