"""Command-line front end.

Commands cover the graph invariants (alpha, chi), the conic bounds (theta,
theta-prime, theta-r, ms-value), cone membership and product-closure checks,
the doubling counterexample construction, and a summary report of the
package's reference quantities.

Exit codes: 0 success, 2 bad input, 3 resource cap exceeded, 4 solver
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from .bounds import lovasz_theta, motzkin_straus_value, schrijver_theta, theta_r
from .errors import (
    GraphExprError,
    NoCounterexampleError,
    ResourceLimitError,
    SolverFailureError,
)
from .graphs import (
    DEFAULT_VERTEX_CAP,
    chromatic_number,
    complement,
    independence_number,
    make_complete,
    make_cycle,
    make_edgeless,
    parse_graph_expr,
    strong_power,
    strong_product,
)
from .productprop import (
    CONES,
    check_product_pair,
    cone_membership,
    construct_counterexample,
)
from .symmat import SymMatrix, lambda2, read_matrix_text

VERTEX_CAP_ENV = "SHANNON_CONE_VERTEX_CAP"


def _vertex_cap():
    raw = os.environ.get(VERTEX_CAP_ENV)
    if raw is None:
        return DEFAULT_VERTEX_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{VERTEX_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{VERTEX_CAP_ENV} must be positive, got {cap}")
    return cap


def _parse_matrix_spec(spec):
    """lambda2 | off-diag-ones:N | file:PATH."""
    if spec == "lambda2":
        return lambda2()
    if spec.startswith("off-diag-ones:"):
        n = int(spec.split(":", 1)[1])
        if n < 1:
            raise ValueError(f"matrix size must be positive, got {n}")
        return SymMatrix(np.ones((n, n)) - np.eye(n))
    if spec.startswith("file:"):
        with open(spec[5:]) as fh:
            return read_matrix_text(fh.read())
    raise ValueError(
        f"unrecognized matrix spec {spec!r}; "
        "use lambda2, off-diag-ones:N, or file:PATH"
    )


def _print_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    sys.stdout.write(buf.getvalue())


def _fmt(x):
    if x is None:
        return "-"
    if isinstance(x, float):
        return format(x, ".6g")
    return str(x)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_alpha(args):
    g = parse_graph_expr(args.graph, max_vertices=_vertex_cap())
    value = independence_number(g)
    _emit_scalar(args, "alpha", value)
    return 0


def _cmd_chi(args):
    g = parse_graph_expr(args.graph, max_vertices=_vertex_cap())
    value = chromatic_number(g)
    _emit_scalar(args, "chi", value)
    return 0


def _cmd_ms_value(args):
    g = parse_graph_expr(args.graph, max_vertices=_vertex_cap())
    value = motzkin_straus_value(g)
    _emit_scalar(args, "ms_value", value)
    return 0


def _emit_scalar(args, name, value):
    if args.output == "json":
        print(json.dumps({"graph": args.graph, "quantity": name, "value": value}))
    elif args.output == "csv":
        _print_csv(["graph", "quantity", "value"], [[args.graph, name, _fmt(value)]])
    else:
        print(f"{name}({args.graph}) = {_fmt(value)}")


def _cmd_bound(args, fn, **kwargs):
    g = parse_graph_expr(args.graph, max_vertices=_vertex_cap())
    res = fn(g, graph_id=args.graph, tol=args.tol, dump_path=args.dump_sdp, **kwargs)
    if args.output == "json":
        print(res.to_json())
    elif args.output == "csv":
        _print_csv(
            ["graph", "bound", "value", "status", "lambda"],
            [[args.graph, res.bound_name, _fmt(res.value), res.solver_status, _fmt(res.lam)]],
        )
    else:
        print(f"{res.bound_name}({args.graph}) = {_fmt(res.value)}")
        print(f"status = {res.solver_status}")
    return 0


def _cmd_cone_member(args):
    mats = args.seed_matrix or []
    if len(mats) != 1:
        raise ValueError("cone-member needs exactly one --seed-matrix")
    q = _parse_matrix_spec(mats[0])
    res = cone_membership(q, args.cone, feas_tol=args.tol)
    if args.output == "json":
        print(json.dumps({
            "cone": args.cone,
            "member": res.member,
            "detail": res.detail,
            "certificate": res.certificate,
        }))
    elif args.output == "csv":
        _print_csv(["cone", "member", "detail"], [[args.cone, res.member, res.detail]])
    else:
        verdict = "member" if res.member else "not a member"
        print(f"{mats[0]} is {verdict} of cone {args.cone}")
        if res.detail:
            print(f"detail = {res.detail}")
    return 0


def _cmd_product_check(args):
    mats = args.seed_matrix or []
    if len(mats) != 2:
        raise ValueError("product-check needs exactly two --seed-matrix arguments")
    q = _parse_matrix_spec(mats[0])
    r = _parse_matrix_spec(mats[1])
    res = check_product_pair(q, r, args.cone, feas_tol=args.tol)
    if args.output == "json":
        print(json.dumps(res))
    elif args.output == "csv":
        header = list(res)
        _print_csv(header, [[_fmt(res[k]) for k in header]])
    else:
        print(f"cone = {res['cone']}")
        print(f"left factor member = {res['left_member']}")
        print(f"right factor member = {res['right_member']}")
        print(f"product ({res['product_dim']}x{res['product_dim']}) member = "
              f"{res['product_member']}")
        print(f"verdict = {res['verdict']}")
    return 0


def _cmd_counterexample(args):
    mats = args.seed_matrix or []
    if len(mats) > 1:
        raise ValueError("counterexample takes at most one --seed-matrix")
    seed = _parse_matrix_spec(mats[0]) if mats else _parse_matrix_spec("off-diag-ones:2")
    try:
        rep = construct_counterexample(seed, args.cone, feas_tol=args.tol)
    except NoCounterexampleError as exc:
        print(f"no counterexample from this seed: {exc}")
        return 0
    if args.output == "json":
        print(rep.to_json())
    elif args.output == "csv":
        _print_csv(
            ["cone", "k1", "k2", "C_dim", "u_value", "violating_pair"],
            [[rep.cone, _fmt(rep.k1), _fmt(rep.k2), rep.C.n, _fmt(rep.u_value),
              " ; ".join(rep.violating_pair)]],
        )
    else:
        print(f"cone = {rep.cone}")
        print(f"k1 = {_fmt(rep.k1)} (threshold {_fmt(rep.k1_threshold)})")
        print(f"w^T B w = {_fmt(rep.wBw)}")
        print(f"k2 = {_fmt(rep.k2)} (threshold {_fmt(rep.k2_threshold)})")
        print(f"C is {rep.C.n}x{rep.C.n}; u^T C u = {_fmt(rep.u_value)} "
              f"with u >= 0, so C is not copositive")
        print(f"violating pair: {rep.violating_pair[0]} , {rep.violating_pair[1]}")
        for name, val in rep.memberships.items():
            print(f"membership[{name}] = {val}")
    return 0


# ---------------------------------------------------------------------------
# reference-quantities report

_SQRT5 = math.sqrt(5.0)
_THETA_C7 = 7.0 * math.cos(math.pi / 7.0) / (1.0 + math.cos(math.pi / 7.0))


def _report_rows(tol):
    rows = []

    def run(quantity, expected, fn, note=""):
        try:
            value, ok = fn()
            rows.append({
                "quantity": quantity,
                "value": value,
                "expected": expected,
                "status": "PASS" if ok else "FAIL",
                "note": note,
            })
        except Exception as exc:  # a broken row must not kill the table
            rows.append({
                "quantity": quantity,
                "value": None,
                "expected": expected,
                "status": "ERROR",
                "note": f"{type(exc).__name__}: {exc}",
            })

    c5 = make_cycle(5)
    c7 = make_cycle(7)

    def theta_c5():
        v = lovasz_theta(c5, tol=tol).value
        return v, abs(v - _SQRT5) <= 1e-6
    run("theta(cycle:5)", f"sqrt(5) = {_SQRT5:.6f}", theta_c5)

    def theta_c7():
        v = lovasz_theta(c7, tol=tol).value
        return v, abs(v - _THETA_C7) <= 1e-6
    run("theta(cycle:7)", f"{_THETA_C7:.6f}", theta_c7)

    def alpha_c5_sq():
        v = independence_number(strong_power(c5, 2))
        return v, v == 5
    run("alpha(power(cycle:5,2))", "5", alpha_c5_sq)

    def alpha_c7_sq():
        v = independence_number(strong_power(c7, 2))
        return v, v == 10
    run("alpha(power(cycle:7,2))", "10", alpha_c7_sq)

    def tp_c5():
        v = schrijver_theta(c5, tol=tol).value
        return v, abs(v - _SQRT5) <= 1e-6
    run("theta_prime(cycle:5)", f"sqrt(5) = {_SQRT5:.6f}", tp_c5)

    def t0_c5():
        v0 = theta_r(c5, 0, tol=tol).value
        vp = schrijver_theta(c5, tol=tol).value
        return v0, abs(v0 - vp) <= 1e-6
    run("theta_r(0)(cycle:5)", "matches theta_prime", t0_c5)

    def t1_c5():
        v = theta_r(c5, 1, tol=tol).value
        return v, abs(v - 2.0) <= 1e-4
    run("theta_r(1)(cycle:5)", "2", t1_c5,
        note="strictly below theta_prime = sqrt(5)")

    def sandwich():
        a = independence_number(c5)
        th = lovasz_theta(c5, tol=tol).value
        ch = chromatic_number(complement(c5))
        ok = a <= th + 1e-9 and th <= ch + 1e-9
        return f"{a} <= {th:.6g} <= {ch}", ok
    run("alpha <= theta <= chi(complement) on cycle:5", "2 <= 2.236068 <= 3",
        sandwich)

    def two_vertex_anchor():
        th = lovasz_theta(make_edgeless(2), tol=tol).value
        ch = chromatic_number(make_complete(2))
        return f"{th:.9g} and {ch}", abs(th - 2.0) <= 1e-8 and ch == 2
    run("theta(empty:2) and chi(complete:2)", "2 and 2", two_vertex_anchor)

    def theta_product_c5():
        tg = lovasz_theta(strong_product(c5, c5), tol=tol).value
        t5 = lovasz_theta(c5, tol=tol).value
        return tg, abs(tg - t5 * t5) <= 1e-5
    run("theta(box(cycle:5,cycle:5))", "theta(cycle:5)^2 = 5", theta_product_c5,
        note="theta is multiplicative for this product")

    def doubling():
        seed = SymMatrix(np.ones((2, 2)) - np.eye(2))
        rep = construct_counterexample(seed, "parrilo")
        ok = (
            rep.k1 == 1.0
            and rep.k2 == 2.0
            and rep.C.n == 8
            and abs(rep.u_value + 8.0) <= 1e-9
            and rep.memberships.get("C_oracle_copositive") is False
        )
        return rep.u_value, ok
    run("doubling counterexample (parrilo cone)", "u^T C u = -8", doubling,
        note="product of cone members that is not copositive")

    rows.append({
        "quantity": "alpha(power(cycle:7,5))",
        "value": None,
        "expected": ">= 367",
        "status": "OUT-OF-SCOPE",
        "note": "16807 vertices; beyond the exact-search caps of this package",
    })
    rows.append({
        "quantity": "shannon_capacity(cycle:7)",
        "value": None,
        "expected": "unknown",
        "status": "OUT-OF-SCOPE",
        "note": "open problem; bounds computed here are upper bounds only",
    })
    return rows


def _cmd_report(args):
    rows = _report_rows(args.tol)
    if args.output == "json":
        print(json.dumps(rows, indent=2))
    elif args.output == "csv":
        header = ["quantity", "value", "expected", "status", "note"]
        _print_csv(header, [[_fmt(r[k]) for k in header] for r in rows])
    else:
        header = ["quantity", "value", "expected", "status", "note"]
        table = [[_fmt(r[k]) for k in header] for r in rows]
        widths = [max(len(h), *(len(row[i]) for row in table))
                  for i, h in enumerate(header)]
        line = "  ".join(h.ljust(w) for h, w in zip(header, widths))
        print(line)
        print("-" * len(line))
        for row in table:
            print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
    return 0


# ---------------------------------------------------------------------------

def _build_parser():
    p = argparse.ArgumentParser(
        prog="thetacap",
        description="Conic upper bounds on graph independence numbers and "
                    "closure checks for the underlying matrix cones.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=False, cone=False, matrices=False, r=False):
        sp.add_argument("--output", choices=("text", "json", "csv"),
                        default="text", help="output format")
        sp.add_argument("--tol", type=float, default=1e-9,
                        help="solver / feasibility tolerance")
        if graph:
            sp.add_argument("--graph", required=True,
                            help="graph expression, e.g. cycle:5, "
                                 "power(cycle:5,2), box(cycle:5,complete:3)")
            sp.add_argument("--dump-sdp", default=None, metavar="PATH",
                            help="write the conic instance to PATH before solving")
        if cone:
            sp.add_argument("--cone", choices=CONES, default="parrilo")
        if matrices:
            sp.add_argument("--seed-matrix", action="append", metavar="SPEC",
                            help="lambda2 | off-diag-ones:N | file:PATH "
                                 "(repeat for several matrices)")
        if r:
            sp.add_argument("--r", type=int, required=True,
                            help="order of the sum-of-squares cone (0 or 1)")

    sp = sub.add_parser("alpha", help="independence number")
    common(sp, graph=True)
    sp.set_defaults(fn=_cmd_alpha)

    sp = sub.add_parser("chi", help="chromatic number")
    common(sp, graph=True)
    sp.set_defaults(fn=_cmd_chi)

    sp = sub.add_parser("theta", help="PSD-cone upper bound on alpha")
    common(sp, graph=True)
    sp.set_defaults(fn=lambda a: _cmd_bound(a, lovasz_theta))

    sp = sub.add_parser("theta-prime",
                        help="PSD-plus-nonnegative upper bound on alpha")
    common(sp, graph=True)
    sp.set_defaults(fn=lambda a: _cmd_bound(a, schrijver_theta))

    sp = sub.add_parser("theta-r", help="sum-of-squares upper bound on alpha")
    common(sp, graph=True, r=True)
    sp.set_defaults(fn=lambda a: _cmd_bound(a, theta_r, r=a.r))

    sp = sub.add_parser("ms-value",
                        help="alpha via exact quadratic minimization over the simplex")
    common(sp, graph=True)
    sp.set_defaults(fn=_cmd_ms_value)

    sp = sub.add_parser("cone-member", help="test one matrix for cone membership")
    common(sp, cone=True, matrices=True)
    sp.set_defaults(fn=_cmd_cone_member)

    sp = sub.add_parser("product-check",
                        help="test whether a product of two cone members stays in the cone")
    common(sp, cone=True, matrices=True)
    sp.set_defaults(fn=_cmd_product_check)

    sp = sub.add_parser("counterexample",
                        help="build a product of cone members that is not copositive")
    common(sp, cone=True, matrices=True)
    sp.set_defaults(fn=_cmd_counterexample)

    sp = sub.add_parser("paper-report",
                        help="summary table of the package's reference quantities")
    common(sp)
    sp.set_defaults(fn=_cmd_report)

    return p


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except GraphExprError as exc:
        print(f"error: bad graph expression at offset {exc.offset}: {exc}",
              file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"error: resource cap exceeded: {exc}", file=sys.stderr)
        return 3
    except SolverFailureError as exc:
        print(f"error: solver failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
