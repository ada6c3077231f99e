"""Command line: print coefficient tables and run identity checks.

Exit codes: 0 all checks pass, 1 mismatch, 2 usage error, 3 vertex budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import dtcalc, forms, verify
from .series import INF, PLaurent, QSeries, as_rational, format_rational
from .vertex import BUDGET_ENV, DEFAULT_BUDGET, VertexBudgetExceeded, f_series, n_series

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _vertex_K(args):
    if args.K is None:
        raise UsageError("this series needs --K")
    return args.K


class UsageError(Exception):
    pass


def _dt(fn):
    def build(args):
        kw = {}
        if args.route == "vertex":
            kw = dict(K=_vertex_K(args), route="vertex", budget=args.budget)
        return fn(args.qmax, args.pmax, **kw).series
    return build


SERIES = {
    "delta": lambda a: forms.delta(a.qmax),
    "wp": lambda a: forms.wp(a.qmax, a.pmax),
    "f2neginv": lambda a: forms.f_squared_neg_inv(a.qmax, a.pmax),
    "zk3": lambda a: forms.elliptic_genus_Z(a.qmax, forms.z_precision(a.qmax) + a.pmax).truncate_p(a.pmax),
    "chi10-layer": lambda a: forms.chi10_tri(a.qmax, a.hmax).layers[a.hmax],
    "dt-pred": lambda a: forms.dt_prediction(a.hmax, a.qmax, a.pmax),
    "dt0-hat": _dt(dtcalc.dt0_hat),
    "dt0": _dt(dtcalc.dt0),
    "dt0-closed": lambda a: dtcalc.dt0_closed(a.qmax, a.pmax).series,
    "dt1-vert-hat": _dt(dtcalc.dt1_vertical_hat),
    "dt1-diag-hat": lambda a: dtcalc.dt1_diag_hat(a.qmax).series,
    "dt1": _dt(dtcalc.dt1),
    "dt1-closed": lambda a: dtcalc.dt1_closed(a.qmax, a.pmax).series,
    "f-series": lambda a: f_series(a.qmax, _vertex_K(a), a.budget),
    "n-series": lambda a: n_series(a.qmax, _vertex_K(a), a.budget),
}

CHECKS = ["elliptic-genus", "lemma-f", "macmahon", "nodal", "sign-ledger",
          "theorem-h0", "theorem-h1", "theorem-h1-vertex"]


def series_to_json(name: str, s: QSeries, K: int | None = None) -> dict:
    lo, hi = s.p_window()
    return {
        "series": name,
        "q_offset": s.q_offset,
        "truncation": {
            "q_max": s.q_max,
            "p_window": [None if lo == INF else int(lo), None if hi == INF else int(hi)],
            "K": K,
        },
        "coefficients": [
            {
                "q": q,
                "p_high": None if s[q].is_exact() else int(s[q].high),
                "terms": [{"p": p, "value": format_rational(c)} for p, c in s[q].items()],
            }
            for q in s.degrees()
        ],
    }


def series_from_json(obj: dict) -> QSeries:
    terms = []
    for row in obj["coefficients"]:
        high = INF if row.get("p_high") is None else row["p_high"]
        terms.append(PLaurent({t["p"]: as_rational(t["value"]) for t in row["terms"]}, high))
    return QSeries(terms, obj["q_offset"])


def series_text(name: str, s: QSeries) -> str:
    lines = [f"# {name}  q_offset={s.q_offset}  q_max={s.q_max}"]
    for q in s.degrees():
        t = s[q]
        body = " + ".join(f"({c})p^{p}" for p, c in t.items()) or "0"
        tail = "" if t.is_exact() else f" + O(p^{int(t.high) + 1})"
        lines.append(f"q^{q}: {body}{tail}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="igusadt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, qmax, pmax, K):
        p.add_argument("--qmax", type=int, default=qmax)
        p.add_argument("--pmax", type=int, default=pmax)
        p.add_argument("--K", type=int, default=K)
        p.add_argument("--budget", type=int, default=None,
                       help=f"vertex state budget (default {DEFAULT_BUDGET}, env {BUDGET_ENV})")
        p.add_argument("--format", choices=["text", "json"], default="text")

    ps = sub.add_parser("series", help="print a coefficient table")
    ps.add_argument("name", choices=sorted(SERIES))
    common(ps, 4, 6, None)
    ps.add_argument("--hmax", type=int, default=0)
    ps.add_argument("--route", choices=["closed", "vertex"], default="closed")

    pv = sub.add_parser("verify", help="run identity checks")
    pv.add_argument("check", choices=CHECKS + ["all"])
    common(pv, 4, 6, 8)
    pv.add_argument("--closed-qmax", type=int, default=8)
    pv.add_argument("--jobs", type=int, default=1)
    return parser


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{BUDGET_ENV} must be an integer, got {env!r}")
    return DEFAULT_BUDGET


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        args.budget = _budget(args)
        if args.qmax < 0 or args.pmax < 1 or (args.K is not None and args.K < 0):
            raise UsageError("need --qmax >= 0, --pmax >= 1, --K >= 0")
        if args.command == "series":
            return _series(args)
        return _verify(args)
    except UsageError as exc:
        print(f"igusadt: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VertexBudgetExceeded as exc:
        print(f"igusadt: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"igusadt: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _series(args) -> int:
    if args.name in ("dt-pred",) and args.hmax not in (0, 1):
        raise UsageError("dt-pred needs --hmax 0 or 1")
    s = SERIES[args.name](args)
    if args.format == "json":
        print(json.dumps(series_to_json(args.name, s, args.K), sort_keys=True))
    else:
        print(series_text(args.name, s))
    return EXIT_OK


def _verify(args) -> int:
    if args.K is None:
        raise UsageError("verify needs --K")
    names = CHECKS if args.check == "all" else [args.check]
    suite = verify.default_checks(args.qmax, args.pmax, args.K, args.closed_qmax, args.budget)
    reports = verify.run_checks({n: suite[n] for n in names}, jobs=args.jobs)
    if args.format == "json":
        ok = all(r.passed for r in reports)
        print(json.dumps({"status": "pass" if ok else "fail",
                          "checks": [r.to_json() for r in reports]}, sort_keys=True))
    else:
        for r in reports:
            print(r.text())
    if any(r.status == verify.BUDGET for r in reports):
        for r in reports:
            if r.status == verify.BUDGET:
                print(f"igusadt: {r.detail}", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK if all(r.passed for r in reports) else EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
