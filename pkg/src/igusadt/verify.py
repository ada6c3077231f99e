"""Named identity checks over exact series, reported cell window by cell window."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import dtcalc, forms
from .series import (
    Comparison,
    PLaurent,
    QSeries,
    format_rational,
    is_integral,
    p_over_one_minus_p_squared,
    pl_mul,
    pl_pow,
    qs_equal,
    qs_mul,
)
from .vertex import LegTriple, VertexBudgetExceeded, f_series, n_series, vertex_series

PASS, FAIL, BUDGET = "pass", "fail", "budget"


@dataclass
class CheckReport:
    check_name: str
    status: str
    q_range: tuple[int, int] | None = None
    p_window: tuple | None = None
    first_mismatch: dict | None = None
    elapsed_ms: int = 0
    windows: list = field(default_factory=list)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        return {
            "check": self.check_name,
            "status": self.status,
            "q_range": list(self.q_range) if self.q_range else None,
            "p_window": [_jint(x) for x in self.p_window] if self.p_window else None,
            "windows": [{"q": w.q, "p_lo": w.p_lo, "p_hi": _jint(w.p_hi)} for w in self.windows],
            "first_mismatch": self.first_mismatch,
            "elapsed_ms": self.elapsed_ms,
            "detail": self.detail,
        }

    def text(self) -> str:
        line = f"{self.status.upper():6} {self.check_name}"
        if self.q_range:
            line += f"  q[{self.q_range[0]}..{self.q_range[1]}]"
        if self.p_window:
            lo, hi = self.p_window
            line += f"  p[{'-' if lo is None else lo}..{'inf' if hi == float('inf') else hi}]"
        line += f"  {self.elapsed_ms}ms"
        if self.first_mismatch:
            m = self.first_mismatch
            line += f"  mismatch at q^{m['q']} p^{m['p']}: {m['lhs']} != {m['rhs']}"
        if self.detail:
            line += f"  ({self.detail})"
        return line


def _jint(x):
    if x is None or x == float("inf"):
        return None
    return int(x)


def _merge(name: str, comps: list[Comparison], start: float, detail: str = "") -> CheckReport:
    """Combine pairwise comparisons; windows are intersected across all pairs."""
    windows = []
    by_q: dict[int, list] = {}
    for c in comps:
        for w in c.windows:
            by_q.setdefault(w.q, []).append(w)
    for q in sorted(by_q):
        ws = by_q[q]
        if len(ws) < len(comps):
            continue
        lows = [w.p_lo for w in ws if w.p_lo is not None]
        windows.append(type(ws[0])(q, min(lows) if lows else None, min(w.p_hi for w in ws)))
    mismatch = None
    for c in comps:
        m = c.first_mismatch
        if m is not None and (mismatch is None or (m.q, m.p) < (mismatch.q, mismatch.p)):
            mismatch = m
    report = CheckReport(name, PASS if mismatch is None else FAIL, windows=windows, detail=detail)
    if windows:
        report.q_range = (windows[0].q, windows[-1].q)
        lows = [w.p_lo for w in windows if w.p_lo is not None]
        report.p_window = (min(lows) if lows else None, min(w.p_hi for w in windows))
    if mismatch is not None:
        report.first_mismatch = {"q": mismatch.q, "p": mismatch.p,
                                 "lhs": format_rational(mismatch.lhs),
                                 "rhs": format_rational(mismatch.rhs)}
    report.elapsed_ms = int((time.perf_counter() - start) * 1000)
    return report


def _guard(name, fn):
    start = time.perf_counter()
    try:
        return fn(start)
    except VertexBudgetExceeded as exc:
        return CheckReport(name, BUDGET, detail=str(exc),
                           elapsed_ms=int((time.perf_counter() - start) * 1000))


def macmahon_product(K: int) -> PLaurent:
    """prod_{m>=1} (1 - p^m)^-m up to p^K."""
    out = PLaurent.const(1).truncate(K)
    for m in range(1, K + 1):
        out = pl_mul(out, pl_pow(PLaurent({0: 1, m: -1}), -m, high=K))
    return out


def check_macmahon(K: int, budget: int | None = None) -> CheckReport:
    def run(start):
        lhs = QSeries([vertex_series(LegTriple(), K, budget)])
        rhs = QSeries([macmahon_product(K)])
        counts = [lhs.terms[0][n] for n in range(K + 1)]
        return _merge("macmahon", [qs_equal(lhs, rhs)], start, f"counts {counts}")
    return _guard("macmahon", run)


def check_lemma_f(q_max: int, K: int, rhs: QSeries | None = None,
                  budget: int | None = None) -> CheckReport:
    """sum_a F(a) q^a from the vertex against prod (1-q^m)/((1-pq^m)(1-p^-1 q^m))."""
    def run(start):
        lhs = f_series(q_max, K, budget)
        other = dtcalc.lemma_f_product(q_max) if rhs is None else rhs
        return _merge("lemma-f", [qs_equal(lhs, other)], start)
    return _guard("lemma-f", run)


def check_nodal(q_max: int, K: int, budget: int | None = None) -> CheckReport:
    """prod(1-q^m) sum_b N(b) q^b against 1 + p/(1-p)^2 + sum sum k(p^k + p^-k) q^d."""
    def run(start):
        lhs = qs_mul(forms.eta_pow(1, q_max), n_series(q_max, K, budget))
        rhs = dtcalc.nodal_closed(q_max, K + 1)
        return _merge("nodal", [qs_equal(lhs, rhs)], start)
    return _guard("nodal", run)


def check_theorem(h: int, q_max: int, p_max: int, K: int | None = None,
                  route: str = "closed", budget: int | None = None) -> CheckReport:
    """Strata assembly = Jacobi-form closed form = -1/chi_10 coefficient."""
    name = f"theorem-h{h}" + ("-vertex" if route == "vertex" else "")

    def run(start):
        if h == 0:
            strata = dtcalc.dt0(q_max, p_max, K, route, budget).series
            closed = dtcalc.dt0_closed(q_max, p_max).series
        elif h == 1:
            strata = dtcalc.dt1(q_max, p_max, K, route, budget).series
            closed = dtcalc.dt1_closed(q_max, p_max).series
        else:
            raise ValueError("h must be 0 or 1")
        pred = forms.dt_prediction(h, q_max, p_max)
        detail = "strata=closed=prediction"
        if not (is_integral(strata) and is_integral(closed) and is_integral(pred)):
            detail += "; non-integral coefficients"
        report = _merge(name, [qs_equal(strata, closed), qs_equal(strata, pred)], start, detail)
        if "non-integral" in detail:
            report.status = FAIL
        return report
    return _guard(name, run)


def check_elliptic_genus(q_max: int, k_max: int = 8) -> CheckReport:
    """Z = -24 wp F^2: integrality, the q^0 layer, and c(4d - n^2) consistency."""
    start = time.perf_counter()
    Z = forms.elliptic_genus_Z(q_max, forms.z_precision(q_max))
    leading = QSeries([Z.terms[0]])
    report = _merge("elliptic-genus", [qs_equal(leading, QSeries([PLaurent({-1: 2, 0: 20, 1: 2})]))], start)
    problems = []
    if not is_integral(Z):
        problems.append("non-integral coefficients")
    for k, vals in sorted(forms.discriminant_scan(Z, k_max).items()):
        if len(vals) != 1:
            problems.append(f"c({k}) inconsistent: {sorted(vals)}")
    if problems:
        report.status = FAIL
        report.detail = "; ".join(problems)
    else:
        report.detail = f"c(k) consistent for k <= {k_max}"
    return report


def check_sign_ledger(q_max: int, p_max: int) -> CheckReport:
    """DT_0 = -DT^_0 and DT_1 = -DT^_1,vert + DT^_1,diag against the unweighted displays.

    The hat series are rebuilt here from the displayed products, not from the
    strata assembly used by dtcalc.
    """
    start = time.perf_counter()
    P = dtcalc.working_precision(q_max, p_max)
    pp = p_over_one_minus_p_squared(P)
    hat0 = forms.theta_product(q_max, -20, -2).scale(pp).shift_q(-1).truncate_p(p_max)
    dt0 = dtcalc.dt0_closed(q_max, p_max).series
    c0 = qs_equal(dt0, -hat0)

    eta24 = forms.eta_pow(-24, q_max)
    vert = qs_mul(eta24, dtcalc.vertical_brace(q_max, P)).scale(24).shift_q(-1).truncate_p(p_max)
    diag = qs_mul(eta24, dtcalc.diagonal_counts(q_max)).shift_q(-1)
    dt1 = dtcalc.dt1_closed(q_max, p_max).series
    c1 = qs_equal(dt1, diag - vert)
    return _merge("sign-ledger", [c0, c1], start)


def default_checks(q_max: int = 4, p_max: int = 6, K: int = 8, closed_q_max: int = 8,
                   budget: int | None = None) -> dict:
    """The `verify all` suite: name -> (function, args)."""
    return {
        "elliptic-genus": (check_elliptic_genus, (closed_q_max,)),
        "lemma-f": (check_lemma_f, (q_max, K, None, budget)),
        "macmahon": (check_macmahon, (K, budget)),
        "nodal": (check_nodal, (q_max, K, budget)),
        "sign-ledger": (check_sign_ledger, (q_max, p_max)),
        "theorem-h0": (check_theorem, (0, closed_q_max, p_max)),
        "theorem-h1": (check_theorem, (1, closed_q_max, p_max)),
        "theorem-h1-vertex": (check_theorem, (1, q_max, p_max, K, "vertex", budget)),
    }


def _call(item):
    fn, args = item
    return fn(*args)


def run_checks(checks: dict, jobs: int = 1) -> list[CheckReport]:
    names = sorted(checks)
    items = [checks[n] for n in names]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_call, items))
    else:
        reports = [_call(it) for it in items]
    return sorted(reports, key=lambda r: r.check_name)
