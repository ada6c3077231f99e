"""
Assembly of the reduced DT partition functions of K3 x E for h = 0 and h = 1.

Strata contributions are assembled as unweighted (hat) series first; the
Behrend weighting then enters only as a sign on each p^n coefficient,
combined with the (-p)^n convention of the reduced series.  Every DT-level
series has q_offset -1, so internal degree d is the coefficient of q^(d-1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .forms import delta, divisors, eta_pow, f_squared, sigma1, theta_product, wp
from .series import (
    PLaurent,
    QSeries,
    p_over_one_minus_p_squared,
    qs_add,
    qs_mul,
    qs_pow,
    qs_recip,
)
from .vertex import f_series, n_series


class Label(str, Enum):
    DT0_HAT = "dt0-hat"
    DT0 = "dt0"
    DT0_CLOSED = "dt0-closed"
    DT1_VERT_HAT = "dt1-vert-hat"
    DT1_DIAG_HAT = "dt1-diag-hat"
    DT1 = "dt1"
    DT1_CLOSED = "dt1-closed"


class Route(str, Enum):
    VERTEX = "vertex"
    CLOSED = "closed"


@dataclass(frozen=True)
class DTSeries:
    label: Label
    series: QSeries
    provenance: dict = field(default_factory=dict)


def working_precision(q_max: int, p_max: int) -> int:
    """Seed p-precision that keeps every output window at or above p_max."""
    return p_max + 4 * q_max + 6


def _check_q(q_max: int) -> None:
    if q_max < 0:
        raise ValueError("q_max must be non-negative")


# Behrend values on formally locally monomial subschemes of each stratum,
# as a function of n = chi(O_Z).
def _parity(n: int) -> int:
    return -1 if n % 2 else 1


BEHREND = {
    "h0": lambda n: -_parity(n),
    "vertical": lambda n: -_parity(n),
    "diagonal": lambda n: _parity(n),
}


def behrend_weighted(hat: QSeries, stratum: str) -> QSeries:
    """Turn a sum e(Hilb) p^n into the sum nu e(Hilb) (-p)^n, coefficientwise."""
    nu = BEHREND[stratum]
    terms = []
    for t in hat.terms:
        terms.append(PLaurent({n: c * nu(n) * _parity(n) for n, c in t.items()}, t.high))
    return QSeries(terms, hat.q_offset)


def lemma_f_product(q_max: int) -> QSeries:
    """prod (1-q^m) / ((1-pq^m)(1-p^-1 q^m)), exact in p."""
    return theta_product(q_max, 1, -1)


def dt0_hat(q_max: int, p_max: int, K: int | None = None, route: Route = Route.CLOSED,
            budget: int | None = None) -> DTSeries:
    """q^-1 p/(1-p)^2 (sum F(a) q^a)^2 prod (1-q^m)^-22.

    The F-series comes from vertex enumeration (route VERTEX, needs K) or
    from its product formula (route CLOSED).  Vertex windows are limited by K.
    """
    _check_q(q_max)
    route = Route(route)
    P = working_precision(q_max, p_max)
    if route is Route.VERTEX:
        if K is None:
            raise ValueError("the vertex route needs a box bound K")
        F = f_series(q_max, K, budget)
    else:
        F = lemma_f_product(q_max)
    s = qs_mul(qs_pow(F, 2), eta_pow(-22, q_max))
    s = s.scale(p_over_one_minus_p_squared(P)).shift_q(-1).truncate_p(p_max)
    return DTSeries(Label.DT0_HAT, s, dict(q_max=q_max, p_max=p_max, K=K, route=route.value))


def dt0(q_max: int, p_max: int, K: int | None = None, route: Route = Route.CLOSED,
        budget: int | None = None) -> DTSeries:
    hat = dt0_hat(q_max, p_max, K, route, budget)
    return DTSeries(Label.DT0, behrend_weighted(hat.series, "h0"), hat.provenance)


def dt0_closed(q_max: int, p_max: int) -> DTSeries:
    """1/(F^2 Delta), with F^2 the reciprocal of -(-F^-2)."""
    _check_q(q_max)
    P = working_precision(q_max, p_max)
    s = qs_recip(qs_mul(f_squared(q_max, P), delta(q_max))).truncate_p(p_max)
    return DTSeries(Label.DT0_CLOSED, s, dict(q_max=q_max, p_max=p_max, route="closed"))


def nodal_closed(q_max: int, p_max: int) -> QSeries:
    """1 + p/(1-p)^2 + sum_d sum_{k|d} k (p^k + p^-k) q^d."""
    terms = [p_over_one_minus_p_squared(p_max) + 1]
    for d in range(1, q_max + 1):
        c: dict[int, int] = {}
        for k in divisors(d):
            c[k] = c.get(k, 0) + k
            c[-k] = c.get(-k, 0) + k
        terms.append(PLaurent(c))
    return QSeries(terms)


def vertical_brace(q_max: int, p_max: int) -> QSeries:
    """1/12 + p/(1-p)^2 + sum_d sum_{k|d} k (p^k + p^-k) q^d."""
    return qs_add(nodal_closed(q_max, p_max), QSeries.constant(Fraction(-11, 12), q_max))


def dt1_vertical_hat(q_max: int, p_max: int, K: int | None = None,
                     route: Route = Route.CLOSED, budget: int | None = None) -> DTSeries:
    """Contribution of subschemes whose curve has a vertical component.

    VERTEX: q^-1 (-22 prod(1-q^m)^-24 + 24 prod(1-q^m)^-23 sum_b N(b) q^b).
    CLOSED: q^-1 24 prod(1-q^m)^-24 {1/12 + p/(1-p)^2 + sum sum k(p^k+p^-k) q^d}.
    """
    _check_q(q_max)
    route = Route(route)
    P = working_precision(q_max, p_max)
    if route is Route.VERTEX:
        if K is None:
            raise ValueError("the vertex route needs a box bound K")
        nodal = qs_mul(eta_pow(-23, q_max), n_series(q_max, K, budget)).scale(24)
        s = qs_add(eta_pow(-24, q_max).scale(-22), nodal)
    else:
        s = qs_mul(eta_pow(-24, q_max), vertical_brace(q_max, P)).scale(24)
    s = s.shift_q(-1).truncate_p(p_max)
    return DTSeries(Label.DT1_VERT_HAT, s, dict(q_max=q_max, p_max=p_max, K=K, route=route.value))


def diagonal_counts(q_max: int) -> QSeries:
    """2 * 24 * sum_{d>=1} sigma1(d) q^d: graphs of degree-d homomorphisms F_y -> E, up to sign."""
    return QSeries.from_dict({(d, 0): 48 * sigma1(d) for d in range(1, q_max + 1)}, q_max)


def dt1_diag_hat(q_max: int) -> DTSeries:
    _check_q(q_max)
    s = qs_mul(eta_pow(-24, q_max), diagonal_counts(q_max)).shift_q(-1)
    return DTSeries(Label.DT1_DIAG_HAT, s, dict(q_max=q_max))


def dt1(q_max: int, p_max: int, K: int | None = None, route: Route = Route.CLOSED,
        budget: int | None = None) -> DTSeries:
    """-DT^_vertical + DT^_diagonal, via the stratum Behrend signs."""
    vert = dt1_vertical_hat(q_max, p_max, K, route, budget)
    diag = dt1_diag_hat(q_max)
    s = qs_add(behrend_weighted(vert.series, "vertical"),
               behrend_weighted(diag.series, "diagonal"))
    return DTSeries(Label.DT1, s, vert.provenance)


def dt1_closed(q_max: int, p_max: int) -> DTSeries:
    """-24 wp / Delta."""
    _check_q(q_max)
    P = working_precision(q_max, p_max)
    s = qs_mul(wp(q_max, P), qs_recip(delta(q_max))).scale(-24).truncate_p(p_max)
    return DTSeries(Label.DT1_CLOSED, s, dict(q_max=q_max, p_max=p_max, route="closed"))
