"""
Modular and Jacobi form building blocks as truncated q-series.

Every factor ``1/(1-p)`` style unit is expanded in Z((p)): finite tail of
negative powers, infinite tail of positive ones.  Functions taking `p_max`
use it as the precision of those positive tails.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .series import (
    INF,
    PLaurent,
    QSeries,
    SeriesError,
    binomial,
    factor_power,
    p_over_one_minus_p_squared,
    pl_add,
    product,
    qs_add,
    qs_mul,
    qs_recip,
)


def sigma1(d: int) -> int:
    if d < 1:
        raise ValueError("sigma1 needs a positive integer")
    return sum(k for k in range(1, d + 1) if d % k == 0)


def divisors(d: int) -> list[int]:
    return [k for k in range(1, d + 1) if d % k == 0]


def eta_pow(k: int, q_max: int) -> QSeries:
    """prod_{m>=1} (1 - q^m)^k truncated at q^q_max."""
    return product((factor_power(0, m, k, q_max) for m in range(1, q_max + 1)), q_max)


def delta(q_max: int) -> QSeries:
    """Discriminant q prod (1-q^m)^24; internal degrees 0..q_max, offset 1."""
    if q_max < 1:
        raise ValueError("delta needs q_max >= 1")
    return eta_pow(24, q_max).shift_q(1)


def theta_product(q_max: int, e_q: int, e_p: int) -> QSeries:
    """prod_m (1-q^m)^e_q (1-p q^m)^e_p (1-p^-1 q^m)^e_p."""
    factors = []
    for m in range(1, q_max + 1):
        factors += [factor_power(0, m, e_q, q_max),
                    factor_power(1, m, e_p, q_max),
                    factor_power(-1, m, e_p, q_max)]
    return product(factors, q_max)


def f_squared_neg_inv(q_max: int, p_max: int) -> QSeries:
    """-F^{-2} = p/(1-p)^2 prod (1-q^m)^4 / ((1-pq^m)^2 (1-p^-1 q^m)^2)."""
    if p_max < 1:
        raise ValueError("p_max must be at least 1")
    return theta_product(q_max, 4, -2).scale(p_over_one_minus_p_squared(p_max))


def f_squared(q_max: int, p_max: int) -> QSeries:
    return -qs_recip(f_squared_neg_inv(q_max, p_max))


def wp(q_max: int, p_max: int) -> QSeries:
    """Weierstrass p: 1/12 + p/(1-p)^2 + sum_d sum_{k|d} k (p^k + p^-k - 2) q^d."""
    lead = pl_add(PLaurent.const(Fraction(1, 12)), p_over_one_minus_p_squared(p_max))
    terms = [lead]
    for d in range(1, q_max + 1):
        c: dict[int, int] = {}
        for k in divisors(d):
            c[k] = c.get(k, 0) + k
            c[-k] = c.get(-k, 0) + k
            c[0] = c.get(0, 0) - 2 * k
        terms.append(PLaurent(c))
    return QSeries(terms)


def elliptic_genus_Z(q_max: int, p_max: int) -> QSeries:
    """Z = -24 wp F^2, the elliptic genus of K3."""
    return qs_mul(wp(q_max, p_max), f_squared(q_max, p_max)).scale(-24)


def z_precision(q_max: int) -> int:
    """Seed p-precision after which Z is exact on |n| <= sqrt(4d+1) for d <= q_max."""
    return 3 * q_max + isqrt(4 * q_max + 1) + 4


def c_coeff(k: int, Z: QSeries) -> int:
    """The coefficient c(k) of Z = sum c(4d - n^2) p^n q^d.

    Read at the smallest q-degree that carries discriminant k.  Values of k
    that are not 0 or 3 mod 4 never occur as 4d - n^2 and give 0, as do
    k < -1 (checked against Z where it is in range).
    """
    if k % 4 not in (0, 3):
        return 0
    n = 0 if k % 4 == 0 else 1
    d = (k + n * n) // 4
    if d < 0:
        return 0
    if d > Z.q_top:
        raise SeriesError(f"c({k}) needs q-degree {d}, Z is known only to {Z.q_top}")
    layer = Z[d]
    if k < -1:
        # k < -1 with d >= 0 only happens for d = 0 and |n| >= 2; confirm from Z
        n = isqrt(-k)
        if n <= layer.high and layer[n] != 0:
            raise SeriesError(f"Z has a nonzero coefficient at discriminant {k}")
        return 0
    if n > layer.high:
        raise SeriesError(f"c({k}) lies outside the p-window of Z at q^{d}")
    v = layer[n]
    if not isinstance(v, int):
        raise SeriesError(f"non-integral elliptic genus coefficient c({k}) = {v}")
    return v


def discriminant_scan(Z: QSeries, k_max: int) -> dict[int, set]:
    """All values of Z[d][n] grouped by 4d - n^2 <= k_max inside the windows."""
    seen: dict[int, set] = {}
    for d in range(0, Z.q_top + 1):
        layer = Z[d]
        n = 0
        while 4 * d - n * n >= -1:
            k = 4 * d - n * n
            if k <= k_max:
                for s in (n, -n):
                    if s <= layer.high:
                        seen.setdefault(k, set()).add(layer[s])
            n += 1
    return seen


# ---------------------------------------------------------------------------
# Igusa cusp form


@dataclass(frozen=True)
class TriSeries:
    """Series in qt with QSeries layers: layers[h] sits at qt^(h + tq_offset)."""

    layers: tuple
    tq_offset: int = 0

    @property
    def h_max(self) -> int:
        return len(self.layers) - 1

    def __getitem__(self, h: int) -> QSeries:
        return self.layers[h - self.tq_offset]


def _shift_scale(s: QSeries, c: int, p_shift: int, q_shift: int) -> QSeries:
    """c p^p_shift q^q_shift s, keeping the internal truncation of s."""
    n = s.q_max + 1
    terms = [PLaurent.zero()] * min(q_shift, n) + [t.shift(p_shift).scale(c) for t in s.terms[: max(n - q_shift, 0)]]
    return QSeries(terms, s.q_offset)


def _times_factor(layers: list, n: int, d: int, h: int, e: int) -> list:
    """Multiply by (1 - p^n q^d qt^h)^e, truncated in q and qt."""
    h_max = len(layers) - 1
    q_max = layers[0].q_max
    out = list(layers)
    j = 1
    while j * h <= h_max and j * d <= q_max:
        b = binomial(e, j) * (-1) ** j
        if b:
            for src in range(0, h_max - j * h + 1):
                term = _shift_scale(layers[src], b, n * j, d * j)
                out[src + j * h] = qs_add(out[src + j * h], term)
        j += 1
    return out


def chi10_tri(q_max: int, h_max: int = 1, Z: QSeries | None = None) -> TriSeries:
    """chi_10 = p q qt (1-p^-1)^2 prod_{n} prod_{(d,h)>(0,0)} (1 - p^n q^d qt^h)^c(4dh-n^2).

    Truncated at internal q-degree q_max and qt-degree h_max of the product
    (i.e. external q up to q_max + 1 and qt up to h_max + 1).  Only factors
    with n^2 <= 4dh + 1 can have nonzero exponent.  All layers are exact in p.
    """
    if h_max < 0:
        raise ValueError("h_max must be non-negative")
    d_need = max(q_max * h_max, 1)
    if Z is None:
        Z = elliptic_genus_Z(d_need, z_precision(d_need))
    layers = [QSeries.one(q_max)] + [QSeries.zero(q_max) for _ in range(h_max)]
    for h in range(0, h_max + 1):
        for d in range(0, q_max + 1):
            if (d, h) == (0, 0):
                continue
            r = isqrt(4 * d * h + 1)
            for n in range(-r, r + 1):
                e = c_coeff(4 * d * h - n * n, Z)
                if e:
                    layers = _times_factor(layers, n, d, h, e)
    pref = PLaurent({1: 1, 0: -2, -1: 1})
    return TriSeries(tuple(layer.scale(pref).shift_q(1) for layer in layers), 1)


def tri_recip(t: TriSeries, p_high: int) -> TriSeries:
    """Reciprocal in the qt-adic sense; the lowest layer must be invertible."""
    a = t.layers
    b0 = qs_recip(a[0], p_high)
    out = [b0]
    for h in range(1, len(a)):
        acc = None
        for i in range(1, h + 1):
            term = qs_mul(a[i], out[h - i])
            acc = term if acc is None else qs_add(acc, term)
        out.append(-qs_mul(b0, acc))
    return TriSeries(tuple(out), -t.tq_offset)


def prediction_precision(q_max: int, p_max: int) -> int:
    return p_max + 4 * q_max + 6


def dt_prediction(h: int, q_max: int, p_max: int) -> QSeries:
    """Coefficient of qt^(h-1) in -1/chi_10, valid for p-degrees <= p_max.

    Returned with q_offset -1 and internal degrees 0..q_max.
    """
    if h not in (0, 1):
        raise ValueError("predictions are implemented for h = 0 and h = 1")
    chi = chi10_tri(q_max, h_max=h)
    inv = tri_recip(chi, prediction_precision(q_max, p_max))
    out = -inv[h - 1]
    return out.truncate_p(p_max)

