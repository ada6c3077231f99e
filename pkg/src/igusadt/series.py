"""
Exact truncated series arithmetic in Z((p))[[q]] with rational coefficients.

A `PLaurent` is a Laurent series in p known exactly on the degrees up to
`high`; everything below `low` is exactly zero.  A `QSeries` is a power
series in q (times a global power ``q**q_offset``) whose coefficients are
`PLaurent` values, each carrying its own p-window.

Exact series (polynomials, monomials) have ``high == INF``.  Coefficients are
Python ints or `fractions.Fraction`; fractions with denominator one are
always stored as ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]

INF = math.inf


class SeriesError(ArithmeticError):
    """Raised for non-invertible leading terms and unbounded expansions."""


def as_rational(x) -> Rational:
    if isinstance(x, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return as_rational(Fraction(x))
    raise TypeError(f"not an exact rational: {x!r}")


def format_rational(x: Rational) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def binomial(k: int, j: int) -> int:
    """Generalized binomial coefficient k choose j, valid for negative k."""
    if j < 0:
        return 0
    if k >= 0:
        return math.comb(k, j)
    # (-1)^j * C(j - k - 1, j)
    return (-1) ** j * math.comb(j - k - 1, j)


class PLaurent:
    """Truncated Laurent series in p.

    Degrees ``<= high`` are exact, degrees ``< low`` are exactly zero.  `low`
    is always the lowest stored degree, or ``high + 1`` when nothing nonzero
    is known.
    """

    __slots__ = ("_coeffs", "high", "low")

    def __init__(self, coeffs: Mapping[int, Rational] | None = None, high: float = INF):
        if high != INF:
            high = int(high)
        clean = {}
        for deg, c in (coeffs or {}).items():
            if deg > high:
                continue
            c = as_rational(c)
            if c:
                clean[int(deg)] = c
        self._coeffs = dict(sorted(clean.items()))
        self.high = high
        if clean:
            self.low = next(iter(self._coeffs))
        else:
            self.low = high + 1

    @classmethod
    def zero(cls, high: float = INF) -> PLaurent:
        return cls({}, high)

    @classmethod
    def const(cls, c: Rational = 1) -> PLaurent:
        return cls({0: c})

    @classmethod
    def monomial(cls, deg: int, c: Rational = 1) -> PLaurent:
        return cls({deg: c})

    @property
    def coeffs(self) -> dict[int, Rational]:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def __getitem__(self, deg: int) -> Rational:
        if deg > self.high:
            raise IndexError(f"p-degree {deg} lies outside the window (high={self.high})")
        return self._coeffs.get(deg, 0)

    def __len__(self):
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_exact(self) -> bool:
        return self.high == INF

    def truncate(self, high: float) -> PLaurent:
        return PLaurent(self._coeffs, min(self.high, high))

    def shift(self, k: int) -> PLaurent:
        """Multiply by p**k."""
        return PLaurent({d + k: c for d, c in self._coeffs.items()}, self.high + k)

    def scale(self, c: Rational) -> PLaurent:
        c = as_rational(c)
        if c == 0:
            return PLaurent.zero(INF)
        return PLaurent({d: v * c for d, v in self._coeffs.items()}, self.high)

    def map_p_inverse(self) -> PLaurent:
        """Substitute p -> 1/p; only defined for exact series."""
        if not self.is_exact():
            raise SeriesError("p -> 1/p is only defined on exact series")
        return PLaurent({-d: c for d, c in self._coeffs.items()})

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        return pl_add(self, _promote_pl(other))

    __radd__ = __add__

    def __sub__(self, other):
        return pl_add(self, -_promote_pl(other))

    def __rsub__(self, other):
        return pl_add(_promote_pl(other), -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return pl_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PLaurent):
            return NotImplemented
        return self._coeffs == other._coeffs and self.high == other.high

    def __hash__(self):
        return hash((tuple(self._coeffs.items()), self.high))

    def __repr__(self):
        terms = " + ".join(f"({c})p^{d}" for d, c in self._coeffs.items()) or "0"
        if self.is_exact():
            return f"PLaurent({terms})"
        return f"PLaurent({terms} + O(p^{self.high + 1}))"


def _promote_pl(x) -> PLaurent:
    if isinstance(x, PLaurent):
        return x
    return PLaurent.const(as_rational(x))


def pl_add(a: PLaurent, b: PLaurent) -> PLaurent:
    out = dict(a._coeffs)
    for d, c in b._coeffs.items():
        out[d] = out.get(d, 0) + c
    return PLaurent(out, min(a.high, b.high))


def pl_mul(a: PLaurent, b: PLaurent) -> PLaurent:
    """Convolution product, exact on degrees <= min(a.low + b.high, b.low + a.high)."""
    high = min(a.low + b.high, b.low + a.high)
    out: dict[int, Rational] = {}
    bi = list(b._coeffs.items())
    for i, x in a._coeffs.items():
        if i + b.low > high:
            break
        for j, y in bi:
            d = i + j
            if d > high:
                break
            out[d] = out.get(d, 0) + x * y
    return PLaurent(out, high)


def pl_recip(a: PLaurent, high: float | None = None) -> PLaurent:
    """Reciprocal in Z((p)); the result starts at p**(-a.low).

    `high` caps the result window and is required when `a` is exact, since
    the reciprocal of a polynomial is generally an infinite series.
    """
    if a.is_zero():
        raise SeriesError("reciprocal of a series that is zero on its window")
    low = a.low
    lead = Fraction(a._coeffs[low])
    if len(a._coeffs) == 1 and a.is_exact():
        return PLaurent({-low: as_rational(1 / lead)}, INF if high is None else high)
    top = a.high - 2 * low
    if high is not None:
        top = min(top, high)
    if top == INF:
        raise SeriesError("reciprocal of an exact series needs an explicit p cap")
    n = int(top + low)  # number of terms beyond the leading one
    u = [a._coeffs.get(low + i, 0) for i in range(n + 1)]
    inv_lead = as_rational(1 / lead)
    b = [inv_lead]
    for k in range(1, n + 1):
        s = 0
        for i in range(1, k + 1):
            if u[i]:
                s += u[i] * b[k - i]
        b.append(-s * inv_lead)
    return PLaurent({-low + k: as_rational(c) for k, c in enumerate(b)}, top)


def pl_pow(a: PLaurent, k: int, high: float | None = None) -> PLaurent:
    if k == 0:
        return PLaurent.const(1)
    if k < 0:
        return pl_pow(pl_recip(a, high), -k)
    result = PLaurent.const(1)
    base = a
    while k:
        if k & 1:
            result = pl_mul(result, base)
        k >>= 1
        if k:
            base = pl_mul(base, base)
    return result


def p_over_one_minus_p_squared(p_max: int) -> PLaurent:
    """p/(1-p)^2 = p + 2p^2 + 3p^3 + ... expanded in Z((p)) up to p**p_max."""
    return PLaurent({k: k for k in range(1, p_max + 1)}, p_max)


def geometric(p_max: int, c: Rational = 1) -> PLaurent:
    """1/(1 - c p) expanded up to p**p_max."""
    c = as_rational(c)
    return PLaurent({k: c**k for k in range(0, p_max + 1)}, p_max)


# ---------------------------------------------------------------------------
# q-series


class QSeries:
    """Power series in q with PLaurent coefficients, times ``q**q_offset``.

    ``terms[d]`` is the coefficient of external q-degree ``d + q_offset``;
    internal degrees run from 0 to ``q_max``.
    """

    __slots__ = ("q_offset", "terms")

    def __init__(self, terms: Iterable[PLaurent], q_offset: int = 0):
        self.terms = tuple(terms)
        if not self.terms:
            raise ValueError("a QSeries needs at least one term")
        self.q_offset = int(q_offset)

    @property
    def q_max(self) -> int:
        return len(self.terms) - 1

    @property
    def q_top(self) -> int:
        """Highest external q-degree that is known."""
        return self.q_offset + self.q_max

    @classmethod
    def one(cls, q_max: int) -> QSeries:
        return cls.constant(PLaurent.const(1), q_max)

    @classmethod
    def zero(cls, q_max: int, q_offset: int = 0) -> QSeries:
        return cls([PLaurent.zero()] * (q_max + 1), q_offset)

    @classmethod
    def constant(cls, c: PLaurent | Rational, q_max: int) -> QSeries:
        c = _promote_pl(c)
        return cls([c] + [PLaurent.zero()] * q_max)

    @classmethod
    def from_dict(cls, coeffs: Mapping[tuple[int, int], Rational], q_max: int,
                  q_offset: int = 0) -> QSeries:
        """Exact-in-p series from ``{(internal q-degree, p-degree): value}``."""
        rows: list[dict[int, Rational]] = [{} for _ in range(q_max + 1)]
        for (qd, pd), v in coeffs.items():
            if 0 <= qd <= q_max:
                rows[qd][pd] = rows[qd].get(pd, 0) + v
        return cls([PLaurent(r) for r in rows], q_offset)

    def __getitem__(self, q_degree: int) -> PLaurent:
        """Coefficient at an external q-degree."""
        if q_degree > self.q_top:
            raise IndexError(f"q-degree {q_degree} beyond truncation {self.q_top}")
        d = q_degree - self.q_offset
        if d < 0:
            return PLaurent.zero()
        return self.terms[d]

    def degrees(self) -> range:
        return range(self.q_offset, self.q_top + 1)

    def is_zero(self) -> bool:
        return all(t.is_zero() for t in self.terms)

    def truncate_q(self, q_top: int) -> QSeries:
        """Keep external q-degrees up to `q_top`."""
        n = q_top - self.q_offset
        if n < 0:
            raise ValueError("truncation below the q-offset")
        return QSeries(self.terms[: n + 1], self.q_offset)

    def truncate_p(self, p_max: float) -> QSeries:
        return QSeries([t.truncate(p_max) for t in self.terms], self.q_offset)

    def shift_q(self, k: int) -> QSeries:
        """Multiply by q**k."""
        return QSeries(self.terms, self.q_offset + k)

    def shift_p(self, k: int) -> QSeries:
        return QSeries([t.shift(k) for t in self.terms], self.q_offset)

    def scale(self, c) -> QSeries:
        if isinstance(c, PLaurent):
            return QSeries([pl_mul(c, t) for t in self.terms], self.q_offset)
        return QSeries([t.scale(c) for t in self.terms], self.q_offset)

    def with_offset(self, q_offset: int) -> QSeries:
        """Re-express with a lower offset by padding exact leading zeros."""
        pad = self.q_offset - q_offset
        if pad < 0:
            raise ValueError("can only lower the q-offset")
        return QSeries([PLaurent.zero()] * pad + list(self.terms), q_offset)

    def p_window(self) -> tuple[float, float]:
        lows = [t.low for t in self.terms if not t.is_zero()]
        return (min(lows) if lows else INF, min(t.high for t in self.terms))

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        return qs_add(self, other)

    def __sub__(self, other):
        return qs_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return qs_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return qs_pow(self, k)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.q_offset == other.q_offset and self.terms == other.terms

    def __hash__(self):
        return hash((self.q_offset, self.terms))

    def __repr__(self):
        return f"QSeries(q_offset={self.q_offset}, q_max={self.q_max}, terms={list(self.terms)!r})"


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    off = min(a.q_offset, b.q_offset)
    top = min(a.q_top, b.q_top)
    return QSeries([pl_add(a[d], b[d]) for d in range(off, top + 1)], off)


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    n = min(a.q_max, b.q_max)
    out = []
    for k in range(n + 1):
        acc = None
        for i in range(k + 1):
            x, y = a.terms[i], b.terms[k - i]
            if x.is_zero() and x.is_exact() or y.is_zero() and y.is_exact():
                continue
            term = pl_mul(x, y)
            acc = term if acc is None else pl_add(acc, term)
        out.append(acc if acc is not None else PLaurent.zero())
    return QSeries(out, a.q_offset + b.q_offset)


def qs_recip(a: QSeries, p_high: float | None = None) -> QSeries:
    """Reciprocal; the leading internal term must be invertible.

    `p_high` caps the p-window of the leading reciprocal, which is required
    when that leading term is an exact Laurent polynomial that is not a
    monomial.
    """
    lead = a.terms[0]
    if lead.is_zero():
        raise SeriesError("leading q-coefficient is zero; reciprocal undefined")
    b0 = pl_recip(lead, p_high)
    out = [b0]
    for k in range(1, a.q_max + 1):
        acc = None
        for i in range(1, k + 1):
            x = a.terms[i]
            if x.is_zero() and x.is_exact():
                continue
            term = pl_mul(x, out[k - i])
            acc = term if acc is None else pl_add(acc, term)
        out.append(PLaurent.zero() if acc is None else -pl_mul(b0, acc))
    return QSeries(out, -a.q_offset)


def qs_pow(a: QSeries, k: int, p_high: float | None = None) -> QSeries:
    """Integer power by repeated squaring; negative powers go through qs_recip."""
    if k == 0:
        return QSeries.one(a.q_max)
    if k < 0:
        return qs_pow(qs_recip(a, p_high), -k)
    result = None
    base = a
    while k:
        if k & 1:
            result = base if result is None else qs_mul(result, base)
        k >>= 1
        if k:
            base = qs_mul(base, base)
    return result


def factor_power(n: int, d: int, k: int, q_max: int, c: Rational = 1) -> QSeries:
    """(1 - c p^n q^d)^k truncated at internal q-degree q_max, for d >= 1.

    Expanded with the binomial series, so huge or negative exponents cost no
    more than small ones.  The result is exact in p.
    """
    if d < 1:
        raise ValueError("factor_power needs a positive q-degree")
    c = as_rational(c)
    coeffs = {}
    for j in range(q_max // d + 1):
        v = binomial(k, j) * (-c) ** j
        if v:
            coeffs[(d * j, n * j)] = v
    return QSeries.from_dict(coeffs, q_max)


def product(factors: Iterable[QSeries], q_max: int) -> QSeries:
    result = QSeries.one(q_max)
    for f in factors:
        result = qs_mul(result, f)
    return result


# ---------------------------------------------------------------------------
# comparison


@dataclass(frozen=True)
class Mismatch:
    q: int
    p: int
    lhs: Rational
    rhs: Rational


@dataclass(frozen=True)
class Window:
    """Per q-degree verified cell range; every p-degree <= p_hi was compared."""

    q: int
    p_lo: int | None  # lowest nonzero degree on either side, None if both vanish
    p_hi: float


@dataclass
class Comparison:
    equal: bool
    windows: list[Window] = field(default_factory=list)
    first_mismatch: Mismatch | None = None

    def __bool__(self):
        return self.equal

    @property
    def q_range(self) -> tuple[int, int] | None:
        if not self.windows:
            return None
        return self.windows[0].q, self.windows[-1].q

    @property
    def p_window(self) -> tuple[int | None, float] | None:
        """(lowest nonzero p-degree seen, smallest verified upper bound)."""
        if not self.windows:
            return None
        lows = [w.p_lo for w in self.windows if w.p_lo is not None]
        return (min(lows) if lows else None), min(w.p_hi for w in self.windows)


def pl_compare(a: PLaurent, b: PLaurent) -> tuple[float, tuple[int, Rational, Rational] | None]:
    """Compare on the intersected window; returns (upper bound, first difference)."""
    hi = min(a.high, b.high)
    degs = sorted(d for d in set(a._coeffs) | set(b._coeffs) if d <= hi)
    for d in degs:
        x, y = a._coeffs.get(d, 0), b._coeffs.get(d, 0)
        if x != y:
            return hi, (d, x, y)
    return hi, None


def qs_equal(a: QSeries, b: QSeries, q_top: int | None = None) -> Comparison:
    """Compare two series cell by cell on the intersection of their windows."""
    lo = min(a.q_offset, b.q_offset)
    top = min(a.q_top, b.q_top)
    if q_top is not None:
        top = min(top, q_top)
    windows = []
    mismatch = None
    for q in range(lo, top + 1):
        x, y = a[q], b[q]
        hi, diff = pl_compare(x, y)
        lows = [t.low for t in (x, y) if not t.is_zero() and t.low <= hi]
        windows.append(Window(q, min(lows) if lows else None, hi))
        if diff is not None and mismatch is None:
            mismatch = Mismatch(q, diff[0], diff[1], diff[2])
    return Comparison(mismatch is None, windows, mismatch)


def is_integral(s: QSeries | PLaurent) -> bool:
    terms = s.terms if isinstance(s, QSeries) else (s,)
    return all(isinstance(c, int) for t in terms for _, c in t.items())
