"""
Brute-force topological vertex.

A configuration is a finite set of boxes added to the union of three leg
cylinders so that the result stays downward closed in Z^3_{>=0}.  Leg
orientation (with the Ferrers convention of `partitions`):

* leg1 runs along the i axis and occupies ``{(i, j, k): (j, k) in leg1}``
* leg2 runs along the j axis and occupies ``{(i, j, k): (k, i) in leg2}``
* leg3 runs along the k axis and occupies ``{(i, j, k): (i, j) in leg3}``

The convention is cyclic, so rotating the legs together with the coordinates
leaves every vertex series unchanged.
"""

from __future__ import annotations

import os
import threading
from typing import NamedTuple

from .partitions import BOX, EMPTY, Partition, partitions_of
from .series import PLaurent, QSeries, pl_mul, pl_recip

DEFAULT_BUDGET = 10**7
BUDGET_ENV = "IGUSA_VERTEX_BUDGET"


class VertexBudgetExceeded(RuntimeError):
    """The enumeration visited more states than the configured budget."""


class LegTriple(NamedTuple):
    leg1: Partition = EMPTY
    leg2: Partition = EMPTY
    leg3: Partition = EMPTY

    @classmethod
    def of(cls, *legs) -> LegTriple:
        return cls(*(Partition(x) for x in legs))

    def rotate(self) -> LegTriple:
        """Legs of the configuration rotated by (i, j, k) -> (k, i, j)."""
        return LegTriple(self.leg3, self.leg1, self.leg2)

    @property
    def size(self) -> int:
        return sum(leg.size for leg in self)


def default_budget() -> int:
    env = os.environ.get(BUDGET_ENV)
    return int(env) if env else DEFAULT_BUDGET


def leg_membership(legs: LegTriple):
    """Membership predicate of the minimal configuration (union of the legs)."""
    l1, l2, l3 = legs

    def member(box) -> bool:
        i, j, k = box
        return (j, k) in l1 or (k, i) in l2 or (i, j) in l3

    return member


def _extent(legs: LegTriple) -> int:
    return max([len(x) for x in legs] + [x[0] for x in legs if x])


def leg_overlap(legs: LegTriple) -> int:
    """Number of boxes of the third leg that also lie in leg1 or leg2.

    This is the length of the scheme-theoretic intersection of the thickened
    third-axis curve with the curve formed by the first two legs.
    """
    l1, l2, l3 = legs
    count = 0
    for i, j in l3.cells():
        # inside the leg3 cylinder k is free; leg1/leg2 bound it
        ks = {k for k in range(_extent(legs) + 1) if (j, k) in l1 or (k, i) in l2}
        count += len(ks)
    return count


def _initial_addable(legs: LegTriple, member) -> set:
    r = _extent(legs) + 1
    out = set()
    for i in range(r + 1):
        for j in range(r + 1):
            for k in range(r + 1):
                b = (i, j, k)
                if member(b):
                    continue
                if ((i == 0 or member((i - 1, j, k)))
                        and (j == 0 or member((i, j - 1, k)))
                        and (k == 0 or member((i, j, k - 1)))):
                    out.add(b)
    return out


def _key(b):
    return (b[0] + b[1] + b[2], b)


def count_configurations(legs: LegTriple, K: int, budget: int | None = None) -> list[int]:
    """Number of configurations with n added boxes, n = 0..K (depth-first).

    Boxes are added in increasing order of (i+j+k, i, j, k), a linear
    extension of the box order, so each configuration is produced exactly
    once: from its own sorted listing.
    """
    if K < 0:
        raise ValueError("K must be non-negative")
    budget = default_budget() if budget is None else budget
    member = leg_membership(legs)
    added: set = set()
    counts = [0] * (K + 1)
    visited = 0

    def present(b) -> bool:
        return b in added or member(b)

    def addable(b) -> bool:
        i, j, k = b
        return (not present(b)
                and (i == 0 or present((i - 1, j, k)))
                and (j == 0 or present((i, j - 1, k)))
                and (k == 0 or present((i, j, k - 1))))

    def walk(n, last, frontier):
        nonlocal visited
        visited += 1
        if visited > budget:
            raise VertexBudgetExceeded(
                f"vertex enumeration for legs {[list(x) for x in legs]} with K={K} "
                f"exceeded the budget of {budget} states")
        counts[n] += 1
        if n == K:
            return
        for b in sorted((c for c in frontier if _key(c) > last), key=_key):
            added.add(b)
            i, j, k = b
            grown = [c for c in ((i + 1, j, k), (i, j + 1, k), (i, j, k + 1)) if addable(c)]
            walk(n + 1, _key(b), (frontier - {b}).union(grown))
            added.discard(b)

    walk(0, (-1, ()), frozenset(_initial_addable(legs, member)))
    return counts


def count_configurations_bfs(legs: LegTriple, K: int) -> list[int]:
    """Level-by-level closure with set deduplication; independent of the DFS order."""
    member = leg_membership(legs)
    start = _initial_addable(legs, member)
    level = {frozenset()}
    counts = [1]
    for _ in range(K):
        nxt = set()
        for conf in level:
            cand = set(start)
            for (i, j, k) in conf:
                cand.update(((i + 1, j, k), (i, j + 1, k), (i, j, k + 1)))
            for b in cand:
                if b in conf or member(b):
                    continue
                i, j, k = b
                if all(c[0] < 0 or c[1] < 0 or c[2] < 0 or c in conf or member(c)
                       for c in ((i - 1, j, k), (i, j - 1, k), (i, j, k - 1))):
                    nxt.add(conf | {b})
        level = nxt
        counts.append(len(level))
    return counts


_memo: dict = {}
_memo_lock = threading.Lock()


def vertex_series(legs: LegTriple, K: int, budget: int | None = None) -> PLaurent:
    """Generating function sum_n #configs(n) p^n, exact on [0, K]."""
    legs = LegTriple(*(Partition(x) for x in legs))
    key = (legs, K)
    with _memo_lock:
        hit = _memo.get(key)
    if hit is None:
        # a longer cached run contains every shorter one
        with _memo_lock:
            longer = [v for (lg, k), v in _memo.items() if lg == legs and k >= K]
        counts = longer[0][: K + 1] if longer else count_configurations(legs, K, budget)
        with _memo_lock:
            _memo[key] = counts
        hit = counts
    return PLaurent(dict(enumerate(hit)), K)


def clear_cache() -> None:
    with _memo_lock:
        _memo.clear()


def vertex_ratio(num: LegTriple, den: LegTriple, K: int, budget: int | None = None) -> PLaurent:
    return pl_mul(vertex_series(num, K, budget), pl_recip(vertex_series(den, K, budget)))


def normalized_ratio(legs: LegTriple, K: int, budget: int | None = None) -> PLaurent:
    """V_legs / V_(0,0,leg3) graded by holomorphic Euler characteristic.

    Box counting undercounts chi(O_Z) of the union curve by the overlap of the
    third leg with the first two, hence the shift by ``p**-overlap``.
    """
    den = LegTriple(EMPTY, EMPTY, legs.leg3)
    return vertex_ratio(legs, den, K, budget).shift(-leg_overlap(legs))


_ONE_MINUS_P = PLaurent({0: 1, 1: -1})


def f_series(a_max: int, K: int, budget: int | None = None) -> QSeries:
    """sum_a F(a) q^a with F(a) = (1-p) sum_{alpha |- a} V_{0,(1),alpha}/V_{0,0,alpha}."""
    terms = []
    for a in range(a_max + 1):
        acc = None
        for alpha in partitions_of(a):
            r = normalized_ratio(LegTriple(EMPTY, BOX, alpha), K, budget)
            acc = r if acc is None else acc + r
        terms.append(pl_mul(_ONE_MINUS_P, acc))
    return QSeries(terms)


def n_series(b_max: int, K: int, budget: int | None = None) -> QSeries:
    """sum_b N(b) q^b with N(b) = sum_{beta |- b} V_{(1),(1),beta}/V_{0,0,beta}."""
    terms = []
    for b in range(b_max + 1):
        acc = None
        for beta in partitions_of(b):
            r = normalized_ratio(LegTriple(BOX, BOX, beta), K, budget)
            acc = r if acc is None else acc + r
        terms.append(acc)
    return QSeries(terms)
