"""Integer partitions: vertex legs and monomial thickenings.

Ferrers convention used everywhere in the package: cell ``(i, j)`` belongs to
``lam`` iff ``0 <= j < lam[i]`` (row ``i``, column ``j``).
"""

from __future__ import annotations

import operator

from functools import lru_cache


class Partition(tuple):
    """A weakly decreasing tuple of positive integers."""

    def __new__(cls, parts=()):
        parts = tuple(operator.index(x) for x in parts)
        if any(x <= 0 for x in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def cells(self):
        for i, row in enumerate(self):
            for j in range(row):
                yield i, j

    def __contains__(self, cell) -> bool:
        if isinstance(cell, tuple) and len(cell) == 2:
            i, j = cell
            return 0 <= i < len(self) and 0 <= j < self[i]
        return super().__contains__(cell)

    def conjugate(self) -> Partition:
        return conjugate(self)

    def to_json(self) -> list[int]:
        return list(self)

    def __repr__(self):
        return f"Partition({list(self)})"


EMPTY = Partition()
BOX = Partition((1,))


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return EMPTY
    return Partition(sum(1 for x in lam if x > j) for j in range(lam[0]))


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[Partition, ...]:
    if n == 0:
        return (EMPTY,)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append(Partition((first,) + rest))
    return tuple(out)


def partitions_of(n: int) -> list[Partition]:
    """All partitions of n in reverse-lexicographic order, e.g. (4), (3,1), (2,2), ..."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return list(_partitions(n, n))


def partition_count(n: int) -> int:
    """p(n) from Euler's pentagonal number recurrence."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[n]
