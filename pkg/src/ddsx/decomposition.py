"""Change-making over divisor coin systems.

Partitions are tuples sorted in descending order; ``None`` from ``mcda``
means the amount cannot be paid with the given coins.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence

from .cycles import divisors_of

Partition = tuple[int, ...]


def divisors(q: int) -> list[int]:
    """Divisors of ``q``, largest first."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    return divisors_of(q)[::-1]


def _coin_list(coins: Iterable[int]) -> list[int]:
    out = sorted(set(coins), reverse=True)
    if out and out[-1] < 1:
        raise ValueError(f"coins must be positive, got {out[-1]}")
    return out


def mcda(amount: int, coins: Sequence[int]) -> Optional[Partition]:
    """A minimum-cardinality partition of ``amount`` into ``coins``.

    Exact dynamic programming; divisor coin systems are not always greedy
    friendly (``6`` with coins ``4, 3, 1`` is ``3 + 3``, not ``4 + 1 + 1``).
    Among optimal partitions the lexicographically greatest is returned.
    """
    if amount < 1:
        raise ValueError(f"amount must be >= 1, got {amount}")
    usable = [c for c in _coin_list(coins) if c <= amount]
    inf = amount + 1
    fewest = [0] + [inf] * amount
    for a in range(1, amount + 1):
        best = inf
        for c in usable:
            if c <= a and fewest[a - c] + 1 < best:
                best = fewest[a - c] + 1
        fewest[a] = best
    if fewest[amount] >= inf:
        return None

    parts = []
    rest = amount
    while rest:
        # largest coin that keeps the remainder optimal
        for c in usable:
            if c <= rest and fewest[rest - c] == fewest[rest] - 1:
                parts.append(c)
                rest -= c
                break
    return tuple(parts)


def iter_partitions(amount: int, coins: Sequence[int]) -> Iterator[Partition]:
    """Partitions of ``amount`` into ``coins`` in descending lexicographic order."""
    if amount < 1:
        raise ValueError(f"amount must be >= 1, got {amount}")
    usable = [c for c in _coin_list(coins) if c <= amount]
    parts: list[int] = []

    def walk(start: int, rest: int) -> Iterator[Partition]:
        if rest == 0:
            yield tuple(parts)
            return
        for i in range(start, len(usable)):
            c = usable[i]
            if c <= rest:
                parts.append(c)
                yield from walk(i, rest - c)
                parts.pop()

    yield from walk(0, amount)


def all_partitions(amount: int, coins: Sequence[int]) -> list[Partition]:
    return list(iter_partitions(amount, coins))


def count_partitions(amount: int, coins: Sequence[int]) -> int:
    """Number of partitions, by the classic coin-counting recurrence."""
    ways = [1] + [0] * amount
    for c in set(coins):
        for a in range(c, amount + 1):
            ways[a] += ways[a - c]
    return ways[amount]
