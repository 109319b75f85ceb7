"""Arithmetic on the periodic part of finite dynamical systems.

A system restricted to its strongly connected components is a multiset of
cycles.  ``CycleSet`` stores it canonically as ``((period, count), ...)``
sorted by period, and implements the semiring operations:

* sum: disjoint union, i.e. multiset union of cycles;
* product: Cartesian product of dynamics, where a ``p``-cycle times a
  ``q``-cycle gives ``gcd(p, q)`` cycles of period ``lcm(p, q)``.

Python integers are unbounded, so multiplicities never wrap.
"""

from __future__ import annotations

import os
from collections import Counter
from functools import reduce
from math import factorial, gcd, lcm, prod
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "CycleSet",
    "InvalidComponentError",
    "BudgetExceededError",
    "DEFAULT_ROOT_BUDGET",
    "EMPTY",
    "ONE",
    "canonicalize",
    "add",
    "multiply",
    "scalar_multiply",
    "power",
    "nth_root",
    "divisors_of",
]

DEFAULT_ROOT_BUDGET = 10**6


class InvalidComponentError(ValueError):
    """A component with a non-positive period or a negative count."""


class BudgetExceededError(RuntimeError):
    """A bounded search ran out of candidates before finishing."""

    def __init__(self, budget: int, what: str = "search"):
        super().__init__(f"{what} budget of {budget} candidates exhausted")
        self.budget = budget


RawComponents = Union[Iterable[tuple[int, int]], Mapping[int, int]]


def _check_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidComponentError(f"{name} must be an integer, got {value!r}")
    return value


class CycleSet:
    """Immutable canonical multiset of cycles.

    ``CycleSet([(2, 1), (2, 2)])`` is two-cycles with multiplicity three.
    ``+`` is the sum, ``*`` the product (an ``int`` on either side of ``*``
    replicates), ``**`` the power.
    """

    __slots__ = ("_entries", "_hash")

    def __init__(self, components: RawComponents = ()):
        items = components.items() if isinstance(components, Mapping) else components
        merged: Counter[int] = Counter()
        for entry in items:
            try:
                period, count = entry
            except (TypeError, ValueError):
                raise InvalidComponentError(f"expected (period, count), got {entry!r}") from None
            period = _check_int(period, "period")
            count = _check_int(count, "count")
            if period < 1:
                raise InvalidComponentError(f"period must be >= 1, got {period}")
            if count < 0:
                raise InvalidComponentError(f"count must be >= 0, got {count}")
            if count:
                merged[period] += count
        self._entries: tuple[tuple[int, int], ...] = tuple(sorted(merged.items()))
        self._hash = hash(self._entries)

    @classmethod
    def _trusted(cls, counter: Mapping[int, int]) -> CycleSet:
        # counter already holds positive periods and counts
        obj = cls.__new__(cls)
        obj._entries = tuple(sorted((p, m) for p, m in counter.items() if m))
        obj._hash = hash(obj._entries)
        return obj

    @classmethod
    def from_periods(cls, periods: Iterable[int]) -> CycleSet:
        """One cycle per listed period, repeats allowed."""
        return cls((p, 1) for p in periods)

    @classmethod
    def cycle(cls, period: int, count: int = 1) -> CycleSet:
        return cls([(period, count)])

    @property
    def entries(self) -> tuple[tuple[int, int], ...]:
        return self._entries

    @property
    def periods(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self._entries)

    def count(self, period: int) -> int:
        """Number of cycles of exactly this period."""
        for p, m in self._entries:
            if p == period:
                return m
        return 0

    def size(self) -> int:
        """Total number of cycles (attractors)."""
        return sum(m for _, m in self._entries)

    def states(self) -> int:
        """Total number of periodic states."""
        return sum(p * m for p, m in self._entries)

    def expand(self) -> list[int]:
        """Periods listed once per cycle, ascending."""
        return [p for p, m in self._entries for _ in range(m)]

    def as_counter(self) -> Counter[int]:
        return Counter(dict(self._entries))

    def includes(self, other: CycleSet) -> bool:
        """Multiset inclusion ``other <= self``."""
        mine = dict(self._entries)
        return all(mine.get(p, 0) >= m for p, m in other._entries)

    def __sub__(self, other: CycleSet) -> CycleSet:
        if not isinstance(other, CycleSet):
            return NotImplemented
        if not self.includes(other):
            raise ValueError(f"{other} is not contained in {self}")
        diff = self.as_counter()
        diff.subtract(dict(other._entries))
        return CycleSet._trusted(diff)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycleSet):
            return NotImplemented
        return self._entries == other._entries

    def __lt__(self, other: CycleSet) -> bool:
        if not isinstance(other, CycleSet):
            return NotImplemented
        return self._entries < other._entries

    def __hash__(self) -> int:
        return self._hash

    def __add__(self, other: CycleSet) -> CycleSet:
        if not isinstance(other, CycleSet):
            return NotImplemented
        return add(self, other)

    def __mul__(self, other) -> CycleSet:
        if isinstance(other, CycleSet):
            return multiply(self, other)
        if isinstance(other, int) and not isinstance(other, bool):
            return scalar_multiply(other, self)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> CycleSet:
        return power(self, n)

    def __repr__(self) -> str:
        return f"CycleSet({list(self._entries)!r})"

    def __str__(self) -> str:
        if not self._entries:
            return "0"
        return " + ".join(f"C({p},{m})" for p, m in self._entries)


EMPTY = CycleSet()
ONE = CycleSet([(1, 1)])


def canonicalize(raw: RawComponents) -> CycleSet:
    """Merge equal periods, drop zero counts, sort by period."""
    return CycleSet(raw)


def add(a: CycleSet, b: CycleSet) -> CycleSet:
    total = a.as_counter()
    total.update(dict(b.entries))
    return CycleSet._trusted(total)


def multiply(a: CycleSet, b: CycleSet) -> CycleSet:
    result: Counter[int] = Counter()
    for p, m in a.entries:
        for q, n in b.entries:
            g = gcd(p, q)
            result[p // g * q] += m * n * g
    return CycleSet._trusted(result)


def scalar_multiply(k: int, s: CycleSet) -> CycleSet:
    k = _check_int(k, "scalar")
    if k < 0:
        raise ValueError(f"scalar must be >= 0, got {k}")
    return CycleSet._trusted({p: m * k for p, m in s.entries})


def _compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` non-negative integers summing to ``n``."""
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def power(s: CycleSet, n: int) -> CycleSet:
    """``s`` multiplied by itself ``n`` times, via the multinomial closed form.

    Each cycle is a separate factor (a count above one expands into that many
    cycles).  For an exponent vector ``k`` over the cycles, let ``T`` be the
    indices with ``k_t > 0``; the term contributes
    ``multinomial(n; k) * prod(p_t ** k_t) / lcm_T`` cycles of period
    ``lcm_T = lcm(p_t for t in T)``.  When ``T`` is a single index this is
    ``p ** (n - 1)`` cycles of period ``p``.  The per-term factor
    ``prod(p_t) / lcm_T`` equals ``gcd`` only for two-element ``T``.
    """
    n = _check_int(n, "exponent")
    if n < 0:
        raise ValueError(f"exponent must be >= 0, got {n}")
    if n == 0:
        return ONE
    if n == 1:
        return s
    periods = s.expand()
    if not periods:
        return EMPTY

    result: Counter[int] = Counter()
    for p in periods:
        result[p] += p ** (n - 1)
    if len(periods) == 1:
        return CycleSet._trusted(result)

    n_fact = factorial(n)
    for ks in _compositions(n, len(periods)):
        if n in ks:
            continue
        support = [(p, k) for p, k in zip(periods, ks) if k]
        period = reduce(lcm, (p for p, _ in support))
        coeff = n_fact // prod(factorial(k) for _, k in support)
        states = prod(p**k for p, k in support)
        result[period] += coeff * (states // period)
    return CycleSet._trusted(result)


def divisors_of(q: int) -> list[int]:
    """Divisors of ``q`` in ascending order."""
    small, large = [], []
    d = 1
    while d * d <= q:
        if q % d == 0:
            small.append(d)
            if d * d != q:
                large.append(q // d)
        d += 1
    return small + large[::-1]


def _root_budget_from_env() -> int:
    raw = os.environ.get("DDSX_ROOT_BUDGET")
    if raw is None:
        return DEFAULT_ROOT_BUDGET
    budget = int(raw)
    if budget < 1:
        raise ValueError(f"DDSX_ROOT_BUDGET must be positive, got {raw!r}")
    return budget


def nth_root(v: CycleSet, n: int, budget: int | None = None) -> list[CycleSet]:
    """Every ``r`` with ``r ** n == v``, ascending.

    A cycle of period ``p`` in ``r`` forces at least ``p ** (n - 1)`` cycles of
    period ``p`` in ``v``, so only such periods are candidates and their
    counts are capped accordingly.  The number of periodic states must also
    match: ``states(r) ** n == states(v)``.

    ``budget`` (default ``DDSX_ROOT_BUDGET`` or 10**6) bounds the number of
    candidates examined; running out raises ``BudgetExceededError``.
    """
    n = _check_int(n, "exponent")
    if n < 1:
        raise ValueError(f"root degree must be >= 1, got {n}")
    if budget is None:
        budget = _root_budget_from_env()
    if n == 1:
        return [v]
    if not v:
        return [EMPTY]

    target_states = v.states()
    caps = []
    for p, m in v.entries:
        cap = m // p ** (n - 1)
        if cap:
            caps.append((p, cap))

    found: list[CycleSet] = []
    examined = 0
    chosen: list[tuple[int, int]] = []

    def search(i: int, states: int) -> None:
        nonlocal examined
        if states**n > target_states:
            return
        if i == len(caps):
            examined += 1
            if examined > budget:
                raise BudgetExceededError(budget, "root")
            if states**n == target_states:
                r = CycleSet._trusted(dict(chosen))
                if power(r, n) == v:
                    found.append(r)
            return
        p, cap = caps[i]
        for k in range(cap + 1):
            if k:
                chosen.append((p, k))
            search(i + 1, states + p * k)
            if k:
                chosen.pop()
            if (states + p * (k + 1)) ** n > target_states:
                break

    search(0, 0)
    found.sort()
    return found
