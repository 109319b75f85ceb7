"""Explicit functional graphs and brute-force ground truth.

The graph routines work on actual next-state maps and never use the gcd/lcm
product formula, so they check ``ddsx.cycles`` independently.  The
brute-force solvers share nothing with the colored tree or the contraction
pipeline and serve as their oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd, lcm

from .cycles import CycleSet, InvalidComponentError, divisors_of, multiply, power

MAX_STATES = 10**7


class GraphTooLargeError(OverflowError):
    pass


@dataclass(frozen=True)
class FunctionGraph:
    """A finite next-state map on states ``0 .. size - 1``."""

    next: tuple[int, ...] = ()

    def __post_init__(self):
        n = len(self.next)
        for x, y in enumerate(self.next):
            if not 0 <= y < n:
                raise ValueError(f"state {x} maps outside the graph: {y}")

    @property
    def size(self) -> int:
        return len(self.next)

    def is_bijective(self) -> bool:
        return len(set(self.next)) == self.size


def build_cycle_graph(period: int, count: int = 1) -> FunctionGraph:
    """``count`` disjoint cycles of length ``period``."""
    if period < 1 or count < 1:
        raise InvalidComponentError(f"need period >= 1 and count >= 1, got ({period}, {count})")
    succ = []
    for c in range(count):
        base = c * period
        succ.extend(base + (i + 1) % period for i in range(period))
    return FunctionGraph(tuple(succ))


def graph_of(s: CycleSet) -> FunctionGraph:
    g = FunctionGraph()
    for p, m in s:
        g = graph_sum(g, build_cycle_graph(p, m))
    return g


def graph_sum(a: FunctionGraph, b: FunctionGraph) -> FunctionGraph:
    offset = a.size
    return FunctionGraph(a.next + tuple(y + offset for y in b.next))


def graph_product(a: FunctionGraph, b: FunctionGraph) -> FunctionGraph:
    """State ``(x, y)`` is encoded as ``x * b.size + y``."""
    size = a.size * b.size
    if size > MAX_STATES:
        raise GraphTooLargeError(f"product has {size} states (limit {MAX_STATES})")
    nb = b.size
    return FunctionGraph(tuple(fx * nb + fy for fx in a.next for fy in b.next))


def cycle_structure(g: FunctionGraph) -> CycleSet:
    """Cycle lengths of ``g``; transient states are ignored."""
    # 0 = unvisited, 1 = on current path, 2 = finished
    state = [0] * g.size
    counts: dict[int, int] = {}
    for start in range(g.size):
        if state[start]:
            continue
        path = []
        x = start
        while state[x] == 0:
            state[x] = 1
            path.append(x)
            x = g.next[x]
        if state[x] == 1:
            # closed a new cycle through x
            length = len(path) - path.index(x)
            counts[length] = counts.get(length, 0) + 1
        for y in path:
            state[y] = 2
    return CycleSet(counts)


def brute_force_simple_solutions(p: int, n: int, q: int) -> list[CycleSet]:
    """All ``X`` with ``C(p,1) * X == C(q,n)``, by bounded composition.

    A cycle of period ``s`` in ``X`` yields ``gcd(p, s)`` cycles of period
    ``lcm(p, s)``, so ``s`` must be a divisor of ``q`` with ``lcm(p, s) == q``
    and the gcd weights must add up to ``n``.  Every combination of usable
    periods whose weights sum to ``n`` is emitted.
    """
    if min(p, n, q) < 1:
        raise InvalidComponentError(f"p, n, q must be >= 1, got ({p}, {n}, {q})")
    usable = [(s, gcd(p, s)) for s in divisors_of(q) if p * s // gcd(p, s) == q]
    found: list[CycleSet] = []
    picked: list[tuple[int, int]] = []

    def walk(i: int, remaining: int) -> None:
        if remaining == 0:
            found.append(CycleSet(picked))
            return
        if i == len(usable):
            return
        s, w = usable[i]
        for k in range(remaining // w, -1, -1):
            if k:
                picked.append((s, k))
            walk(i + 1, remaining - k * w)
            if k:
                picked.pop()

    walk(0, n)
    return sorted(found)


def exhaustive_simple_solutions(p: int, n: int, q: int) -> list[CycleSet]:
    """Generate-and-test: every multiset of divisors of ``q`` with at most ``n``
    cycles is checked against ``C(p,1) * X == C(q,n)``.

    The check is the linear-time product rule applied per cycle.  Nothing is
    pruned, which makes this the naive baseline for timing comparisons.
    """
    if min(p, n, q) < 1:
        raise InvalidComponentError(f"p, n, q must be >= 1, got ({p}, {n}, {q})")
    divs = divisors_of(q)
    lands = [p // gcd(p, s) * s == q for s in divs]
    weight = [gcd(p, s) for s in divs]
    found = []
    counts = [0] * len(divs)
    last = len(divs) - 1

    def is_solution() -> bool:
        total = 0
        for i, k in enumerate(counts):
            if k:
                if not lands[i]:
                    return False
                total += k * weight[i]
        return total == n

    def walk(i: int, left: int) -> None:
        for k in range(left + 1):
            counts[i] = k
            if i == last:
                if is_solution():
                    found.append(CycleSet(zip(divs, counts)))
            else:
                walk(i + 1, left - k)
        counts[i] = 0

    walk(0, n)
    return sorted(found)


def _fitting_values(coeff: CycleSet, exp: int, rhs: CycleSet, periods: list[int]):
    """Base values ``x`` (as multisets of ``periods``) with ``coeff * x**exp`` inside ``rhs``."""
    fits = []
    picked: list[int] = []

    def walk(start: int) -> None:
        x = CycleSet.from_periods(picked)
        value = multiply(coeff, power(x, exp))
        if not rhs.includes(value):
            return
        fits.append((x, value))
        if len(picked) == rhs.size():
            return
        for i in range(start, len(periods)):
            picked.append(periods[i])
            walk(i)
            picked.pop()

    walk(0)
    return fits


def brute_force_assignments(eq) -> list[dict[str, CycleSet]]:
    """Every map from variables to base values solving ``eq``, by search.

    Base values range over multisets of divisors of the lcm of the
    right-hand periods with at most as many cycles as the right-hand side.
    Adding a cycle never removes anything from a term's value, so a branch
    stops once the term no longer fits inside the right-hand side.
    """
    rhs = eq.rhs
    periods = divisors_of(lcm(*rhs.periods)) if rhs else []
    per_term = [_fitting_values(t.coeff, t.exp, rhs, periods) for t in eq.terms]
    found = []
    for combo in product(*per_term):
        total = CycleSet()
        for _, value in combo:
            total = total + value
        if total == rhs:
            found.append({t.var: x for t, (x, _) in zip(eq.terms, combo)})
    return found
