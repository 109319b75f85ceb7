"""Solving sums of monomials ``a_1 * X_1^w_1 + ... + a_k * X_k^w_k = C``.

Every coefficient is split into single cycles ("cells").  A candidate
solution decides, for each right-hand period, how many of its cycles each
cell produces; over one period that is a stars-and-bars distribution of
``n_j`` cycles into ``sum(S_i)`` cells.  For a fixed distribution each cell
``C(p,1) * X_i`` is a sum of simple equations ``C(p,1) * X == C(q,m)``, one
per period, because every cycle of ``X_i`` lands in exactly one period.
The cells of the same variable must agree, so their candidate sets are
intersected.
"""

from __future__ import annotations

import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from math import comb, prod
from typing import Iterator, Mapping, Optional, Union

from .colored_tree import solve_simple
from .cycles import EMPTY, CycleSet, multiply, nth_root, power


class EquationError(ValueError):
    pass


class MissingVariableError(KeyError):
    pass


def variable_key(name: str):
    m = re.fullmatch(r"X(\d+)", name)
    return (0, int(m.group(1)), name) if m else (1, 0, name)


@dataclass(frozen=True)
class Term:
    coeff: CycleSet
    var: str
    exp: int = 1


@dataclass(frozen=True)
class Equation:
    terms: tuple[Term, ...]
    rhs: CycleSet

    def __post_init__(self):
        if not self.terms:
            raise EquationError("an equation needs at least one term")
        seen = set()
        for t in self.terms:
            if not t.coeff:
                raise EquationError(f"coefficient of {t.var} is empty")
            if t.exp < 1:
                raise EquationError(f"exponent of {t.var} must be >= 1, got {t.exp}")
            if t.var in seen:
                raise EquationError(f"variable {t.var} appears in more than one term")
            seen.add(t.var)

    @classmethod
    def build(cls, terms, rhs: CycleSet) -> Equation:
        """Fold repeated variables by summing their coefficients and sort terms."""
        folded: dict[str, list] = {}
        for t in terms:
            t = t if isinstance(t, Term) else Term(*t)
            if t.var in folded:
                coeff, exp = folded[t.var]
                if exp != t.exp:
                    raise EquationError(f"variable {t.var} used with exponents {exp} and {t.exp}")
                folded[t.var] = [coeff + t.coeff, exp]
            else:
                folded[t.var] = [t.coeff, t.exp]
        ordered = sorted(folded, key=variable_key)
        return cls(tuple(Term(folded[v][0], v, folded[v][1]) for v in ordered), rhs)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(t.var for t in self.terms)

    def cells(self) -> list[tuple[int, int]]:
        """``(term index, period)`` per coefficient cycle, peeling order."""
        return [(i, p) for i, t in enumerate(self.terms) for p in t.coeff.expand()]

    def __str__(self) -> str:
        lhs = " + ".join(
            f"({t.coeff}) * {t.var}" + (f"^{t.exp}" if t.exp != 1 else "") for t in self.terms
        )
        return f"{lhs} = {self.rhs}"


@dataclass(frozen=True, order=True)
class Assignment:
    """Values of each ``X_i ** w_i`` and, for ``w_i > 1``, every base root."""

    monomials: tuple[tuple[str, CycleSet], ...]
    bases: tuple[tuple[str, tuple[CycleSet, ...]], ...] = ()

    def __getitem__(self, var: str) -> CycleSet:
        return dict(self.monomials)[var]

    def roots(self, var: str) -> tuple[CycleSet, ...]:
        found = dict(self.bases)
        if var in found:
            return found[var]
        return (self[var],)


@dataclass(frozen=True)
class SolveBounds:
    lower: int
    upper: int


@dataclass
class SolveStats:
    distributions: int = 0
    simple_calls: int = 0
    simple_solves: int = 0
    derivations: int = 0


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 1:
        return [(total,)]
    return [(k,) + rest for k in range(total, -1, -1) for rest in _compositions(total - k, parts - 1)]


def enumerate_assignments(eq: Equation) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Lazily yield every distribution of right-hand cycles over the cells.

    A distribution is a tuple, one entry per right-hand period (ascending),
    holding how many cycles of that period each cell produces.
    """
    width = len(eq.cells())
    per_period = [_compositions(n, width) for _, n in eq.rhs]
    yield from product(*per_period)


def distribution_count(eq: Equation) -> int:
    width = len(eq.cells())
    return prod(comb(n + width - 1, width - 1) for _, n in eq.rhs)


def z_bounds(eq: Equation) -> SolveBounds:
    """Bounds on the number of simple-equation solves over all distributions."""
    width = len(eq.cells())
    lower = distribution_count(eq) * len(eq.rhs)
    return SolveBounds(lower, lower * width)


class _SimpleCache:
    """Memo for ``solve_simple`` that counts raw and distinct requests."""

    def __init__(self):
        self._memo: dict[tuple[int, int, int], list[CycleSet]] = {}
        self._lock = threading.Lock()
        self.calls = 0
        self.solves = 0

    def __call__(self, p: int, n: int, q: int) -> list[CycleSet]:
        key = (p, n, q)
        with self._lock:
            self.calls += 1
            hit = self._memo.get(key)
        if hit is not None:
            return hit
        result = solve_simple(p, n, q)
        with self._lock:
            if key not in self._memo:
                self._memo[key] = result
                self.solves += 1
            return self._memo[key]


def _sum_product(groups: list[list[CycleSet]]) -> set[CycleSet]:
    out = {EMPTY}
    for group in groups:
        out = {a + b for a in out for b in group}
        if not out:
            break
    return out


def evaluate(eq: Equation, monomials: Mapping[str, CycleSet]) -> CycleSet:
    """Left-hand side with each ``X_i ** w_i`` replaced by ``monomials[X_i]``."""
    total = EMPTY
    for t in eq.terms:
        if t.var not in monomials:
            raise MissingVariableError(t.var)
        total = total + multiply(t.coeff, monomials[t.var])
    return total


def verify_assignment(eq: Equation, a: Union[Assignment, Mapping[str, CycleSet]]) -> bool:
    """Check a solution exactly.

    A plain mapping gives base values, raised to each term's exponent.  An
    ``Assignment`` gives monomial values, and its base roots are checked too.
    """
    if isinstance(a, Assignment):
        monomials = dict(a.monomials)
        exps = {t.var: t.exp for t in eq.terms}
        for var, roots in a.bases:
            if any(power(r, exps.get(var, 1)) != monomials.get(var) for r in roots):
                return False
    else:
        monomials = {}
        for t in eq.terms:
            if t.var not in a:
                raise MissingVariableError(t.var)
            monomials[t.var] = power(a[t.var], t.exp)
    return evaluate(eq, monomials) == eq.rhs


@dataclass
class _Context:
    eq: Equation
    cells: list[tuple[int, int]]
    periods: list[int]
    simple: _SimpleCache
    forbid_empty: bool
    root_budget: Optional[int]
    roots: dict[tuple[CycleSet, int], list[CycleSet]] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def roots_of(self, value: CycleSet, w: int) -> list[CycleSet]:
        key = (value, w)
        with self.lock:
            hit = self.roots.get(key)
        if hit is None:
            hit = nth_root(value, w, self.root_budget)
            with self.lock:
                self.roots[key] = hit
        return hit


def _solve_distribution(ctx: _Context, dist: tuple[tuple[int, ...], ...]) -> list[Assignment]:
    eq = ctx.eq
    per_var: list[Optional[set[CycleSet]]] = [None] * len(eq.terms)
    for c, (i, p) in enumerate(ctx.cells):
        groups = [ctx.simple(p, share[c], q) for q, share in zip(ctx.periods, dist) if share[c]]
        cands = _sum_product(groups)
        per_var[i] = cands if per_var[i] is None else per_var[i] & cands

    choices = []
    for i, t in enumerate(eq.terms):
        options = []
        for x in sorted(per_var[i]):
            if ctx.forbid_empty and not x:
                continue
            roots = tuple(ctx.roots_of(x, t.exp)) if t.exp > 1 else ()
            if t.exp > 1 and not roots:
                continue
            options.append((x, roots))
        if not options:
            return []
        choices.append(options)

    out = []
    for combo in product(*choices):
        monomials = tuple((t.var, x) for t, (x, _) in zip(eq.terms, combo))
        bases = tuple((t.var, r) for t, (_, r) in zip(eq.terms, combo) if t.exp > 1)
        a = Assignment(monomials, bases)
        if evaluate(eq, dict(monomials)) == eq.rhs:
            out.append(a)
    return out


def solve_equation(
    eq: Equation,
    *,
    forbid_empty: bool = False,
    workers: int = 1,
    root_budget: Optional[int] = None,
    stats: Optional[SolveStats] = None,
) -> list[Assignment]:
    """Every assignment satisfying ``eq``, sorted and without duplicates.

    ``forbid_empty`` rejects the empty system as a variable value.
    ``stats``, when given, receives the distribution count, the raw and
    distinct ``solve_simple`` requests and the raw number of derivations.
    """
    ctx = _Context(
        eq=eq,
        cells=eq.cells(),
        periods=[q for q, _ in eq.rhs],
        simple=_SimpleCache(),
        forbid_empty=forbid_empty,
        root_budget=root_budget,
    )
    found: set[Assignment] = set()
    derivations = 0
    count = 0
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for batch in pool.map(lambda d: _solve_distribution(ctx, d), enumerate_assignments(eq)):
                count += 1
                derivations += len(batch)
                found.update(batch)
    else:
        for dist in enumerate_assignments(eq):
            count += 1
            batch = _solve_distribution(ctx, dist)
            derivations += len(batch)
            found.update(batch)

    if stats is not None:
        stats.distributions = count
        stats.simple_calls = ctx.simple.calls
        stats.simple_solves = ctx.simple.solves
        stats.derivations = derivations
    return sorted(found)
