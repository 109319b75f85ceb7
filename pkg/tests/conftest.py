from functools import reduce

from hypothesis import strategies as st

from ddsx.cycles import ONE, CycleSet, multiply


def cycle_sets(max_entries=6, max_period=30, max_count=5, min_entries=0):
    entry = st.tuples(st.integers(1, max_period), st.integers(1, max_count))
    return st.lists(entry, min_size=min_entries, max_size=max_entries).map(CycleSet)


def repeated_product(s: CycleSet, n: int) -> CycleSet:
    return reduce(multiply, [s] * n, ONE)


def random_equation(rng, max_vars=2, max_coeff=2, max_rhs=6, max_period=6, exps=(1, 1, 1, 2)):
    """A small random equation; coefficients and right side drawn from ``rng``."""
    from ddsx.pipeline import Equation, Term

    terms = []
    for i in range(rng.randint(1, max_vars)):
        coeff = CycleSet.from_periods(rng.randint(1, max_period) for _ in range(rng.randint(1, max_coeff)))
        terms.append(Term(coeff, f"X{i + 1}", rng.choice(exps)))
    rhs = CycleSet.from_periods(rng.randint(1, max_period) for _ in range(rng.randint(1, max_rhs)))
    return Equation.build(terms, rhs)


def planted_equation(rng, **kw):
    """A random equation whose right side is built from a random assignment."""
    from ddsx.pipeline import Equation, evaluate

    eq = random_equation(rng, **kw)
    values = {}
    for t in eq.terms:
        base = CycleSet.from_periods(rng.choice([1, 2, 3, 6]) for _ in range(rng.randint(0, 2)))
        values[t.var] = base**t.exp
    rhs = evaluate(eq, values)
    if rhs.size() > kw.get("max_rhs", 6) or not rhs:
        return eq
    return Equation(eq.terms, rhs)


def normalize_brute(eq, found):
    """Brute-force base maps grouped the way ``solve_equation`` reports them."""
    from ddsx.pipeline import Assignment

    grouped = {}
    for base in found:
        monomials = tuple((t.var, base[t.var] ** t.exp) for t in eq.terms)
        grouped.setdefault(monomials, {v: set() for v in base})
        for v, x in base.items():
            grouped[monomials][v].add(x)
    out = []
    for monomials, roots in grouped.items():
        bases = tuple((t.var, tuple(sorted(roots[t.var]))) for t in eq.terms if t.exp > 1)
        out.append(Assignment(monomials, bases))
    return sorted(out)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
