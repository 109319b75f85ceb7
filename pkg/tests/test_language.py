import json
import re

import pytest
from hypothesis import given, settings, strategies as st

from conftest import cycle_sets
from ddsx.colored_tree import aggregate, build_tree
from ddsx.cycles import EMPTY, CycleSet, InvalidComponentError
from ddsx.language import (
    ParseError,
    equation_from_json,
    equation_to_json,
    format_node_table,
    node_table_records,
    parse_assignment,
    parse_equation,
    parse_expression,
    parse_solution_set,
    parse_system,
    print_solution_set,
    solution_set_from_json,
)
from ddsx.pipeline import Equation, EquationError, Term
from test_graphs import SOLUTIONS_6_6_6

C = CycleSet


def test_parse_system():
    assert parse_system("C(2,3) + C(5,1)") == C([(2, 3), (5, 1)])
    assert parse_system("C(2,1) + C(2,2)") == C([(2, 3)])
    assert parse_system("0") == EMPTY
    assert parse_system(" C ( 7 , 2 )\n") == C([(7, 2)])


@pytest.mark.parametrize("text", ["C(2,1", "C(2,1) +", "C(2 1)", "00 + C(1,1)", "1", "", "c(2,1)", "C(2,1) C(3,1)"])
def test_parse_system_syntax_errors(text):
    with pytest.raises(ParseError):
        parse_system(text)


def test_parse_error_location():
    with pytest.raises(ParseError) as info:
        parse_system("C(2,1) +\n  C(3,)")
    assert (info.value.line, info.value.column) == (2, 7)


@pytest.mark.parametrize("text", ["C(0,1)", "C(2,0)"])
def test_zero_period_or_count_is_invalid(text):
    with pytest.raises(InvalidComponentError):
        parse_system(text)


def test_parse_equation():
    eq = parse_equation("(C(2,1)) * X1 = C(2,2)")
    assert eq == Equation((Term(C([(2, 1)]), "X1"),), C([(2, 2)]))
    eq = parse_equation("(C(2,1) + C(3,1)) * X1 + (C(4,1)) * X2^2 = C(4,5) + C(12,2)")
    assert [t.exp for t in eq.terms] == [1, 2]
    assert eq.terms[0].coeff == C([(2, 1), (3, 1)])
    assert eq.rhs == C([(4, 5), (12, 2)])
    eq = parse_equation("(C(6,1)) * X1 = C(6,6)")
    assert eq.terms[0].coeff == C([(6, 1)]) and eq.rhs == C([(6, 6)])


def test_parse_equation_folds_repeated_variables():
    eq = parse_equation("(C(2,1)) * X1 + (C(3,1)) * X1 = C(6,1)")
    assert eq.terms == (Term(C([(2, 1), (3, 1)]), "X1"),)


@pytest.mark.parametrize(
    "text, error",
    [
        ("(C(2,1)) * X1^0 = C(2,2)", EquationError),
        ("(0) * X1 = C(2,2)", EquationError),
        ("C(2,1) * X1 = C(2,2)", ParseError),
        ("(C(2,1)) * X0 = C(2,2)", ParseError),
        ("(C(2,1)) * X1", ParseError),
        ("(C(2,1)) X1 = 0", ParseError),
    ],
)
def test_parse_equation_errors(text, error):
    with pytest.raises(error):
        parse_equation(text)


def test_parse_expression():
    assert parse_expression("C(2,1) * C(3,1)") == C([(6, 1)])
    assert parse_expression("(C(1,1) + C(2,1))^2") == C([(1, 1), (2, 4)])
    assert parse_expression("3 * C(2,1)") == C([(2, 3)])
    assert parse_expression("C(2,1) + C(1,1) * C(3,1)") == C([(2, 1), (3, 1)])
    assert parse_expression("0 * C(5,1)") == EMPTY


def test_parse_assignment():
    assert parse_assignment("X1=C(1,1) + C(2,1);X2=0") == {"X1": C([(1, 1), (2, 1)]), "X2": EMPTY}
    assert parse_assignment("X1 = C(3,1);") == {"X1": C([(3, 1)])}
    with pytest.raises(ParseError):
        parse_assignment("X1=C(1,1);X1=0")


def test_print_solution_set():
    assert print_solution_set([C([(3, 2)])]) == "C(3,2)\n"
    assert json.loads(print_solution_set([], "json")) == {"solutions": []}
    text = print_solution_set(SOLUTIONS_6_6_6)
    assert len(text.splitlines()) == 8
    assert parse_solution_set(text) == sorted(SOLUTIONS_6_6_6)
    assert solution_set_from_json(print_solution_set(SOLUTIONS_6_6_6, "json")) == sorted(SOLUTIONS_6_6_6)
    rows = print_solution_set([C([(2, 1), (3, 2)]), EMPTY], "csv").splitlines()
    assert rows == ["solution,period,count", "0,,", "1,2,1", "1,3,2"]


def test_node_table_layout():
    tree = build_tree(2, 5, 4)
    aggregate(tree)
    lines = format_node_table(tree).splitlines()
    assert [c.strip() for c in lines[0].split("|")] == ["Node", "Splits", "Node solution", "Subtree solutions set"]
    assert [c.strip() for c in lines[3].split("|")] == ["4", "[2,2]", "{}", "{C(4,2)}"]
    records = node_table_records(tree)
    assert [r["node"] for r in records] == [5, 4, 2, 1]
    assert records[2]["node_solution"] == "C(4,1)"
    assert format_node_table(tree, "csv").splitlines()[0] == "Node,Splits,Node solution,Subtree solutions set"


def test_equation_json_schema():
    eq = parse_equation("(C(2,1) + C(3,1)) * X1 + (C(4,1)) * X2^2 = C(4,5) + C(12,2)")
    data = equation_to_json(eq)
    assert data["terms"][1] == {"coeff": [{"period": 4, "count": 1}], "var": "X2", "exp": 2}
    assert equation_from_json(json.loads(json.dumps(data))) == eq


equations = st.builds(
    lambda terms, rhs: Equation.build(
        [Term(c, f"X{i + 1}", e) for i, (c, e) in enumerate(terms)], rhs
    ),
    st.lists(st.tuples(cycle_sets(min_entries=1, max_entries=3), st.integers(1, 4)), min_size=1, max_size=3),
    cycle_sets(max_entries=4),
)


@settings(max_examples=200, deadline=None)
@given(cycle_sets(max_period=10**6, max_count=10**9))
def test_system_round_trip(s):
    assert parse_system(str(s)) == s


@settings(max_examples=200, deadline=None)
@given(equations)
def test_equation_round_trip(eq):
    assert parse_equation(str(eq)) == eq
    assert str(parse_equation(str(eq))) == str(eq)


@settings(max_examples=100, deadline=None)
@given(st.lists(cycle_sets(max_entries=3), max_size=6))
def test_solution_set_round_trip(sols):
    assert parse_solution_set(print_solution_set(sols)) == sorted(set(sols))


_INT = r"\d+"
_CYCLE = rf"C\({_INT},{_INT}\)"
_SYSTEM = rf"(?:0+|{_CYCLE}(?:\+{_CYCLE})*)"
_LTERM = rf"\({_SYSTEM}\)\*X0*[1-9]\d*(?:\^{_INT})?"
GRAMMAR = re.compile(rf"{_LTERM}(?:\+{_LTERM})*={_SYSTEM}")
_ALPHABET = "C()X+*^=,;0123456789"


@settings(max_examples=500, deadline=None)
@given(equations, st.data())
def test_parser_agrees_with_grammar_on_mutations(eq, data):
    text = str(eq).replace(" ", "")
    i = data.draw(st.integers(0, len(text) - 1))
    kind = data.draw(st.sampled_from(["delete", "insert", "replace"]))
    ch = data.draw(st.sampled_from(_ALPHABET))
    if kind == "delete":
        mutated = text[:i] + text[i + 1:]
    elif kind == "insert":
        mutated = text[:i] + ch + text[i:]
    else:
        mutated = text[:i] + ch + text[i + 1:]
    in_grammar = GRAMMAR.fullmatch(mutated) is not None
    try:
        parse_equation(mutated)
        syntax_ok = True
    except ParseError:
        syntax_ok = False
    except (InvalidComponentError, EquationError):
        # well-formed text with a zero period/count/exponent or clashing exponents
        syntax_ok = True
    assert syntax_ok == in_grammar, mutated
