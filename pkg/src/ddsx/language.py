"""Text notation for systems, equations and solution sets.

Grammar (whitespace is insignificant)::

    system   := "0" | cycle { "+" cycle }
    cycle    := "C" "(" INT "," INT ")"          # C(period, count)
    equation := lterm { "+" lterm } "=" system
    lterm    := "(" system ")" "*" VAR [ "^" INT ]
    VAR      := "X" INT

``parse_expression`` accepts a looser arithmetic form for the ``eval``
command: sums, products, ``^`` powers, parentheses, and bare integers
(``k`` is ``k`` fixed points, so ``3 * S`` replicates ``S``).
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .colored_tree import ColoredTree
from .cycles import EMPTY, CycleSet, InvalidComponentError, power
from .pipeline import Assignment, Equation, EquationError, Term

FORMATS = ("text", "json", "csv")
MAX_EXPONENT = 1000
MAX_DIGITS = 1000


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<int>\d+)|(?P<var>X\d+)|(?P<cyc>C)|(?P<op>[()+*^=,;])"
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "ws":
            for i, ch in enumerate(chunk):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        elif kind == "op":
            tokens.append(Token(chunk, chunk, line, col))
        else:
            tokens.append(Token(kind, chunk, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise ParseError(f"{message}, found {found!r}", tok.line, tok.column)

    def accept(self, kind: str) -> Optional[Token]:
        if self.tok.kind == kind:
            tok = self.tok
            self.i += 1
            return tok
        return None

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        tok = self.accept(kind)
        if tok is None:
            self.fail(f"expected {what or repr(kind)}")
        return tok

    def integer(self, what: str) -> int:
        tok = self.expect("int", what)
        if len(tok.text) > MAX_DIGITS:
            self.fail(f"{what} has too many digits", tok)
        return int(tok.text)

    def exponent(self) -> int:
        exp = self.integer("exponent")
        if exp > MAX_EXPONENT:
            raise EquationError(f"exponent {exp} exceeds the limit of {MAX_EXPONENT}")
        return exp

    def end(self) -> None:
        if self.tok.kind != "eof":
            self.fail("expected end of input")

    def cycle(self) -> CycleSet:
        self.expect("cyc", "'C'")
        self.expect("(")
        period = self.integer("period")
        self.expect(",")
        count = self.integer("count")
        self.expect(")")
        if period < 1 or count < 1:
            raise InvalidComponentError(f"C({period},{count}): period and count must be positive")
        return CycleSet([(period, count)])

    def system(self) -> CycleSet:
        tok = self.tok
        if tok.kind == "int":
            if self.integer("empty system") != 0:
                self.fail("expected 'C' or '0'", tok)
            return EMPTY
        total = self.cycle()
        while self.tok.kind == "+" and self.tokens[self.i + 1].kind == "cyc":
            self.i += 1
            total = total + self.cycle()
        return total

    def var(self) -> str:
        tok = self.expect("var", "variable X<n>")
        if len(tok.text) > MAX_DIGITS:
            self.fail("variable index has too many digits", tok)
        index = int(tok.text[1:])
        if index < 1:
            self.fail("variable index must be positive", tok)
        return f"X{index}"

    def lterm(self) -> Term:
        self.expect("(")
        coeff = self.system()
        self.expect(")")
        self.expect("*")
        var = self.var()
        exp = 1
        if self.accept("^"):
            exp = self.exponent()
            if exp < 1:
                raise EquationError(f"exponent of {var} must be >= 1")
        if not coeff:
            raise EquationError(f"coefficient of {var} is empty")
        return Term(coeff, var, exp)

    def equation(self) -> Equation:
        terms = [self.lterm()]
        while self.accept("+"):
            terms.append(self.lterm())
        self.expect("=")
        rhs = self.system()
        return Equation.build(terms, rhs)

    # loose arithmetic for eval
    def expr(self) -> CycleSet:
        total = self.product()
        while self.accept("+"):
            total = total + self.product()
        return total

    def product(self) -> CycleSet:
        value = self.factor()
        while self.accept("*"):
            value = value * self.factor()
        return value

    def factor(self) -> CycleSet:
        value = self.atom()
        if self.accept("^"):
            value = power(value, self.exponent())
        return value

    def atom(self) -> CycleSet:
        if self.tok.kind == "cyc":
            return self.cycle()
        if self.tok.kind == "int":
            return CycleSet([(1, self.integer("integer"))])
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value
        self.fail("expected a cycle, an integer or '('")


def parse_system(text: str) -> CycleSet:
    p = _Parser(text)
    value = p.system()
    p.end()
    return value


def parse_equation(text: str) -> Equation:
    p = _Parser(text)
    eq = p.equation()
    p.end()
    return eq


def parse_expression(text: str) -> CycleSet:
    p = _Parser(text)
    value = p.expr()
    p.end()
    return value


def parse_assignment(text: str) -> dict[str, CycleSet]:
    """``"X1 = C(1,1); X2 = 0"`` to a variable map."""
    p = _Parser(text)
    out: dict[str, CycleSet] = {}
    while True:
        tok = p.tok
        var = p.var()
        if var in out:
            p.fail(f"{var} assigned twice", tok)
        p.expect("=")
        out[var] = p.system()
        if not p.accept(";") or p.tok.kind == "eof":
            break
    p.end()
    return out


def parse_solution_set(text: str) -> list[CycleSet]:
    """One system per non-blank line, as written by ``print_solution_set``."""
    return [parse_system(line) for line in text.splitlines() if line.strip()]


def format_system(s: CycleSet) -> str:
    return str(s)


def format_equation(eq: Equation) -> str:
    return str(eq)


def _records(s: CycleSet) -> list[dict]:
    return [{"period": p, "count": m} for p, m in s]


def _from_records(records: Iterable[dict]) -> CycleSet:
    return CycleSet((r["period"], r["count"]) for r in records)


def equation_to_json(eq: Equation) -> dict:
    return {
        "terms": [{"coeff": _records(t.coeff), "var": t.var, "exp": t.exp} for t in eq.terms],
        "rhs": _records(eq.rhs),
    }


def equation_from_json(data: dict) -> Equation:
    terms = [Term(_from_records(t["coeff"]), t["var"], t.get("exp", 1)) for t in data["terms"]]
    return Equation.build(terms, _from_records(data["rhs"]))


def solution_set_from_json(text: str) -> list[CycleSet]:
    return [_from_records(sol) for sol in json.loads(text)["solutions"]]


def print_solution_set(solutions: Sequence[CycleSet], fmt: str = "text") -> str:
    """Canonical rendering; solutions are sorted before printing."""
    ordered = sorted(set(solutions))
    if fmt == "text":
        return "".join(f"{s}\n" for s in ordered)
    if fmt == "json":
        return json.dumps({"solutions": [_records(s) for s in ordered]}) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["solution", "period", "count"])
        for i, s in enumerate(ordered):
            for p, m in s:
                w.writerow([i, p, m])
            if not s:
                w.writerow([i, "", ""])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def print_assignments(assignments: Sequence[Assignment], fmt: str = "text") -> str:
    ordered = sorted(set(assignments))
    if fmt == "text":
        lines = []
        for a in ordered:
            parts = [f"{v} = {x}" for v, x in a.monomials]
            for v, roots in a.bases:
                parts.append(f"{v} in {{{', '.join(str(r) for r in roots)}}}")
            lines.append("; ".join(parts))
        return "".join(f"{line}\n" for line in lines)
    if fmt == "json":
        payload = [
            {
                "values": {v: _records(x) for v, x in a.monomials},
                "bases": {v: [_records(r) for r in roots] for v, roots in a.bases},
            }
            for a in ordered
        ]
        return json.dumps({"assignments": payload}) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["assignment", "variable", "kind", "value"])
        for i, a in enumerate(ordered):
            for v, x in a.monomials:
                w.writerow([i, v, "value", str(x)])
            for v, roots in a.bases:
                for r in roots:
                    w.writerow([i, v, "base", str(r)])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


TABLE_COLUMNS = ("Node", "Splits", "Node solution", "Subtree solutions set")


def node_table_records(tree: ColoredTree) -> list[dict]:
    rows = []
    for node in tree.rows():
        rows.append(
            {
                "node": node.value,
                "splits": [{"color": c, "parts": list(parts)} for c, parts in node.splits],
                "node_solution": str(node.node_solution) if node.node_solution else None,
                "subtree_solutions": [str(s) for s in node.subtree_solutions],
            }
        )
    return rows


def format_node_table(tree: ColoredTree, fmt: str = "text") -> str:
    records = node_table_records(tree)
    if fmt == "json":
        return json.dumps({"p": tree.p, "n": tree.n, "q": tree.q, "rows": records}) + "\n"
    cells = []
    for r in records:
        splits = " ".join("[" + ",".join(map(str, s["parts"])) + "]" for s in r["splits"]) or "{}"
        cells.append(
            (
                str(r["node"]),
                splits,
                r["node_solution"] or "{}",
                "{" + ", ".join(r["subtree_solutions"]) + "}",
            )
        )
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TABLE_COLUMNS)
        w.writerows(cells)
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(TABLE_COLUMNS)]
    lines = [" | ".join(h.ljust(w) for h, w in zip(TABLE_COLUMNS, widths)).rstrip()]
    lines.append("-+-".join("-" * w for w in widths))
    for c in cells:
        lines.append(" | ".join(x.ljust(w) for x, w in zip(c, widths)).rstrip())
    return "\n".join(lines) + "\n"
