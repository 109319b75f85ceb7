"""``ddsx`` command line.

Exit codes: 0 success, 1 no solution (or a failed ``verify``), 2 syntax or
usage error, 3 invalid parameters.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import bench
from .colored_tree import aggregate, build_tree
from .cycles import BudgetExceededError, InvalidComponentError, nth_root
from .language import (
    FORMATS,
    ParseError,
    format_node_table,
    parse_assignment,
    parse_equation,
    parse_expression,
    parse_system,
    print_assignments,
    print_solution_set,
)
from .pipeline import EquationError, MissingVariableError, SolveStats, solve_equation, verify_assignment, z_bounds

EXIT_OK, EXIT_NO_SOLUTION, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")

    parser = _Parser(prog="ddsx", description="Equations over the cycles of finite dynamical systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="evaluate a sum/product expression")
    p.add_argument("expr")

    p = sub.add_parser("solve-simple", parents=[common], help="solve C(p,1) * X = C(q,n)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--trace-table", action="store_true", help="print the colored-tree node table")

    p = sub.add_parser("solve", parents=[common], help="solve a full equation")
    p.add_argument("equation")
    p.add_argument("--forbid-empty", action="store_true", help="reject the empty system as a value")
    p.add_argument("--root-budget", type=int, help="candidate budget for root extraction")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers over distributions")
    p.add_argument("--verbose", action="store_true", help="report solver counters on stderr")

    p = sub.add_parser("verify", parents=[common], help="check an assignment against an equation")
    p.add_argument("equation")
    p.add_argument("--assign", required=True, help='e.g. "X1=C(1,1); X2=C(2,1)"')

    p = sub.add_parser("root", parents=[common], help="all r with r^W equal to SYSTEM")
    p.add_argument("--power", type=int, required=True)
    p.add_argument("system")
    p.add_argument("--root-budget", type=int)

    p = sub.add_parser("bounds", parents=[common], help="bounds on the number of simple solves")
    p.add_argument("equation")

    p = sub.add_parser("bench", help="benchmarks as CSV")
    bsub = p.add_subparsers(dest="bench_command", required=True, parser_class=_Parser)
    b = bsub.add_parser("nodes", help="colored-tree node counts with p = q")
    b.add_argument("--n-max", type=int, default=20)
    b.add_argument("--q-max", type=int, default=20)
    b.add_argument("--out", metavar="PATH")
    b = bsub.add_parser("time", help="colored tree vs brute force timings with p = q")
    b.add_argument("--max", type=int, default=20)
    b.add_argument("--reps", type=int, default=3)
    b.add_argument("--no-warmup", action="store_true")
    b.add_argument("--timeout", type=float, help="per-solver seconds before recording a timeout")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out", metavar="PATH")
    return parser


def _positive(args, *names) -> None:
    for name in names:
        value = getattr(args, name, None)
        if value is not None and value < 1:
            raise InvalidComponentError(f"--{name.replace('_', '-')} must be >= 1, got {value}")


def _dispatch(args) -> tuple[int, str, str]:
    """Return ``(exit code, stdout text, stderr text)``."""
    cmd = args.command
    fmt = getattr(args, "format", "text")

    if cmd == "eval":
        value = parse_expression(args.expr)
        if fmt == "json":
            return EXIT_OK, print_solution_set([value], "json").replace('"solutions"', '"values"', 1), ""
        if fmt == "csv":
            return EXIT_OK, print_solution_set([value], "csv"), ""
        return EXIT_OK, f"{value}\n", ""

    if cmd == "solve-simple":
        _positive(args, "p", "n", "q")
        tree = build_tree(args.p, args.n, args.q)
        sols = aggregate(tree)
        out = format_node_table(tree, fmt) if args.trace_table else ""
        out += print_solution_set(sols, fmt)
        return (EXIT_OK, out, "") if sols else (EXIT_NO_SOLUTION, out, "no solutions\n")

    if cmd == "solve":
        _positive(args, "root_budget", "jobs")
        eq = parse_equation(args.equation)
        stats = SolveStats()
        found = solve_equation(
            eq, forbid_empty=args.forbid_empty, workers=args.jobs, root_budget=args.root_budget, stats=stats
        )
        err = ""
        if args.verbose:
            bounds = z_bounds(eq)
            err = (
                f"distributions={stats.distributions} simple_calls={stats.simple_calls} "
                f"simple_solves={stats.simple_solves} derivations={stats.derivations} "
                f"bounds=[{bounds.lower},{bounds.upper}]\n"
            )
        out = print_assignments(found, fmt)
        if not found:
            return EXIT_NO_SOLUTION, out, err + "no solutions\n"
        return EXIT_OK, out, err

    if cmd == "verify":
        eq = parse_equation(args.equation)
        ok = verify_assignment(eq, parse_assignment(args.assign))
        if fmt == "json":
            out = json.dumps({"verified": ok}) + "\n"
        elif fmt == "csv":
            out = f"verified\n{str(ok).lower()}\n"
        else:
            out = f"{str(ok).lower()}\n"
        return (EXIT_OK if ok else EXIT_NO_SOLUTION), out, ""

    if cmd == "root":
        _positive(args, "power", "root_budget")
        roots = nth_root(parse_system(args.system), args.power, args.root_budget)
        out = print_solution_set(roots, fmt)
        return (EXIT_OK, out, "") if roots else (EXIT_NO_SOLUTION, out, "no solutions\n")

    if cmd == "bounds":
        b = z_bounds(parse_equation(args.equation))
        if fmt == "json":
            return EXIT_OK, json.dumps({"lower": b.lower, "upper": b.upper}) + "\n", ""
        if fmt == "csv":
            return EXIT_OK, f"lower,upper\n{b.lower},{b.upper}\n", ""
        return EXIT_OK, f"{b.lower} {b.upper}\n", ""

    if cmd == "bench":
        if args.bench_command == "nodes":
            _positive(args, "n_max", "q_max")
            return EXIT_OK, bench.to_csv(bench.run_node_sweep(args.n_max, args.q_max)), ""
        _positive(args, "max", "reps", "jobs")
        if args.timeout is not None and args.timeout <= 0:
            raise InvalidComponentError("--timeout must be positive")
        records = bench.run_time_comparison(
            args.max, reps=args.reps, warmup=not args.no_warmup, timeout=args.timeout, workers=args.jobs
        )
        return EXIT_OK, bench.to_csv(records), ""

    raise UsageError(f"unknown command {cmd!r}")


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        code, out, err = _dispatch(args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (UsageError, ParseError) as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except RecursionError:
        print("ddsx: expression nested too deeply", file=stderr)
        return EXIT_USAGE
    except MissingVariableError as exc:
        print(f"ddsx: no value for variable {exc.args[0]}", file=stderr)
        return EXIT_INVALID
    except (InvalidComponentError, EquationError, BudgetExceededError, ValueError, OverflowError) as exc:
        print(f"ddsx: {exc}", file=stderr)
        return EXIT_INVALID

    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        stdout.write(out)
    if err:
        stderr.write(err)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
