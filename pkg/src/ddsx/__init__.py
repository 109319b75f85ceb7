"""Enumerating solutions of equations over the cycles of finite dynamical systems."""

from .colored_tree import build_tree, aggregate, count_nodes, node_solution, solve_simple, verify_simple_solution
from .cycles import (
    EMPTY,
    ONE,
    BudgetExceededError,
    CycleSet,
    InvalidComponentError,
    add,
    canonicalize,
    multiply,
    nth_root,
    power,
    scalar_multiply,
)
from .pipeline import Assignment, Equation, Term, solve_equation, verify_assignment, z_bounds

__version__ = "0.1.0"
