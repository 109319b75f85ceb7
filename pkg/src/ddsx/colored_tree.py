"""Colored-tree enumeration of all ``X`` with ``C(p,1) * X == C(q,n)``.

Each node value ``m`` stands for the node equation ``C(p,1) * X == C(q,m)``.
A solution cycle of period ``s`` contributes ``gcd(p, s)`` cycles, so the
solutions of a node are sums of solutions of the parts of some partition of
``m`` into divisors of ``q``.  The tree records such partitions ("splits");
every split gets its own color.

Building has two passes.  First, every value is split once by ``mcda``
using the divisors of ``q`` other than the value itself, recursing into new
part values.  Then, from the smallest value up, the partitions reachable by
refining splits are compared with all partitions of the value; each missing
one is added as a new split with a fresh color.

Aggregation walks the values in increasing order.  Inside a split the part
solution sets are combined by Cartesian product and summed; splits are
united, together with the single-cycle node solution when it exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from math import gcd
from typing import Optional

from .cycles import CycleSet, EMPTY, InvalidComponentError, multiply
from .decomposition import Partition, all_partitions, divisors, mcda


@dataclass
class TreeNode:
    value: int
    splits: list[tuple[int, Partition]] = field(default_factory=list)
    node_solution: Optional[CycleSet] = None
    subtree_solutions: list[CycleSet] = field(default_factory=list)


@dataclass
class ColoredTree:
    p: int
    n: int
    q: int
    nodes: dict[int, TreeNode] = field(default_factory=dict)
    colors: list[tuple[int, Partition]] = field(default_factory=list)

    @property
    def root(self) -> TreeNode:
        return self.nodes[self.n]

    def rows(self) -> list[TreeNode]:
        """Table rows, largest value first."""
        return [self.nodes[v] for v in sorted(self.nodes, reverse=True)]


def _check(p: int, n: int, q: int) -> None:
    for name, v in (("p", p), ("n", n), ("q", q)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise InvalidComponentError(f"{name} must be a positive integer, got {v!r}")


def node_solution(p: int, q: int, m: int) -> Optional[CycleSet]:
    """The single-cycle solution of ``C(p,1) * X == C(q,m)``, if any."""
    if q % p or (q * m) % p:
        return None
    s = q * m // p
    g = gcd(p, s)
    if g == m and p // g * s == q:
        return CycleSet([(s, 1)])
    return None


def verify_simple_solution(p: int, n: int, q: int, x: CycleSet) -> bool:
    return multiply(CycleSet([(p, 1)]), x) == CycleSet([(q, n)])


class _Builder:
    def __init__(self, p: int, n: int, q: int):
        self.tree = ColoredTree(p, n, q)
        self.divs = divisors(q)
        self.completed: set[int] = set()
        self._represented: dict[int, frozenset[Partition]] = {}

    def coins(self, m: int) -> list[int]:
        return [d for d in self.divs if d != m]

    def add_split(self, m: int, parts: Partition) -> None:
        color = len(self.tree.colors)
        self.tree.colors.append((m, parts))
        self.tree.nodes[m].splits.append((color, parts))
        self._represented.pop(m, None)

    def expand(self, m: int) -> None:
        """MCDA pass: split ``m`` once and recurse into new part values."""
        if m in self.tree.nodes:
            return
        self.tree.nodes[m] = TreeNode(m)
        parts = mcda(m, self.coins(m))
        if parts is None:
            return
        self.add_split(m, parts)
        for v in sorted(set(parts), reverse=True):
            self.expand(v)

    def represented(self, m: int) -> frozenset[Partition]:
        """Partitions of ``m`` obtainable by refining its splits."""
        cached = self._represented.get(m)
        if cached is not None:
            return cached
        out: set[Partition] = set()
        for _, parts in self.tree.nodes[m].splits:
            options = [((v,),) + tuple(self.represented(v)) for v in parts]
            for combo in product(*options):
                out.add(tuple(sorted((x for piece in combo for x in piece), reverse=True)))
        result = frozenset(out)
        self._represented[m] = result
        return result

    def complete(self, m: int) -> None:
        if m in self.completed:
            return
        for _, parts in list(self.tree.nodes[m].splits):
            for v in set(parts):
                self.complete(v)
        seen = self.represented(m)
        for partition in all_partitions(m, self.coins(m)):
            if partition in seen:
                continue
            self.add_split(m, partition)
            for v in sorted(set(partition), reverse=True):
                self.expand(v)
                self.complete(v)
            seen = self.represented(m)
        self.completed.add(m)


def build_tree(p: int, n: int, q: int) -> ColoredTree:
    _check(p, n, q)
    builder = _Builder(p, n, q)
    builder.expand(n)
    builder.complete(n)
    tree = builder.tree
    for v, node in tree.nodes.items():
        node.node_solution = node_solution(p, q, v)
    return tree


def _split_solutions(parts: Partition, solved: dict[int, list[CycleSet]]) -> set[CycleSet]:
    groups = []
    for v in sorted(set(parts), reverse=True):
        sols = solved[v]
        if not sols:
            return set()
        groups.append(combinations_with_replacement(sols, parts.count(v)))
    out = set()
    for picks in product(*groups):
        total = EMPTY
        for pick in picks:
            for x in pick:
                total = total + x
        out.add(total)
    return out


def aggregate(tree: ColoredTree) -> list[CycleSet]:
    """Fill ``subtree_solutions`` bottom-up; return the root's set."""
    solved: dict[int, list[CycleSet]] = {}
    for v in sorted(tree.nodes):
        node = tree.nodes[v]
        found: set[CycleSet] = set()
        if node.node_solution is not None:
            found.add(node.node_solution)
        for _, parts in node.splits:
            found |= _split_solutions(parts, solved)
        node.subtree_solutions = sorted(found)
        solved[v] = node.subtree_solutions
    return tree.root.subtree_solutions


def solve_simple(p: int, n: int, q: int) -> list[CycleSet]:
    """All solutions of ``C(p,1) * X == C(q,n)``, sorted; empty if none."""
    _check(p, n, q)
    if q % p:
        return []
    return aggregate(build_tree(p, n, q))


def count_nodes(tree: ColoredTree) -> int:
    """Node count of the tree drawn out in full (every split of every occurrence)."""
    memo: dict[int, int] = {}

    def count(v: int) -> int:
        if v not in memo:
            memo[v] = 1 + sum(count(x) for _, parts in tree.nodes[v].splits for x in parts)
        return memo[v]

    return count(tree.n)
