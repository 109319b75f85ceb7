"""Node-count sweeps and colored-tree vs brute-force timings as CSV."""

from __future__ import annotations

import csv
import io
import multiprocessing
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from math import comb
from typing import Callable, Optional, Sequence, Union

from .colored_tree import build_tree, count_nodes, solve_simple
from .cycles import divisors_of
from .graphs import brute_force_simple_solutions, exhaustive_simple_solutions

TIMEOUT = "timeout"
HEADER = ("p", "n", "q", "node_count", "colored_tree_ms", "brute_force_ms", "solution_count")

Millis = Union[float, str, None]


class OracleMismatch(AssertionError):
    pass


@dataclass
class BenchRecord:
    p: int
    n: int
    q: int
    node_count: Optional[int] = None
    colored_tree_ms: Millis = None
    brute_force_ms: Millis = None
    solution_count: Optional[int] = None

    @property
    def timed_out(self) -> bool:
        return TIMEOUT in (self.colored_tree_ms, self.brute_force_ms)

    def search_space(self) -> int:
        """Candidates the generate-and-test baseline examines."""
        d = len(divisors_of(self.q))
        return comb(self.n + d, d)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value)


def to_csv(records: Sequence[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in records:
        w.writerow([_fmt(v) for v in astuple(r)])
    return buf.getvalue()


def from_csv(text: str) -> list[BenchRecord]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        values = {}
        for f in fields(BenchRecord):
            raw = row[f.name]
            if raw == "":
                values[f.name] = None
            elif raw == TIMEOUT:
                values[f.name] = TIMEOUT
            elif f.name.endswith("_ms"):
                values[f.name] = float(raw)
            else:
                values[f.name] = int(raw)
        out.append(BenchRecord(**values))
    return out


def run_node_sweep(n_max: int, q_max: int) -> list[BenchRecord]:
    """Colored-tree size for every ``1 <= n <= n_max``, ``1 <= q <= q_max``, ``p = q``."""
    if n_max < 1 or q_max < 1:
        raise ValueError("sweep ranges must be >= 1")
    return [
        BenchRecord(q, n, q, node_count=count_nodes(build_tree(q, n, q)))
        for q in range(1, q_max + 1)
        for n in range(1, n_max + 1)
    ]


def _median_ms(fn: Callable, args, reps: int, warmup: bool):
    if warmup:
        fn(*args)
    times = []
    result = None
    for _ in range(reps):
        start = time.perf_counter()
        result = fn(*args)
        times.append((time.perf_counter() - start) * 1000.0)
    return statistics.median(times), result


def _call_in_child(conn, fn, args, reps, warmup):
    conn.send(_median_ms(fn, args, reps, warmup))
    conn.close()


def _timed(fn: Callable, args, reps: int, warmup: bool, timeout: Optional[float]):
    """``(median_ms, result)``, or ``(TIMEOUT, None)`` if the budget runs out."""
    if timeout is None:
        return _median_ms(fn, args, reps, warmup)
    ctx = multiprocessing.get_context("fork")
    recv, send = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_call_in_child, args=(send, fn, args, reps, warmup))
    proc.start()
    send.close()
    if recv.poll(timeout):
        out = recv.recv()
        proc.join()
        return out
    proc.terminate()
    proc.join()
    return TIMEOUT, None


def time_case(
    p: int,
    n: int,
    q: int,
    reps: int = 3,
    warmup: bool = True,
    timeout: Optional[float] = None,
) -> BenchRecord:
    """Time both solvers on one equation and cross-check their answers."""
    tree_ms, tree_sols = _timed(solve_simple, (p, n, q), reps, warmup, timeout)
    brute_ms, brute_sols = _timed(exhaustive_simple_solutions, (p, n, q), reps, warmup, timeout)
    record = BenchRecord(p, n, q, count_nodes(build_tree(p, n, q)), tree_ms, brute_ms)
    if tree_sols is not None:
        expected = brute_force_simple_solutions(p, n, q)
        if tree_sols != expected or (brute_sols is not None and brute_sols != expected):
            raise OracleMismatch(f"solvers disagree on p={p}, n={n}, q={q}")
        record.solution_count = len(tree_sols)
    elif brute_sols is not None:
        record.solution_count = len(brute_sols)
    return record


def _time_case_star(args):
    return time_case(*args)


def run_time_comparison(
    max_value: int,
    reps: int = 3,
    warmup: bool = True,
    timeout: Optional[float] = None,
    workers: int = 1,
) -> list[BenchRecord]:
    """Both solvers for ``1 <= n, q <= max_value`` with ``p = q``.

    Cases run one after another unless ``workers > 1``, in which case each
    case is timed inside its own worker process.
    """
    if max_value < 1:
        raise ValueError("max must be >= 1")
    cases = [(q, n, q, reps, warmup, timeout) for q in range(1, max_value + 1) for n in range(1, max_value + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_time_case_star, cases))
    return [time_case(*c) for c in cases]


def top_decile(records: Sequence[BenchRecord]) -> list[BenchRecord]:
    """Largest tenth of the cases by search-space size."""
    ranked = sorted(records, key=lambda r: (r.search_space(), r.n, r.q))
    k = max(1, len(ranked) // 10)
    return ranked[-k:]
