import io
import json

import pytest

from ddsx.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_solve_simple_6_6_6():
    code, out, _ = call("solve-simple", "--p", "6", "--n", "6", "--q", "6")
    assert code == 0
    assert len(out.splitlines()) == 8
    assert "C(1,1) + C(2,1) + C(3,1)" in out.splitlines()


def test_solve_simple_without_solutions():
    code, out, err = call("solve-simple", "--p", "2", "--n", "5", "--q", "4")
    assert (code, out) == (1, "")
    assert "no solutions" in err


def test_trace_table_columns():
    code, out, _ = call("solve-simple", "--p", "2", "--n", "12", "--q", "6", "--trace-table")
    assert code == 0
    header = out.splitlines()[0]
    assert [c.strip() for c in header.split("|")] == ["Node", "Splits", "Node solution", "Subtree solutions set"]
    assert "[3,3] [2,2,2]" in out


def test_eval():
    assert call("eval", "C(2,1) * C(3,1)")[:2] == (0, "C(6,1)\n")
    code, out, _ = call("eval", "C(2,1) + C(2,1)", "--format", "json")
    assert json.loads(out) == {"values": [[{"period": 2, "count": 2}]]}


def test_solve_and_verify():
    code, out, err = call("solve", "(C(2,1)) * X1 = C(2,2)", "--verbose")
    assert code == 0
    assert out.splitlines() == ["X1 = C(1,2)", "X1 = C(2,1)"]
    assert "distributions=1" in err
    code, out, _ = call("solve", "(C(1,1)) * X1^2 = C(1,1) + C(2,4)", "--format", "json")
    data = json.loads(out)["assignments"][0]
    assert data["bases"]["X1"] == [[{"period": 1, "count": 1}, {"period": 2, "count": 1}]]
    assert call("solve", "(C(2,1)) * X1 = C(3,1)")[0] == 1
    assert call("verify", "(C(2,1)) * X1 = C(2,2)", "--assign", "X1=C(2,1)")[:2] == (0, "true\n")
    assert call("verify", "(C(2,1)) * X1 = C(2,2)", "--assign", "X1=C(3,1)")[:2] == (1, "false\n")
    assert call("verify", "(C(2,1)) * X1 = C(2,2)", "--assign", "X2=C(3,1)")[0] == 3


def test_root_and_bounds():
    assert call("root", "--power", "2", "C(1,1) + C(2,4)")[:2] == (0, "C(1,1) + C(2,1)\n")
    assert call("root", "--power", "2", "C(2,1)")[0] == 1
    assert call("bounds", "(C(2,1) + C(3,1)) * X1 = C(2,2) + C(3,1)")[:2] == (0, "12 24\n")


def test_root_budget_env(monkeypatch):
    monkeypatch.setenv("DDSX_ROOT_BUDGET", "2")
    code, _, err = call("root", "--power", "2", "C(1,36) + C(2,40)")
    assert code == 3 and "budget" in err


@pytest.mark.parametrize(
    "argv, code",
    [
        (["solve-simple", "--p", "0", "--n", "1", "--q", "1"], 3),
        (["solve-simple", "--p", "x", "--n", "1", "--q", "1"], 2),
        (["solve-simple", "--p", "1"], 2),
        (["eval", "C(2,1"], 2),
        (["eval", "C(0,1)"], 3),
        (["solve", "(C(2,1)) * X1^0 = C(2,2)"], 3),
        (["root", "--power", "0", "C(1,1)"], 3),
        (["frobnicate"], 2),
        ([], 2),
        (["eval", "(" * 5000 + "C(1,1)" + ")" * 5000], 2),
    ],
)
def test_error_exit_codes(argv, code):
    got, out, err = call(*argv)
    assert got == code
    assert out == ""
    assert err


def test_out_file(tmp_path):
    target = tmp_path / "sols.txt"
    code, out, _ = call("solve-simple", "--p", "2", "--n", "12", "--q", "6", "--out", str(target))
    assert code == 0 and out == ""
    assert len(target.read_text().splitlines()) == 7


def test_identical_output_across_parallelism():
    eq = "(C(1,1) + C(2,1)) * X1 + (C(3,1)) * X2 = C(1,2) + C(2,2) + C(3,1) + C(6,1)"
    runs = {call("solve", eq, "--jobs", str(j)) for j in (1, 1, 3)}
    assert len(runs) == 1


def test_bench_nodes(tmp_path):
    target = tmp_path / "nodes.csv"
    assert call("bench", "nodes", "--n-max", "6", "--q-max", "6", "--out", str(target))[0] == 0
    lines = target.read_text().splitlines()
    assert lines[0] == "p,n,q,node_count,colored_tree_ms,brute_force_ms,solution_count"
    assert "6,6,6,20,,," in lines


def test_bench_time_small():
    code, out, _ = call("bench", "time", "--max", "3", "--reps", "1", "--no-warmup")
    assert code == 0
    assert len(out.splitlines()) == 10
