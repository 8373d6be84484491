import sys
import textwrap

import numpy as np
import pytest

from mazenca.grid import GenConfig, generate_maze, parse_maze
from mazenca.oracle import normalized_accuracy, shortest_path_union
from mazenca.solvers import (
    BudgetedNcaSolver,
    ExternalSolver,
    OracleSolver,
    SolverProtocolError,
    ZerosSolver,
    make_solver,
)

MAZE = parse_maze("S...T\n.....\n.....")


def stub_child(tmp_path, body):
    """Write a protocol child whose per-request reply is produced by ``body``
    (python statements with H, W, rows in scope, printing the reply)."""
    script = tmp_path / "child.py"
    script.write_text(textwrap.dedent("""\
        import sys
        for line in sys.stdin:
            parts = line.split()
            if not parts or parts[0] != "SOLVE":
                continue
            H, W = int(parts[1]), int(parts[2])
            rows = [sys.stdin.readline().rstrip("\\n") for _ in range(H)]
        """) + textwrap.indent(textwrap.dedent(body), "    ")
        + "    sys.stdout.flush()\n")
    return [sys.executable, str(script)]


def test_zeros_solver_anchor():
    pred = ZerosSolver().solve(MAZE)
    _, truth = shortest_path_union(MAZE)
    assert normalized_accuracy(pred, truth) == 0.0


def test_oracle_solver_anchor():
    pred = OracleSolver().solve(MAZE)
    _, truth = shortest_path_union(MAZE)
    assert normalized_accuracy(pred, truth) == 100.0


def test_budgeted_solver_within_budget():
    solver = BudgetedNcaSolver(flood_budget=16)
    _, truth = shortest_path_union(MAZE)
    np.testing.assert_array_equal(solver.solve(MAZE), truth.astype(float))


def test_budgeted_solver_fails_long_mazes():
    long_maze = parse_maze("S" + "." * 30 + "T")
    solver = BudgetedNcaSolver(flood_budget=4)
    np.testing.assert_array_equal(solver.solve(long_maze), np.zeros((1, 32)))


def test_external_zeros_child(tmp_path):
    cmd = stub_child(tmp_path, """\
        for _ in range(H):
            print(" ".join(["0.0"] * W))
        print("END")
        """)
    solver = ExternalSolver(cmd)
    try:
        pred = solver.solve(MAZE)
        np.testing.assert_array_equal(pred, np.zeros((3, 5)))
        _, truth = shortest_path_union(MAZE)
        assert normalized_accuracy(pred, truth) == 0.0
    finally:
        solver.close()


def test_external_echo_solution_child(tmp_path):
    # child marks S/T tiles 1.0 and everything else 0: a crude maze reader,
    # proving the request rows arrive intact
    cmd = stub_child(tmp_path, """\
        for row in rows:
            print(" ".join("1.0" if ch in "ST" else "0.0" for ch in row))
        print("END")
        """)
    solver = ExternalSolver(cmd)
    try:
        pred = solver.solve(MAZE)
        assert pred[0, 0] == 1.0 and pred[0, 4] == 1.0
        assert pred.sum() == 2.0
    finally:
        solver.close()


def test_external_child_output_is_clipped(tmp_path):
    cmd = stub_child(tmp_path, """\
        for _ in range(H):
            print(" ".join(["1.7"] * W))
        print("END")
        """)
    solver = ExternalSolver(cmd)
    try:
        np.testing.assert_array_equal(solver.solve(MAZE), np.ones((3, 5)))
    finally:
        solver.close()


def test_external_malformed_reply(tmp_path):
    cmd = stub_child(tmp_path, """\
        for _ in range(H):
            print("0.0 0.0")
        print("END")
        """)
    solver = ExternalSolver(cmd)
    try:
        with pytest.raises(SolverProtocolError, match="values per row"):
            solver.solve(MAZE)
    finally:
        solver.close()


def test_external_missing_trailer(tmp_path):
    cmd = stub_child(tmp_path, """\
        for _ in range(H):
            print(" ".join(["0.0"] * W))
        print("DONE")
        """)
    solver = ExternalSolver(cmd)
    try:
        with pytest.raises(SolverProtocolError, match="END"):
            solver.solve(MAZE)
    finally:
        solver.close()


def test_external_timeout(tmp_path):
    cmd = stub_child(tmp_path, """\
        import time
        time.sleep(60)
        """)
    solver = ExternalSolver(cmd, timeout=0.5)
    try:
        with pytest.raises(SolverProtocolError, match="timed out"):
            solver.solve(MAZE)
    finally:
        solver.close()


def test_external_dead_child(tmp_path):
    script = tmp_path / "dead.py"
    script.write_text("import sys; sys.exit(3)\n")
    solver = ExternalSolver([sys.executable, str(script)])
    try:
        with pytest.raises(SolverProtocolError):
            solver.solve(MAZE)
    finally:
        solver.close()


def test_make_solver_specs():
    assert isinstance(make_solver("zeros"), ZerosSolver)
    assert isinstance(make_solver("oracle"), OracleSolver)
    assert make_solver("budget").flood_budget == 16
    assert make_solver("budget:7").flood_budget == 7
    assert isinstance(make_solver("cmd:cat"), ExternalSolver)
    with pytest.raises(Exception):
        make_solver("magic")
