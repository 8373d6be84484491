"""Solvers that can sit under evaluation or adversarial evolution.

A solver maps a maze to an H x W real-valued prediction plane (clipped to
[0, 1] by callers).  The budgeted automaton solver is the built-in adversary
target: it fails precisely on mazes whose floods cannot meet within its step
budget, which is what the evolution loop learns to exploit.
"""

from __future__ import annotations

import shlex
import subprocess
import threading

import numpy as np

from .bfs import run_bfs
from .extract import run_extract
from .grid import Maze, MazeError, render_maze
from .oracle import Unreachable, shortest_path_union


class ZerosSolver:
    name = "zeros"

    def solve(self, maze: Maze) -> np.ndarray:
        return np.zeros(maze.walls.shape)


class OracleSolver:
    """Perfect solver: returns the oracle union of shortest paths."""

    name = "oracle"

    def solve(self, maze: Maze) -> np.ndarray:
        try:
            _, mask = shortest_path_union(maze)
        except Unreachable:
            return np.zeros(maze.walls.shape)
        return mask.astype(np.float64)


class BudgetedNcaSolver:
    """Flood + extraction pipeline with a cap on flood steps; outputs zeros
    when the floods cannot meet within the budget."""

    def __init__(self, flood_budget: int = 16):
        self.flood_budget = flood_budget
        self.name = f"nca-budget{flood_budget}"

    def solve(self, maze: Maze) -> np.ndarray:
        bfs = run_bfs(maze, max_steps=self.flood_budget)
        if not bfs.met:
            return np.zeros(maze.walls.shape)
        return run_extract(bfs).mask.astype(np.float64)


class SolverProtocolError(MazeError):
    pass


class ExternalSolver:
    """Child-process solver speaking the line protocol: the parent writes
    "SOLVE <H> <W>" plus H maze rows; the child answers H lines of W
    space-separated reals followed by "END"."""

    def __init__(self, command: str | list[str], timeout: float = 30.0):
        self.command = shlex.split(command) if isinstance(command, str) else command
        self.timeout = timeout
        self.name = "external:" + " ".join(self.command)
        self._proc: subprocess.Popen | None = None

    def _ensure(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        return self._proc

    def solve(self, maze: Maze) -> np.ndarray:
        proc = self._ensure()
        H, W = maze.walls.shape
        request = f"SOLVE {H} {W}\n" + render_maze(maze) + "\n"

        rows: list[list[float]] = []
        error: list[Exception] = []

        def exchange():
            try:
                proc.stdin.write(request)
                proc.stdin.flush()
                for _ in range(H):
                    line = proc.stdout.readline()
                    if not line:
                        raise SolverProtocolError("child closed its output")
                    vals = [float(v) for v in line.split()]
                    if len(vals) != W:
                        raise SolverProtocolError(
                            f"expected {W} values per row, got {len(vals)}"
                        )
                    rows.append(vals)
                trailer = proc.stdout.readline().strip()
                if trailer != "END":
                    raise SolverProtocolError(f"expected END trailer, got {trailer!r}")
            except Exception as exc:  # noqa: BLE001 - reported to caller
                error.append(exc)

        worker = threading.Thread(target=exchange, daemon=True)
        worker.start()
        worker.join(self.timeout)
        if worker.is_alive():
            proc.kill()
            raise SolverProtocolError(f"solver timed out after {self.timeout}s")
        if error:
            if proc.poll() is not None and proc.returncode != 0:
                raise SolverProtocolError(
                    f"solver exited with code {proc.returncode}"
                ) from error[0]
            raise SolverProtocolError(str(error[0])) from error[0]
        return np.clip(np.array(rows, dtype=np.float64), 0.0, 1.0)

    def close(self):
        if self._proc is not None and self._proc.poll() is None:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
            self._proc.terminate()
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()
        self._proc = None


def make_solver(spec: str):
    """CLI solver specs: "zeros", "oracle", "budget[:N]", or "cmd:<command>"."""
    if spec == "zeros":
        return ZerosSolver()
    if spec == "oracle":
        return OracleSolver()
    if spec.startswith("budget"):
        _, _, n = spec.partition(":")
        return BudgetedNcaSolver(int(n) if n else 16)
    if spec.startswith("cmd:"):
        return ExternalSolver(spec[4:])
    raise MazeError(f"unknown solver spec {spec!r}")
