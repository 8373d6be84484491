"""Hand-coded bidirectional flood / Dijkstra-map cellular automaton.

Two binary flood channels grow outward from source and target one ring per
step; the age channel counts, per tile, the steps since each flood arrived.
The run freezes at the first step where the floods overlap.  A single-source
mode (used by the diameter algorithm) floods from one injected tile and runs
to a fixpoint instead.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Optional

import numpy as np

from .grid import CH_SOURCE, CH_TARGET, CH_EMPTY, Maze, MazeError, one_hot
from .tensor import (
    KernelStack,
    conv2d,
    step,
    w_center3,
    w_von_neumann,
    zeros_kernel,
)

# hidden channel registry
FLOOD_S, FLOOD_T, AGE = 0, 1, 2
N_HIDDEN = 3
# conv input order: hidden channels then the maze one-hot
IN_FLOOD_S, IN_FLOOD_T, IN_AGE, IN_EMPTY, IN_WALL, IN_SOURCE, IN_TARGET = range(7)


@dataclass(frozen=True)
class BfsState:
    hidden: np.ndarray  # 3 x H x W
    maze_onehot: np.ndarray  # 4 x H x W, frozen for the whole run
    step: int = 0


@dataclass(frozen=True)
class BfsResult:
    met: bool
    meet_step: Optional[int]
    final: BfsState
    fixpoint: bool = False


def build_bfs_weights() -> KernelStack:
    w1 = w_center3()
    wt = w_von_neumann()
    ks = zeros_kernel(N_HIDDEN, 7, 3)
    w = ks.weights
    w[FLOOD_S, IN_SOURCE] = w1
    w[FLOOD_S, IN_FLOOD_S] = wt
    w[FLOOD_S, IN_WALL] = -6.0 * w1
    w[FLOOD_T, IN_TARGET] = w1
    w[FLOOD_T, IN_FLOOD_T] = wt
    w[FLOOD_T, IN_WALL] = -6.0 * w1
    w[AGE, IN_FLOOD_S] = w1
    w[AGE, IN_FLOOD_T] = w1
    w[AGE, IN_AGE] = w1
    return ks


_WEIGHTS: KernelStack | None = None


def _weights() -> KernelStack:
    global _WEIGHTS
    if _WEIGHTS is None:
        _WEIGHTS = build_bfs_weights()
    return _WEIGHTS


def initial_state(maze_onehot: np.ndarray) -> BfsState:
    _, H, W = maze_onehot.shape
    return BfsState(hidden=np.zeros((N_HIDDEN, H, W)), maze_onehot=maze_onehot)


def bfs_step(state: BfsState) -> BfsState:
    x = np.concatenate([state.hidden, state.maze_onehot])
    out = conv2d(x, _weights())
    out[FLOOD_S] = step(out[FLOOD_S])
    out[FLOOD_T] = step(out[FLOOD_T])
    # age is an exact integer accumulation; never negative, so relu is a no-op
    return replace(state, hidden=out, step=state.step + 1)


def inject_endpoints(
    maze: Maze,
    source: tuple[int, int] | None,
    target: tuple[int, int] | None = None,
) -> np.ndarray:
    """One-hot encoding with virtual endpoints replacing the maze's own."""
    enc = one_hot(maze)
    for ch in (CH_SOURCE, CH_TARGET):
        enc[CH_EMPTY] += enc[ch]
        enc[ch] = 0.0
    for ch, pos in ((CH_SOURCE, source), (CH_TARGET, target)):
        if pos is None:
            continue
        if maze.walls[pos]:
            raise MazeError(f"injected endpoint {pos} is a wall")
        enc[ch][pos] = 1.0
        enc[CH_EMPTY][pos] = 0.0
    return enc


def bfs_states(maze_onehot: np.ndarray) -> Iterator[BfsState]:
    """Unbounded stream of states, one per automaton step (step 1 first)."""
    state = initial_state(maze_onehot)
    while True:
        state = bfs_step(state)
        yield state


def run_bfs(
    maze: Maze,
    mode: str = "bidirectional",
    at: tuple[int, int] | None = None,
    max_steps: int | None = None,
) -> BfsResult:
    """Bidirectional mode runs until the floods first overlap; single-source
    mode floods from ``at`` until the flood stops changing.  ``max_steps``
    defaults to 4*H*W, a safe horizon for any flood."""
    if max_steps is None:
        max_steps = 4 * maze.height * maze.width
    if max_steps < 1:
        raise MazeError("max_steps must be positive")
    if mode == "bidirectional":
        if maze.source is None or maze.target is None:
            raise MazeError("bidirectional flood needs source and target")
        onehot = one_hot(maze)
        state = initial_state(onehot)
        for _ in range(max_steps):
            state = bfs_step(state)
            if np.any(state.hidden[FLOOD_S] * state.hidden[FLOOD_T] > 0.0):
                return BfsResult(met=True, meet_step=state.step, final=state)
        return BfsResult(met=False, meet_step=None, final=state)
    if mode == "single_source":
        if at is None:
            raise MazeError("single_source mode needs a start tile")
        onehot = inject_endpoints(maze, source=at)
        state = initial_state(onehot)
        prev = state.hidden[FLOOD_S].copy()
        for _ in range(max_steps):
            state = bfs_step(state)
            if np.array_equal(state.hidden[FLOOD_S], prev):
                return BfsResult(met=False, meet_step=None, final=state, fixpoint=True)
            prev = state.hidden[FLOOD_S].copy()
        return BfsResult(met=False, meet_step=None, final=state)
    raise MazeError(f"unknown mode {mode!r}")
