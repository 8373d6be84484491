"""Automaton-vs-oracle equivalence checks, one seeded maze at a time.

Each check regenerates maze ``index`` from ``default_rng([seed, index])``,
runs the relevant automaton, and compares every observable against the
classical reference implementation.  Checks return None on success or a
human-readable failure message, and are plain module-level functions so the
driver can fan them out across processes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .bfs import FLOOD_S, FLOOD_T, BfsResult, bfs_states
from .dfs import PEBBLE, ROUTE, STACK, DfsConfig, dfs_states
from .diameter import diameter_nca
from .extract import run_extract
from .grid import GenConfig, Maze, generate_maze, one_hot
from .oracle import (
    dfs_order,
    diameter_oracle,
    distance_map,
    shortest_path_union,
)


def seeded_maze(task: str, height: int, width: int, seed: int, index: int) -> Maze:
    cfg = GenConfig(width=width, height=height, task=task)
    return generate_maze(cfg, rng=np.random.default_rng([seed, index]))


def check_shortest_path(args: tuple[int, int, int]) -> str | None:
    """Flood-ball equality at every step, the meet-step formula, and exact
    agreement of the extracted mask with the union of all shortest paths."""
    seed, index, size = args
    maze = seeded_maze("shortest_path", size, size, seed, index)
    ds = distance_map(maze, maze.source)
    dt = distance_map(maze, maze.target)
    d, union = shortest_path_union(maze)

    met = None
    for state in bfs_states(one_hot(maze)):
        t = state.step
        for name, ch, dist in (("flood_s", FLOOD_S, ds), ("flood_t", FLOOD_T, dt)):
            ball = (dist >= 0) & (dist <= t - 1)
            if not np.array_equal(state.hidden[ch] > 0.0, ball):
                return f"maze {index}: {name} support != BFS ball at step {t}"
        if np.any(state.hidden[FLOOD_S] * state.hidden[FLOOD_T] > 0.0):
            met = state
            break
        if t > 4 * size * size:
            return f"maze {index}: floods never met"

    if met.step != math.ceil(d / 2) + 1:
        return f"maze {index}: meet_step {met.step} != ceil({d}/2)+1"
    mask = run_extract(BfsResult(met=True, meet_step=met.step, final=met)).mask
    if not np.array_equal(mask, union):
        return f"maze {index}: extracted mask != shortest-path union"
    return None


def check_dfs(args: tuple[int, int, int]) -> str | None:
    """Visit-order equality with the classical priority DFS, plus the
    single-pebble and route-monotonicity invariants at every step."""
    seed, index, max_size = args
    size = 4 + index % max(1, max_size - 3)  # cycle sizes 4 .. max_size
    maze = seeded_maze("diameter", size, size, seed, index)
    start = tuple(int(v) for v in np.argwhere(~maze.walls)[0])
    expected = dfs_order(maze, start)

    visits: list[tuple[int, int]] = []
    prev_route = np.zeros(maze.walls.shape)
    max_steps = 16 * size * size
    for state in dfs_states(maze, start, DfsConfig()):
        pebble = state.hidden[PEBBLE]
        n_pebbles = int(np.count_nonzero(pebble > 0.0))
        if n_pebbles > 1:
            return f"maze {index}: {n_pebbles} pebbles at step {state.step}"
        route = state.hidden[ROUTE]
        if np.any((prev_route > 0.0) & (route <= 0.0)):
            return f"maze {index}: route lost a tile at step {state.step}"
        prev_route = route
        if n_pebbles == 1:
            pos = np.argwhere(pebble > 0.0)[0]
            visits.append((int(pos[0]), int(pos[1])))
        popped_now = state.popped is not None and state.popped.any()
        if (pebble.max() == 0.0 and state.hidden[STACK].max() == 0.0
                and not popped_now and state.step > 1):
            break
        if state.step >= max_steps:
            return f"maze {index}: DFS did not terminate in {max_steps} steps"

    if visits != expected:
        return f"maze {index}: visit order differs from oracle ({visits[:6]}...)"
    return None


def check_diameter(args: tuple[int, int, int]) -> str | None:
    """Diameter length match plus witness validity: the witness must be the
    full shortest-path union between the automaton's own endpoint pair, and
    that pair must realize the oracle diameter."""
    seed, index, size = args
    maze = seeded_maze("diameter", size, size, seed, index)
    run = diameter_nca(maze)
    length, _ = diameter_oracle(maze)
    if run.diameter_len != length:
        return f"maze {index}: diameter {run.diameter_len} != oracle {length}"
    if run.best_endpoint == run.farthest:
        ok = length == 1 and run.witness.sum() == 1 and run.witness[run.best_endpoint]
        return None if ok else f"maze {index}: bad singleton witness"
    pair = Maze(walls=maze.walls, source=run.best_endpoint, target=run.farthest)
    d_pair, union = shortest_path_union(pair)
    if d_pair + 1 != length:
        return f"maze {index}: witness endpoints span {d_pair + 1} != {length}"
    if not np.array_equal(run.witness, union):
        return f"maze {index}: witness != shortest-path union of its endpoints"
    return None


CHECKS = {
    "shortest_path": check_shortest_path,
    "dfs": check_dfs,
    "diameter": check_diameter,
}


def default_workers() -> int:
    env = os.environ.get("NCA_THREADS")
    return max(1, int(env)) if env else (os.cpu_count() or 1)


def verify_task(
    task: str,
    n: int,
    seed: int,
    size: int = 16,
    workers: int | None = None,
) -> tuple[int, list[str]]:
    """Run ``n`` seeded checks; returns (pass count, failure messages)."""
    check = CHECKS[task]
    args = [(seed, i, size) for i in range(n)]
    if workers is None:
        workers = default_workers()
    if workers > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(check, args, chunksize=8))
    else:
        results = [check(a) for a in args]
    failures = [msg for msg in results if msg is not None]
    return n - len(failures), failures
