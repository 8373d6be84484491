"""DFS-driven diameter computation.

A depth-first traversal visits every tile of each component; a single-source
flood launched from each visited tile runs to its fixpoint, at which point
the age at the flood's own source equals that tile's eccentricity plus one
(i.e. the longest shortest path ending there, in tiles).  The floods could
be staggered on shared channels with per-launch waiting times; here each
flood runs on its own channels instead, and the launch schedule the waiting
times imply is computed and reported for inspection -- the results are
identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bfs import AGE, FLOOD_S, run_bfs
from .dfs import DfsConfig, DfsTrace, run_dfs
from .extract import run_extract
from .grid import Maze, MazeError


@dataclass(frozen=True)
class DiameterRun:
    path_max: np.ndarray  # H x W ages at fixpoint; 0 on walls/unvisited
    launch_schedule: list[tuple[int, tuple[int, int], int]]  # (launch_step, tile, wait)
    best_endpoint: tuple[int, int]
    farthest: tuple[int, int]
    diameter_len: int  # tiles
    witness: np.ndarray  # bool H x W shortest path(s) between the endpoints


def calibrate_eccentricity(fixpoint_age_at_source: int) -> int:
    """Eccentricity in moves implied by the source's age once its flood
    reached a fixpoint.  The flood seeds one step before the age counter
    starts and the fixpoint is detected one step after the last growth, so
    the two offsets cancel up to a single step: age = eccentricity + 1."""
    moves = int(fixpoint_age_at_source) - 1
    if moves < 0:
        raise MazeError("fixpoint age below 1: step-indexing convention broken")
    return moves


def schedule_dijkstra_calls(trace: DfsTrace) -> list[tuple[int, tuple[int, int], int]]:
    """Launch schedule for the staggered floods: the first visited tile
    launches immediately; each later one waits for the visit-step gap to its
    predecessor (1 for an adjacent move, the backtrack span after a pop)."""
    if not trace.visit_order:
        raise MazeError("empty DFS trace")
    schedule = []
    launch = 0
    prev_step = None
    for tile, visit_step in zip(trace.visit_order, trace.visit_steps):
        wait = 0 if prev_step is None else visit_step - prev_step
        launch += wait
        schedule.append((launch, tile, wait))
        prev_step = visit_step
    return schedule


def diameter_nca(maze: Maze, cfg: DfsConfig | None = None) -> DiameterRun:
    H, W = maze.walls.shape
    empties = [tuple(p) for p in np.argwhere(~maze.walls)]
    if not empties:
        raise MazeError("maze has no empty tiles")

    path_max = np.zeros((H, W), dtype=np.int64)
    schedule: list[tuple[int, tuple[int, int], int]] = []
    source_states = {}
    visited: set[tuple[int, int]] = set()
    for start in empties:  # row-major component restarts
        if start in visited:
            continue
        trace = run_dfs(maze, start, cfg)
        schedule.extend(schedule_dijkstra_calls(trace))
        for u in trace.visit_order:
            visited.add(u)
            result = run_bfs(maze, mode="single_source", at=u)
            path_max[u] = int(result.final.hidden[AGE][u])
            source_states[u] = result.final

    flat_best = int(np.argmax(path_max))
    best = (flat_best // W, flat_best % W)
    diameter_len = int(path_max[best])

    # second endpoint: farthest tile in the best endpoint's own flood, which
    # at fixpoint is the flooded tile with the smallest age (row-major ties)
    final = source_states[best].hidden
    flooded = final[FLOOD_S] > 0.0
    ages = np.where(flooded, final[AGE], np.iinfo(np.int64).max)
    flat_far = int(np.argmin(ages))
    far = (flat_far // W, flat_far % W)

    if far == best:
        witness = np.zeros((H, W), dtype=bool)
        witness[best] = True
    else:
        pair_maze = Maze(walls=maze.walls, source=best, target=far)
        bfs = run_bfs(pair_maze, mode="bidirectional")
        witness = run_extract(bfs).mask
    return DiameterRun(
        path_max=path_max,
        launch_schedule=schedule,
        best_endpoint=best,
        farthest=far,
        diameter_len=diameter_len,
        witness=witness,
    )
