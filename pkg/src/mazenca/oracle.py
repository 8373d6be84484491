"""Classical reference implementations: ground truth for every automaton
and for dataset labeling."""

from __future__ import annotations

from collections import deque

import numpy as np

from .grid import Maze, MazeError

# neighbour order encodes the move priority: down, right, up, left
PRIORITY_MOVES = [(1, 0), (0, 1), (-1, 0), (0, -1)]
DIRECTION_RANKS = [0.2, 0.4, 0.6, 0.8]


class Unreachable(MazeError):
    pass


def distance_map(maze: Maze, src: tuple[int, int]) -> np.ndarray:
    """BFS distance in moves from ``src``; -1 marks unreachable tiles."""
    if maze.walls[src]:
        raise MazeError(f"distance source {src} is a wall")
    H, W = maze.walls.shape
    dist = np.full((H, W), -1, dtype=np.int64)
    dist[src] = 0
    q = deque([src])
    while q:
        y, x = q.popleft()
        for dy, dx in PRIORITY_MOVES:
            ny, nx = y + dy, x + dx
            if 0 <= ny < H and 0 <= nx < W and not maze.walls[ny, nx] and dist[ny, nx] < 0:
                dist[ny, nx] = dist[y, x] + 1
                q.append((ny, nx))
    return dist


def shortest_path_union(maze: Maze) -> tuple[int, np.ndarray]:
    """Distance in moves plus the union of all shortest paths:
    { v : d_s(v) + d_t(v) = d(s, t) }."""
    if maze.source is None or maze.target is None:
        raise MazeError("shortest-path oracle needs both source and target")
    ds = distance_map(maze, maze.source)
    if ds[maze.target] < 0:
        raise Unreachable("target unreachable from source")
    dt = distance_map(maze, maze.target)
    d = int(ds[maze.target])
    mask = (ds >= 0) & (dt >= 0) & (ds + dt == d)
    return d, mask


def canonical_shortest_path(maze: Maze) -> tuple[int, np.ndarray]:
    """Distance in moves plus a single deterministic shortest path: from the
    source, repeatedly take the highest-priority move (down > right > up >
    left) that decreases the remaining distance to the target.  The mask has
    exactly d + 1 true tiles."""
    if maze.source is None or maze.target is None:
        raise MazeError("shortest-path oracle needs both source and target")
    dt = distance_map(maze, maze.target)
    if dt[maze.source] < 0:
        raise Unreachable("target unreachable from source")
    d = int(dt[maze.source])
    H, W = maze.walls.shape
    mask = np.zeros((H, W), dtype=bool)
    cur = maze.source
    mask[cur] = True
    while cur != maze.target:
        for dy, dx in PRIORITY_MOVES:
            ny, nx = cur[0] + dy, cur[1] + dx
            if 0 <= ny < H and 0 <= nx < W and dt[ny, nx] == dt[cur] - 1:
                cur = (ny, nx)
                break
        mask[cur] = True
    return d, mask


def dfs_order(maze: Maze, start: tuple[int, int]) -> list[tuple[int, int]]:
    """Priority depth-first search visit order (down > right > up > left).

    Neighbours not moved onto are put on a stack with the current event
    counter and their direction rank; re-encountered entries refresh their
    recency.  When stuck, the entry minimising (recency, direction rank) --
    i.e. the most recent push, ties broken toward higher-priority moves --
    is popped and the search teleports there.
    """
    if maze.walls[start]:
        raise MazeError(f"DFS start {start} is a wall")
    H, W = maze.walls.shape
    visited = {start}
    order = [start]
    stack: dict[tuple[int, int], tuple[int, float]] = {}  # tile -> (event, rank)
    event = 0
    cur = start
    while True:
        cands = []
        for (dy, dx), rank in zip(PRIORITY_MOVES, DIRECTION_RANKS):
            ny, nx = cur[0] + dy, cur[1] + dx
            if 0 <= ny < H and 0 <= nx < W and not maze.walls[ny, nx] and (ny, nx) not in visited:
                cands.append((rank, (ny, nx)))
        event += 1
        if cands:
            _, nxt = cands[0]
            for rank, tile in cands[1:]:
                stack[tile] = (event, rank)
            stack.pop(nxt, None)
        elif stack:
            # most recent event first; direction rank breaks same-event ties
            nxt = min(stack, key=lambda tile: (-stack[tile][0], stack[tile][1]))
            del stack[nxt]
        else:
            return order
        visited.add(nxt)
        order.append(nxt)
        cur = nxt


def diameter_oracle(maze: Maze) -> tuple[int, tuple[tuple[int, int], tuple[int, int]]]:
    """Longest shortest path over all components, in tiles (= moves + 1).

    Returns (length, (u, v)) with u the first tile (row-major) achieving the
    maximum eccentricity and v the first tile farthest from u.
    """
    tiles = [(int(p[0]), int(p[1])) for p in np.argwhere(~maze.walls)]
    if not tiles:
        raise MazeError("maze has no empty tiles")
    best_len = -1
    best_pair = None
    for u in tiles:  # argwhere order is row-major
        dist = distance_map(maze, u)
        ecc = int(dist.max())
        if ecc + 1 > best_len:
            far = tuple(np.unravel_index(int(np.argmax(dist)), dist.shape))
            best_len = ecc + 1
            best_pair = (u, (int(far[0]), int(far[1])))
    return best_len, best_pair


def normalized_accuracy(predicted: np.ndarray, truth: np.ndarray) -> float:
    """100 * (1 - mse / mse_of_all_zeros), after clipping predictions to
    [0, 1].  Can be negative for confidently wrong outputs."""
    if predicted.shape != truth.shape:
        raise MazeError(
            f"prediction shape {predicted.shape} does not match truth {truth.shape}"
        )
    truth = truth.astype(np.float64)
    clipped = np.clip(predicted, 0.0, 1.0)
    mse = float(np.mean((clipped - truth) ** 2))
    mse_zero = float(np.mean(truth ** 2))
    if mse_zero == 0.0:
        if mse == 0.0:
            return 100.0
        raise MazeError("empty ground truth with nonzero prediction error")
    return 100.0 * (1.0 - mse / mse_zero)
