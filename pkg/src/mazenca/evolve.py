"""Online adversarial dataset evolution.

While the solver under test handles the current dataset comfortably (mean
loss under the threshold), a sampled batch of mazes is mutated, re-labeled
with the oracle, and scored by the loss each offspring induces; offspring
strictly fitter than the least fit incumbents replace them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import DatasetRecord
from .grid import Maze, MazeError
from .oracle import (
    Unreachable,
    canonical_shortest_path,
    diameter_oracle,
    shortest_path_union,
)


@dataclass(frozen=True)
class EvolutionConfig:
    generations: int
    task: str = "shortest_path"
    loss_threshold: float = 1e-3
    batch_size: int = 64
    n_flips: int | None = None  # default ceil(0.05 * H * W)
    seed: int = 0


@dataclass
class GenerationStats:
    mean_loss: float
    mean_solution_length: float
    replacements: int
    mutated: bool


def solver_loss(solver, record: DatasetRecord) -> float:
    pred = np.clip(solver.solve(record.maze), 0.0, 1.0)
    truth = record.solution.astype(np.float64)
    return float(np.mean((pred - truth) ** 2))


def label_maze(maze: Maze, task: str) -> tuple[np.ndarray, int]:
    """Oracle label: (solution mask, solution length in tiles)."""
    if task == "shortest_path":
        d, mask = canonical_shortest_path(maze)
        return mask, d + 1
    if task == "diameter":
        length, (u, v) = diameter_oracle(maze)
        if u == v:
            mask = np.zeros(maze.walls.shape, dtype=bool)
            mask[u] = True
        else:
            _, mask = canonical_shortest_path(
                Maze(walls=maze.walls, source=u, target=v)
            )
        return mask, length
    raise MazeError(f"unknown task {task!r}")


def mutate_maze(maze: Maze, rng: np.random.Generator, n_flips: int,
                task: str = "shortest_path", max_tries: int = 100) -> Maze | None:
    """Flip ``n_flips`` distinct non-endpoint tiles between empty and wall.
    For the shortest-path task an offspring that breaks reachability is
    resampled; after ``max_tries`` the offspring is abandoned (None)."""
    if n_flips < 1:
        raise MazeError("n_flips must be at least 1")
    H, W = maze.walls.shape
    candidates = [
        (y, x)
        for y in range(H)
        for x in range(W)
        if (y, x) != maze.source and (y, x) != maze.target
    ]
    if n_flips > len(candidates):
        raise MazeError("n_flips exceeds the number of mutable tiles")
    for _ in range(max_tries):
        walls = maze.walls.copy()
        picks = rng.choice(len(candidates), size=n_flips, replace=False)
        for k in picks:
            walls[candidates[k]] ^= True
        child = Maze(walls=walls, source=maze.source, target=maze.target)
        if task == "shortest_path":
            try:
                shortest_path_union(child)
            except Unreachable:
                continue
        elif not np.any(~walls):
            continue
        return child
    return None


def _default_flips(maze: Maze) -> int:
    return math.ceil(0.05 * maze.height * maze.width)


def evolve_step(
    dataset: list[DatasetRecord],
    solver,
    cfg: EvolutionConfig,
    rng: np.random.Generator,
) -> tuple[list[DatasetRecord], GenerationStats]:
    if cfg.batch_size > len(dataset):
        raise MazeError("batch_size exceeds dataset size")
    fitness = [solver_loss(solver, rec) for rec in dataset]
    mean_loss = float(np.mean(fitness))
    mean_len = float(np.mean([rec.meta.get("d_tiles", int(rec.solution.sum()))
                              for rec in dataset]))
    if mean_loss >= cfg.loss_threshold:
        return dataset, GenerationStats(mean_loss, mean_len, 0, mutated=False)

    parents = rng.choice(len(dataset), size=cfg.batch_size, replace=False)
    offspring: list[tuple[float, DatasetRecord]] = []
    for i in parents:
        parent = dataset[int(i)]
        n_flips = cfg.n_flips if cfg.n_flips is not None else _default_flips(parent.maze)
        child_maze = mutate_maze(parent.maze, rng, n_flips, task=cfg.task)
        if child_maze is None:
            continue
        mask, length = label_maze(child_maze, cfg.task)
        child = DatasetRecord(
            id=parent.id, task=cfg.task, maze=child_maze, solution=mask,
            meta={**parent.meta, "d_tiles": length},
        )
        offspring.append((solver_loss(solver, child), child))

    new_dataset = list(dataset)
    order = np.argsort(fitness, kind="stable")  # least fit first
    offspring.sort(key=lambda pair: pair[0], reverse=True)
    replacements = 0
    oi = 0
    for pos in order:
        if oi >= len(offspring):
            break
        fit, child = offspring[oi]
        if fit > fitness[int(pos)]:
            new_dataset[int(pos)] = child
            replacements += 1
            oi += 1
        else:
            break
    mean_len = float(np.mean([rec.meta.get("d_tiles", int(rec.solution.sum()))
                              for rec in new_dataset]))
    return new_dataset, GenerationStats(mean_loss, mean_len, replacements, mutated=True)


def run_evolution(
    dataset: list[DatasetRecord],
    solver,
    cfg: EvolutionConfig,
) -> tuple[list[DatasetRecord], list[GenerationStats]]:
    rng = np.random.default_rng(cfg.seed)
    stats: list[GenerationStats] = []
    for _ in range(cfg.generations):
        dataset, gen_stats = evolve_step(dataset, solver, cfg, rng)
        stats.append(gen_stats)
    return dataset, stats
