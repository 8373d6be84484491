import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mazenca.dfs import run_dfs
from mazenca.diameter import (
    calibrate_eccentricity,
    diameter_nca,
    schedule_dijkstra_calls,
)
from mazenca.grid import GenConfig, Maze, MazeError, generate_maze, parse_maze
from mazenca.oracle import diameter_oracle, distance_map, shortest_path_union


def walls_only(text):
    return Maze(walls=parse_maze(text).walls)


def test_calibration():
    assert calibrate_eccentricity(1) == 0
    assert calibrate_eccentricity(5) == 4
    with pytest.raises(MazeError):
        calibrate_eccentricity(0)


def test_open_square():
    run = diameter_nca(walls_only("...\n...\n..."))
    assert run.diameter_len == 5
    assert run.best_endpoint == (0, 0)
    assert run.farthest == (2, 2)


def test_corridor():
    run = diameter_nca(walls_only("....."))
    assert run.diameter_len == 5
    assert run.witness.all()


def test_singleton_component():
    run = diameter_nca(walls_only(".#"))
    assert run.diameter_len == 1
    assert run.witness.sum() == 1 and run.witness[0, 0]


def test_componentwise_restarts():
    # two components; the right one is longer and wins
    run = diameter_nca(walls_only(".#..."))
    assert run.diameter_len == 3
    assert run.best_endpoint == (0, 2)
    # path_max is populated for every empty tile across both components
    assert run.path_max[0, 0] == 1
    assert (run.path_max[0, 2:] > 0).all()


def test_schedule_waits_match_visit_gaps():
    maze = walls_only("...\n.#.\n.#.")
    trace = run_dfs(maze, (0, 1))
    schedule = schedule_dijkstra_calls(trace)
    assert schedule[0][2] == 0  # first launch waits for nothing
    assert [tile for _, tile, _ in schedule] == trace.visit_order
    waits = [w for _, _, w in schedule]
    gaps = [b - a for a, b in zip(trace.visit_steps, trace.visit_steps[1:])]
    assert waits[1:] == gaps
    # launch steps are the running sum of the waits
    launches = [s for s, _, _ in schedule]
    assert launches == list(np.cumsum(waits))


def test_path_max_is_eccentricity_plus_one():
    maze = walls_only("...\n#..")
    run = diameter_nca(maze)
    for y, x in np.argwhere(~maze.walls):
        ecc = int(distance_map(maze, (int(y), int(x))).max())
        assert run.path_max[y, x] == ecc + 1


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), size=st.integers(4, 8))
def test_matches_oracle_with_valid_witness(seed, size):
    maze = generate_maze(GenConfig(width=size, height=size, task="diameter", seed=seed))
    run = diameter_nca(maze)
    length, _ = diameter_oracle(maze)
    assert run.diameter_len == length
    if run.best_endpoint == run.farthest:
        assert length == 1
    else:
        pair = Maze(walls=maze.walls, source=run.best_endpoint, target=run.farthest)
        d, union = shortest_path_union(pair)
        assert d + 1 == length
        np.testing.assert_array_equal(run.witness, union)
