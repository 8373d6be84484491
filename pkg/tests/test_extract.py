import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mazenca.bfs import run_bfs
from mazenca.extract import build_extract_weights, run_extract
from mazenca.grid import GenConfig, MazeError, generate_maze, parse_maze
from mazenca.oracle import shortest_path_union


def test_weight_shapes():
    ks = build_extract_weights()
    assert ks.weights.shape == (5, 8, 3, 3)
    assert ks.bias[0] == -1.0


def extract_mask(maze):
    return run_extract(run_bfs(maze)).mask


def test_corridor_extraction():
    maze = parse_maze("S...T")
    np.testing.assert_array_equal(extract_mask(maze), np.ones((1, 5), dtype=bool))


def test_open_square_extracts_both_staircases():
    d, union = shortest_path_union(parse_maze("S.\n.T"))
    np.testing.assert_array_equal(extract_mask(parse_maze("S.\n.T")), union)


def test_adjacent_endpoints():
    mask = extract_mask(parse_maze("ST"))
    assert mask.all()


def test_odd_distance_two_tile_meet():
    # d = 3: the floods meet on a doubly-flooded edge, not a single tile
    maze = parse_maze("S..T")
    np.testing.assert_array_equal(extract_mask(maze), np.ones((1, 4), dtype=bool))


def test_requires_met_flood():
    bfs = run_bfs(parse_maze("S#T"))
    with pytest.raises(MazeError):
        run_extract(bfs)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_extraction_equals_union_of_shortest_paths(seed):
    maze = generate_maze(GenConfig(width=8, height=8, seed=seed))
    _, union = shortest_path_union(maze)
    np.testing.assert_array_equal(extract_mask(maze), union)


def test_off_path_detour_excluded():
    # the top-row detour is 2 moves longer than the direct bottom row and
    # never enters the mask
    maze = parse_maze("....\nS..T")
    mask = extract_mask(maze)
    assert not mask[0].any()
    assert mask[1].all()


def test_steps_used_is_reported():
    result = run_extract(run_bfs(parse_maze("S.....T")))
    assert result.steps_used >= 1
