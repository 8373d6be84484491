import hashlib

import numpy as np
import pytest

from mazenca.cli import main
from mazenca.dataset import read_dataset, read_trace
from mazenca.oracle import dfs_order
from mazenca.grid import parse_maze


def write_maze(tmp_path, text, name="maze.txt"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_gen_writes_dataset(tmp_path, capsys):
    out = tmp_path / "data.jsonl"
    assert main(["gen", "--task", "shortest_path", "--n", "5",
                 "--size", "8", "--seed", "3", "--out", str(out)]) == 0
    records = read_dataset(out)
    assert len(records) == 5
    for rec in records:
        assert rec.meta["d_tiles"] == int(rec.solution.sum())


def test_gen_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    args = ["gen", "--task", "shortest_path", "--n", "4", "--size", "8",
            "--seed", "1"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_solve_prints_overlay_and_length(tmp_path, capsys):
    path = write_maze(tmp_path, "S...T")
    assert main(["solve", "--maze", path]) == 0
    out = capsys.readouterr().out
    assert "SoooT" in out
    assert "d_tiles: 5" in out


def test_solve_odd_distance(tmp_path, capsys):
    path = write_maze(tmp_path, "S..T")
    assert main(["solve", "--maze", path]) == 0
    assert "d_tiles: 4" in capsys.readouterr().out


def test_solve_unreachable(tmp_path, capsys):
    path = write_maze(tmp_path, "S#T")
    assert main(["solve", "--maze", path]) == 1
    assert "unreachable" in capsys.readouterr().err


def test_dfs_prints_visit_order(tmp_path, capsys):
    path = write_maze(tmp_path, "..\n..")
    assert main(["dfs", "--maze", path, "--start", "0,0"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines == ["0,0", "1,0", "1,1", "0,1"]


def test_dfs_default_start_is_first_empty(tmp_path, capsys):
    path = write_maze(tmp_path, "#.\n..")
    assert main(["dfs", "--maze", path]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    expect = dfs_order(parse_maze("#.\n.."), (0, 1))
    assert lines == [f"{r},{c}" for r, c in expect]


def test_diameter_command(tmp_path, capsys):
    path = write_maze(tmp_path, "...\n...\n...")
    assert main(["diameter", "--maze", path]) == 0
    out = capsys.readouterr().out
    assert "length: 5" in out
    assert "endpoints: (0, 0) (2, 2)" in out


def test_verify_command(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("NCA_THREADS", "1")
    assert main(["verify", "--task", "shortest_path", "--n", "5",
                 "--size", "8", "--seed", "7"]) == 0
    assert "5/5 exact" in capsys.readouterr().out


def test_evolve_command(tmp_path, capsys):
    data = tmp_path / "data.jsonl"
    main(["gen", "--task", "shortest_path", "--n", "8", "--size", "8",
          "--seed", "2", "--out", str(data)])
    out = tmp_path / "evolved.jsonl"
    stats = tmp_path / "stats.csv"
    assert main(["evolve", "--dataset", str(data), "--solver", "budget:4",
                 "--generations", "3", "--out", str(out),
                 "--stats-out", str(stats), "--batch-size", "4",
                 "--n-flips", "3", "--loss-threshold", "1.0"]) == 0
    assert len(read_dataset(out)) == 8
    rows = stats.read_text().strip().split("\n")
    assert rows[0] == "generation,mean_loss,mean_solution_length,replacements,mutated"
    assert len(rows) == 4


def test_trace_command_and_determinism(tmp_path):
    path = write_maze(tmp_path, "S...T")
    t1, t2 = tmp_path / "a.trace", tmp_path / "b.trace"
    assert main(["trace", "--maze", path, "--algo", "bfs", "--out", str(t1)]) == 0
    assert main(["trace", "--maze", path, "--algo", "bfs", "--out", str(t2)]) == 0
    assert hashlib.sha256(t1.read_bytes()).digest() == \
        hashlib.sha256(t2.read_bytes()).digest()
    frames = read_trace(t1)
    assert frames.shape == (3, 3, 1, 5)  # meet_step 3, three hidden channels
    assert frames[0, 0, 0, 0] == 1.0  # flood_s starts at the source


def test_trace_extract_and_dfs(tmp_path):
    path = write_maze(tmp_path, "S...T")
    out = tmp_path / "e.trace"
    assert main(["trace", "--maze", path, "--algo", "extract",
                 "--out", str(out)]) == 0
    assert read_trace(out).shape[1] == 5
    path2 = write_maze(tmp_path, "...\n...", name="open.txt")
    out2 = tmp_path / "d.trace"
    assert main(["trace", "--maze", path2, "--algo", "dfs", "--out", str(out2),
                 "--start", "0,0"]) == 0
    assert read_trace(out2).shape[1] == 11


def test_render_command(tmp_path, capsys):
    path = write_maze(tmp_path, "S..T")
    assert main(["render", "--maze", path, "--algo", "bfs",
                 "--channel", "0"]) == 0
    out = capsys.readouterr().out
    assert "step 1" in out and "step 2" in out


def test_render_channel_out_of_range(tmp_path, capsys):
    path = write_maze(tmp_path, "S..T")
    assert main(["render", "--maze", path, "--algo", "bfs",
                 "--channel", "9"]) == 1
    assert "channel" in capsys.readouterr().err


def test_missing_file_is_runtime_error(tmp_path, capsys):
    assert main(["solve", "--maze", str(tmp_path / "nope.txt")]) == 1
