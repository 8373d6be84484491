"""Dataset records, JSON-Lines files, and the binary trace format."""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid import Maze, MazeError, parse_maze, render_maze


@dataclass
class DatasetRecord:
    id: str
    task: str  # shortest_path | diameter
    maze: Maze
    solution: np.ndarray  # bool H x W
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.solution.shape != self.maze.walls.shape:
            raise MazeError(
                f"solution shape {self.solution.shape} does not match maze"
            )


def _mask_rows(mask: np.ndarray) -> list[str]:
    return ["".join("1" if b else "0" for b in row) for row in mask]


def _rows_mask(rows: list[str], width: int) -> np.ndarray:
    mask = np.zeros((len(rows), width), dtype=bool)
    for r, row in enumerate(rows):
        if len(row) != width or set(row) - {"0", "1"}:
            raise MazeError(f"bad solution row {r}: {row!r}")
        mask[r] = [ch == "1" for ch in row]
    return mask


def record_to_json(rec: DatasetRecord) -> str:
    obj = {
        "id": rec.id,
        "task": rec.task,
        "maze": render_maze(rec.maze).split("\n"),
        "solution": _mask_rows(rec.solution),
        "meta": rec.meta,
    }
    return json.dumps(obj, separators=(",", ":"), sort_keys=False)


def record_from_json(line: str) -> DatasetRecord:
    obj = json.loads(line)
    maze = parse_maze("\n".join(obj["maze"]))
    solution = _rows_mask(obj["solution"], maze.width)
    if len(obj["solution"]) != maze.height:
        raise MazeError("solution height does not match maze")
    return DatasetRecord(
        id=obj["id"], task=obj["task"], maze=maze, solution=solution,
        meta=obj.get("meta", {}),
    )


def write_dataset(path: str | Path, records: list[DatasetRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(record_to_json(rec) + "\n")


def read_dataset(path: str | Path) -> list[DatasetRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(record_from_json(line))
            except (MazeError, KeyError, json.JSONDecodeError) as exc:
                raise MazeError(f"{path}:{lineno}: {exc}") from exc
    return records


TRACE_MAGIC = b"NCAT"
TRACE_VERSION = 1


def write_trace(path: str | Path, frames: list[np.ndarray]) -> None:
    """Binary per-step channel dump: magic, version, C, H, W, steps as
    little-endian u32, then float32 values in step/channel/row-major order."""
    if not frames:
        raise MazeError("trace needs at least one frame")
    C, H, W = frames[0].shape
    with open(path, "wb") as fh:
        fh.write(TRACE_MAGIC)
        fh.write(struct.pack("<IIIII", TRACE_VERSION, C, H, W, len(frames)))
        for frame in frames:
            if frame.shape != (C, H, W):
                raise MazeError("inconsistent frame shape in trace")
            fh.write(frame.astype("<f4").tobytes(order="C"))


def read_trace(path: str | Path) -> np.ndarray:
    """Returns a steps x C x H x W float32 array."""
    data = Path(path).read_bytes()
    if data[:4] != TRACE_MAGIC:
        raise MazeError("not a trace file (bad magic)")
    version, C, H, W, steps = struct.unpack("<IIIII", data[4:24])
    if version != TRACE_VERSION:
        raise MazeError(f"unsupported trace version {version}")
    expected = 24 + 4 * steps * C * H * W
    if len(data) != expected:
        raise MazeError(f"trace payload length {len(data)} != {expected}")
    values = np.frombuffer(data[24:], dtype="<f4")
    return values.reshape(steps, C, H, W)
