"""Hand-coded path extraction over a frozen flood result.

The path channel seeds on tiles where both floods overlap, then grows along
the frozen age field: a tile joins the path when a path-marked neighbour's
age is exactly one less than its own, which walks the path outward from the
meeting point toward both endpoints and covers every shortest path at once.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .bfs import AGE, FLOOD_S, FLOOD_T, BfsResult
from .grid import CH_SOURCE, CH_TARGET, MazeError
from .tensor import KernelStack, conv2d, sawtooth, step, w_center3, w_offset3, zeros_kernel

# hidden channel registry; directional channels named by the 3x3 kernel
# offset they watch (the neighbour a path activation arrives from)
PATH = 0
DIR_OFFSETS = [(0, 1), (1, 0), (1, 2), (2, 1)]  # up, left, right, down
DIR_CHANNELS = [1, 2, 3, 4]
N_HIDDEN = 5
# conv input order: 5 hidden channels then the frozen flood channels
IN_FLOOD_S, IN_FLOOD_T, IN_AGE = 5, 6, 7


@dataclass(frozen=True)
class ExtractState:
    hidden: np.ndarray  # 5 x H x W
    bfs_frozen: np.ndarray  # 3 x H x W, the terminated flood hidden state
    step: int = 0


@dataclass(frozen=True)
class ExtractResult:
    mask: np.ndarray  # bool H x W
    steps_used: int


class ExtractionFailed(MazeError):
    pass


def build_extract_weights() -> KernelStack:
    w1 = w_center3()
    ks = zeros_kernel(N_HIDDEN, 8, 3)
    w = ks.weights
    w[PATH, IN_FLOOD_S] = w1
    w[PATH, IN_FLOOD_T] = w1
    ks.bias[PATH] = -1.0
    for ch, (i, j) in zip(DIR_CHANNELS, DIR_OFFSETS):
        wij = w_offset3(i, j)
        w[ch, IN_AGE] = 2.0 * (wij - w1)
        w[ch, PATH] = wij
    return ks


_WEIGHTS: KernelStack | None = None


def _weights() -> KernelStack:
    global _WEIGHTS
    if _WEIGHTS is None:
        _WEIGHTS = build_extract_weights()
    return _WEIGHTS


def initial_state(bfs_frozen: np.ndarray) -> ExtractState:
    _, H, W = bfs_frozen.shape
    return ExtractState(hidden=np.zeros((N_HIDDEN, H, W)), bfs_frozen=bfs_frozen)


def extract_step(state: ExtractState) -> ExtractState:
    x = np.concatenate([state.hidden, state.bfs_frozen])
    out = conv2d(x, _weights())
    for ch in DIR_CHANNELS:
        out[ch] = sawtooth(out[ch], -1)
    # The path combines the overlap seed with the directional acceptances so
    # seeds survive the first step (a bare sum of directions would erase a
    # single-tile meet).
    seed = step(out[PATH])  # = step(flood_s + flood_t - 1)
    out[PATH] = step(seed + sum(out[ch] for ch in DIR_CHANNELS))
    return replace(state, hidden=out, step=state.step + 1)


def run_extract(bfs: BfsResult, max_steps: int | None = None) -> ExtractResult:
    if not bfs.met:
        raise MazeError("extraction needs a met flood result")
    onehot = bfs.final.maze_onehot
    _, H, W = onehot.shape
    if max_steps is None:
        max_steps = 4 * H * W
    state = initial_state(bfs.final.hidden)
    last_change = 0
    prev = state.hidden[PATH].copy()
    for _ in range(max_steps):
        state = extract_step(state)
        if np.array_equal(state.hidden[PATH], prev):
            mask = prev > 0.0
            src = np.argwhere(onehot[CH_SOURCE] > 0)
            tgt = np.argwhere(onehot[CH_TARGET] > 0)
            if not (mask[tuple(src[0])] and mask[tuple(tgt[0])]):
                raise ExtractionFailed(
                    "path fixpoint does not cover source and target"
                )
            return ExtractResult(mask=mask, steps_used=last_change)
        prev = state.hidden[PATH].copy()
        last_change = state.step
    raise MazeError(f"no path fixpoint within {max_steps} steps")
