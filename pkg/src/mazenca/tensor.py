"""Dense convolution and activation engine for channel tensors.

All cellular-automaton pipelines run on C x H x W float64 tensors.  Values on
the logical channels stay exactly representable (small integers and fifths),
so no tolerances are needed inside the automata themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class TensorError(ValueError):
    pass


@dataclass
class KernelStack:
    """out x in x k x k convolution weights with per-output-channel bias.

    ``taps`` caches the nonzero entries in a fixed order (output channel,
    then input channel, then kernel row, then kernel column) so convolution
    uses one deterministic summation order.
    """

    weights: np.ndarray
    bias: np.ndarray
    _taps: list | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.weights.ndim != 4:
            raise TensorError("weights must be out x in x k x k")
        if self.weights.shape[2] != self.weights.shape[3] or self.weights.shape[2] % 2 == 0:
            raise TensorError("kernel must be square with odd size")
        if not np.all(np.isfinite(self.weights)):
            raise TensorError("weights must be finite")
        if self.bias.shape != (self.weights.shape[0],):
            raise TensorError("bias length must equal out_channels")

    @property
    def out_channels(self) -> int:
        return self.weights.shape[0]

    @property
    def in_channels(self) -> int:
        return self.weights.shape[1]

    @property
    def k(self) -> int:
        return self.weights.shape[2]

    def taps(self):
        if self._taps is None:
            idx = np.argwhere(self.weights != 0.0)
            self._taps = [
                (int(co), int(ci), int(i), int(j), float(self.weights[co, ci, i, j]))
                for co, ci, i, j in idx
            ]
        return self._taps


def zeros_kernel(out_channels: int, in_channels: int, k: int) -> KernelStack:
    return KernelStack(
        weights=np.zeros((out_channels, in_channels, k, k), dtype=np.float64),
        bias=np.zeros(out_channels, dtype=np.float64),
    )


def conv2d(x: np.ndarray, kernels: KernelStack) -> np.ndarray:
    """Stride-1 convolution with zero padding of width (k-1)/2."""
    if x.shape[0] != kernels.in_channels:
        raise TensorError(
            f"input has {x.shape[0]} channels, kernels expect {kernels.in_channels}"
        )
    _, H, W = x.shape
    pad = (kernels.k - 1) // 2
    xp = np.pad(x, ((0, 0), (pad, pad), (pad, pad)))
    out = np.repeat(kernels.bias[:, None, None], H, axis=1).repeat(W, axis=2).astype(np.float64)
    for co, ci, i, j, w in kernels.taps():
        out[co] += w * xp[ci, i : i + H, j : j + W]
    return out


def step(x: np.ndarray) -> np.ndarray:
    """1 where x > 0, else 0 (strict; an exactly-zero pre-activation means
    "no flooded neighbour" and must not fire)."""
    return (x > 0.0).astype(np.float64)


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def sawtooth(x: np.ndarray, a: int) -> np.ndarray:
    """Triangular bump max(0, 1 - |x - a|): on integer inputs, the indicator
    of x == a."""
    return np.maximum(0.0, 1.0 - np.abs(x - a))


def apply_activation(x: np.ndarray, channel: int, kind: str, a: int = 0) -> np.ndarray:
    if not 0 <= channel < x.shape[0]:
        raise TensorError(f"channel {channel} out of range for {x.shape[0]} channels")
    out = x.copy()
    if kind == "step":
        out[channel] = step(x[channel])
    elif kind == "relu":
        out[channel] = relu(x[channel])
    elif kind == "sawtooth":
        out[channel] = sawtooth(x[channel], a)
    else:
        raise TensorError(f"unknown activation {kind!r}")
    return out


def channel_reduce(x: np.ndarray, channel: int, mode: str) -> float | None:
    if not 0 <= channel < x.shape[0]:
        raise TensorError(f"channel {channel} out of range")
    plane = x[channel]
    if mode == "spatial_max":
        return float(plane.max())
    if mode == "spatial_min_positive":
        positive = plane[plane > 0.0]
        return float(positive.min()) if positive.size else None
    raise TensorError(f"unknown reduce mode {mode!r}")


def assert_integer_valued(x: np.ndarray, tol: float = 1e-9) -> None:
    if np.abs(x - np.round(x)).max() >= tol:
        raise TensorError("channel expected to be integer-valued")


# elementary 3x3 weight matrices

def w_center3() -> np.ndarray:
    m = np.zeros((3, 3))
    m[1, 1] = 1.0
    return m


def w_von_neumann() -> np.ndarray:
    m = np.zeros((3, 3))
    for i, j in ((0, 1), (1, 0), (1, 1), (1, 2), (2, 1)):
        m[i, j] = 1.0
    return m


def w_offset3(i: int, j: int) -> np.ndarray:
    m = np.zeros((3, 3))
    m[i, j] = 1.0
    return m
