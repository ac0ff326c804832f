"""SplitMix64, so random trials reproduce bit-for-bit from a seed on any platform."""
from __future__ import annotations

import zlib

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


class TrialRng:
    """SplitMix64 generator; doubles are ``(output >> 11) / 2**53``."""

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        self.state = self.seed

    @classmethod
    def derive(cls, seed: int, label: str) -> "TrialRng":
        """Independent stream for a named sub-task, stable across runs and processes."""
        return cls((int(seed) + zlib.crc32(label.encode())) & MASK64)

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return _mix(self.state)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53

    def uniforms(self, n: int) -> np.ndarray:
        """``n`` consecutive doubles, identical to ``n`` calls of :meth:`uniform`."""
        steps = np.arange(1, n + 1, dtype=np.uint64) * np.uint64(GOLDEN_GAMMA)
        z = steps + np.uint64(self.state)
        self.state = (self.state + n * GOLDEN_GAMMA) & MASK64
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z = z ^ (z >> np.uint64(31))
        return (z >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
