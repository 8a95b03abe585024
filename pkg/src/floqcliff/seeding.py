"""Deterministic, order-independent randomness for quenched disorder.

Every gate in a circuit realization gets its own counter-based stream keyed by
(master seed, layer, anchor), so the gate drawn at an anchor never depends on
the order in which the registry is queried, and parallel realizations can
share nothing.  The stream is a splitmix64 sequence; all bounded draws use
masks plus rejection, which keeps them exactly uniform.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z &= _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def zigzag(k: int) -> int:
    """Map signed ints to non-negative ones (0, -1, 1, -2, ... -> 0, 1, 2, 3, ...)."""
    return 2 * k if k >= 0 else -2 * k - 1


def derive_key(*parts: int) -> int:
    """Collision-resistant 64-bit key from an ordered tuple of integers."""
    h = 0x243F6A8885A308D3
    for i, v in enumerate(parts):
        h = _mix(h + (i + 1) * _GOLDEN + (int(v) & _MASK64))
    return h


class WordStream:
    """splitmix64 stream of 64-bit words with exact bounded draws."""

    __slots__ = ("state",)

    def __init__(self, key: int):
        self.state = key & _MASK64

    def word(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK64
        return _mix(self.state)

    def bits(self, k: int) -> int:
        """Uniform integer in [0, 2^k)."""
        return self.word() >> (64 - k)

    def nonzero_bits(self, k: int) -> int:
        """Uniform integer in [1, 2^k)."""
        while True:
            w = self.word() >> (64 - k)
            if w:
                return w
