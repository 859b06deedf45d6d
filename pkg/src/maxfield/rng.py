"""Splittable counter-based random streams and Poisson arrival generation.

Every replication owns an :class:`RngStream` derived from
``(master_seed, stream_index)``. The generator is SplitMix64 used in
counter mode: draw ``k`` of a stream with key ``K`` is
``mix64(K + k * GAMMA)``. Because the output depends only on the key and
the draw counter, the compiled kernels reproduce the same sequence
bit-for-bit, and a stream can be serialized as two integers.

Stream derivation::

    key = mix64(mix64(master_seed) ^ mix64(stream_index + GAMMA))

``mix64`` is the SplitMix64 finalizer (a bijection on 64-bit words with
full avalanche), so nearby seeds or indices give unrelated keys.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.special import ndtri

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB
_TWO_M53 = 2.0 ** -53


def mix64(z: int) -> int:
    """SplitMix64 output function on a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return z ^ (z >> 31)


def stream_key(master_seed: int, stream_index: int) -> int:
    return mix64(mix64(master_seed) ^ mix64(stream_index + GAMMA))


class RngStream:
    """Deterministic stream of 64-bit words, uniforms and derived variates."""

    __slots__ = ("master_seed", "stream_index", "key", "counter")

    def __init__(self, master_seed: int, stream_index: int, key: int | None = None,
                 counter: int = 0):
        self.master_seed = int(master_seed) & MASK64
        self.stream_index = int(stream_index) & MASK64
        self.key = stream_key(self.master_seed, self.stream_index) if key is None else key
        self.counter = counter

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.key + self.counter * GAMMA)

    def uniform(self) -> float:
        """Uniform on [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _TWO_M53

    def exponential(self) -> float:
        return exponential_from_uniform(self.uniform())

    def halfnormal(self, sigma: float = 1.0) -> float:
        return halfnormal_from_uniform(self.uniform(), sigma)

    def get_state(self) -> dict:
        return {"master_seed": self.master_seed, "stream_index": self.stream_index,
                "key": self.key, "counter": self.counter}

    @classmethod
    def from_state(cls, state: dict) -> "RngStream":
        return cls(state["master_seed"], state["stream_index"], key=state["key"],
                   counter=state["counter"])

    def __repr__(self):
        return (f"RngStream(master_seed={self.master_seed}, "
                f"stream_index={self.stream_index}, counter={self.counter})")


def derive_stream(master_seed: int, stream_index: int) -> RngStream:
    return RngStream(master_seed, stream_index)


def derive_seed(master_seed: int, *tags: int) -> int:
    """Sub-seed for an independent family of streams (e.g. one per method)."""
    s = int(master_seed) & MASK64
    for t in tags:
        s = mix64(s ^ mix64((int(t) & MASK64) + GAMMA))
    return s


def exponential_from_uniform(u: float) -> float:
    """Inverse CDF of the standard exponential, ``-log(1 - u)``."""
    return -math.log1p(-u)


def halfnormal_from_uniform(u: float, sigma: float = 1.0) -> float:
    """Inverse CDF of ``|N(0, sigma^2)|``.

    Written as ``-sigma * ndtri((1 - u) / 2)`` so the upper tail is taken
    from the accurate lower branch of ``ndtri``.
    """
    return -sigma * float(ndtri(0.5 * (1.0 - u)))


def sample_exponential(stream: RngStream) -> float:
    return stream.exponential()


@dataclass
class ArrivalSequence:
    """Descending Poisson arrivals ``t_i = 1 / (E_1 + ... + E_i)``."""

    exponentials: list = field(default_factory=list)
    partial_sum: float = 0.0

    @property
    def index(self) -> int:
        return len(self.exponentials)

    def push(self, e: float) -> float:
        """Append an exponential and return the new arrival."""
        self.exponentials.append(e)
        self.partial_sum += e
        return 1.0 / self.partial_sum


def next_arrival(seq: ArrivalSequence, stream: RngStream) -> tuple[float, int]:
    t = seq.push(stream.exponential())
    return t, seq.index
