"""Random erasure patterns: which coefficient indices survive transmission.

Two sampling modes. Bernoulli keeps each index independently with
probability k/m (k is then the mean received count and may be fractional).
Fixed keeps a uniformly random subset of exactly k indices. Bernoulli is
the default everywhere because it is the model the guarantees are stated
for; fixed mode exists for controlled comparisons.

Randomness is counter-based: a (base_seed, stream_id) pair keys a Philox
generator, so trial t can use stream_id = t and parallel trials stay
reproducible regardless of scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Stream id reserved for frame construction so it can never collide with a
# trial index (trial streams count up from 0).
FRAME_STREAM = 2**64 - 1

MODES = ("bernoulli", "fixed")


@dataclass(frozen=True)
class RngSpec:
    """Key for one independent random stream."""

    base_seed: int
    stream_id: int

    def __post_init__(self):
        for name in ("base_seed", "stream_id"):
            v = getattr(self, name)
            if not (0 <= int(v) < 2**64):
                raise ValueError(f"{name} must fit in 64 bits")

    def generator(self) -> np.random.Generator:
        key = np.array([self.base_seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class ErasurePattern:
    """The received index set σ for one transmission."""

    m: int
    received: tuple
    mode: str
    k: float

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown sampling mode {self.mode!r}")
        prev = None
        for idx in self.received:
            if idx < 0 or idx >= self.m:
                raise ValueError("received index out of range")
            if prev is not None and idx <= prev:
                raise ValueError("received indices must be strictly increasing")
            prev = idx
        if self.mode == "fixed" and len(self.received) != int(self.k):
            raise ValueError("fixed mode requires exactly k received indices")

    @property
    def size(self) -> int:
        return len(self.received)

    def indices(self) -> np.ndarray:
        return np.asarray(self.received, dtype=np.intp)


def bernoulli_select(m: int, k: float, rng: RngSpec) -> ErasurePattern:
    """Keep each of the m indices independently with probability k/m.

    The received count is Binomial(m, k/m): mean k, possibly empty.
    """
    m = int(m)
    if m < 1:
        raise ValueError("m must be ≥ 1")
    k = float(k)
    if not (0.0 < k < m):
        raise ValueError("k must lie in (0, m) for bernoulli selection")
    gen = rng.generator()
    keep = gen.random(m) < (k / m)
    received = tuple(int(i) for i in np.flatnonzero(keep))
    return ErasurePattern(m=m, received=received, mode="bernoulli", k=k)


def fixed_select(m: int, k: int, rng: RngSpec) -> ErasurePattern:
    """Keep a uniformly random subset of exactly k of the m indices.

    Partial Fisher-Yates: k swap steps over an index array, so the draw
    sequence (and hence the pattern) is stable across library versions.
    """
    m = int(m)
    if m < 1:
        raise ValueError("m must be ≥ 1")
    if int(k) != k:
        raise ValueError("fixed selection needs an integer k")
    k = int(k)
    if not (1 <= k <= m):
        raise ValueError("k must lie in [1, m] for fixed selection")
    gen = rng.generator()
    idx = np.arange(m)
    for j in range(k):
        r = j + int(gen.integers(0, m - j))
        idx[j], idx[r] = idx[r], idx[j]
    received = tuple(int(i) for i in np.sort(idx[:k]))
    return ErasurePattern(m=m, received=received, mode="fixed", k=float(k))


@dataclass(frozen=True)
class PatternStats:
    """Sample statistics over a batch of patterns sharing one m."""

    count: int
    mean_size: float
    size_variance: float
    inclusion_frequency: np.ndarray = field(repr=False)


def pattern_stats(patterns) -> PatternStats:
    """Exact mean/variance of |σ| and per-index inclusion frequencies.

    Variance is the population variance, so a single pattern reports 0.
    """
    patterns = list(patterns)
    if not patterns:
        raise ValueError("empty pattern list")
    m = patterns[0].m
    if any(p.m != m for p in patterns):
        raise ValueError("mixed m across patterns")
    sizes = np.array([p.size for p in patterns], dtype=np.float64)
    counts = np.zeros(m)
    for p in patterns:
        counts[list(p.received)] += 1.0
    freq = counts / len(patterns)
    freq.flags.writeable = False
    return PatternStats(
        count=len(patterns),
        mean_size=float(sizes.mean()),
        size_variance=float(sizes.var()),
        inclusion_frequency=freq,
    )
