"""Signals, gap masks and seeded gap placement.

All indices are 0-based. A gap covers ``[start, start + length)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundsError, PlacementError, ShapeError, ValidationError

MASK64 = 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class Signal:
    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=np.float64)
        if x.ndim != 1 or x.size < 1:
            raise ShapeError("signal must be a non-empty 1-D array")
        if not np.all(np.isfinite(x)):
            raise ValidationError("signal contains NaN or Inf")
        if int(self.sample_rate) <= 0:
            raise ValidationError("sample_rate must be positive")
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self):
        return self.samples.size

    def with_samples(self, samples) -> "Signal":
        return Signal(samples, self.sample_rate)


@dataclass(frozen=True)
class Gap:
    start: int
    length: int

    @property
    def stop(self) -> int:
        return self.start + self.length


@dataclass(frozen=True)
class GapMask:
    """Disjoint, sorted, non-adjacent gaps in a signal of ``signal_length`` samples."""

    gaps: tuple[Gap, ...]
    signal_length: int

    def __post_init__(self):
        gaps = tuple(g if isinstance(g, Gap) else Gap(*g) for g in self.gaps)
        object.__setattr__(self, "gaps", gaps)
        n = int(self.signal_length)
        if n < 1:
            raise ValidationError("signal_length must be positive")
        prev_stop = None
        for i, g in enumerate(gaps):
            if g.length < 1:
                raise ValidationError(f"gap {i} (start {g.start}) has non-positive length")
            if g.start < 0 or g.stop > n:
                raise ValidationError(
                    f"gap {i} [{g.start}, {g.stop}) lies outside [0, {n})")
            if prev_stop is not None and g.start <= prev_stop:
                raise ValidationError(
                    f"gap {i} (start {g.start}) overlaps, touches or precedes gap {i - 1}")
            prev_stop = g.stop

    @classmethod
    def empty(cls, n: int) -> "GapMask":
        return cls((), n)

    def missing(self) -> np.ndarray:
        """Boolean array, True on missing samples."""
        m = np.zeros(self.signal_length, dtype=bool)
        for g in self.gaps:
            m[g.start:g.stop] = True
        return m

    def reliable(self) -> np.ndarray:
        return ~self.missing()

    @property
    def n_missing(self) -> int:
        return sum(g.length for g in self.gaps)


@dataclass
class Segment:
    """Contiguous working copy of part of a signal.

    ``missing`` holds sorted local indices of the samples to be estimated.
    """

    samples: np.ndarray
    offset: int = 0
    missing: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.intp))

    def __post_init__(self):
        self.samples = np.array(self.samples, dtype=np.float64)
        self.missing = np.unique(np.asarray(self.missing, dtype=np.intp))
        if self.missing.size and (self.missing[0] < 0 or self.missing[-1] >= self.samples.size):
            raise BoundsError("missing index outside the segment")

    def __len__(self):
        return self.samples.size

    @property
    def missing_mask(self) -> np.ndarray:
        m = np.zeros(self.samples.size, dtype=bool)
        m[self.missing] = True
        return m

    @property
    def is_contiguous(self) -> bool:
        k = self.missing
        return k.size > 0 and k[-1] - k[0] + 1 == k.size


def extract_segment(signal: Signal, mask: GapMask, start: int, length: int) -> Segment:
    n = len(signal)
    if mask.signal_length != n:
        raise ShapeError("mask length differs from signal length")
    if start < 0 or length < 0 or start + length > n:
        raise BoundsError(f"segment [{start}, {start + length}) outside signal of length {n}")
    local = np.flatnonzero(mask.missing()[start:start + length])
    return Segment(signal.samples[start:start + length].copy(), start, local)


def project_consistent(original: Signal, mask: GapMask, candidate: Signal) -> Signal:
    """Keep ``original`` on reliable samples and ``candidate`` inside the gaps."""
    if len(original) != len(candidate) or len(original) != mask.signal_length:
        raise ShapeError("original, candidate and mask must have equal length")
    if original.sample_rate != candidate.sample_rate:
        raise ShapeError("sample rates differ")
    out = original.samples.copy()
    miss = mask.missing()
    out[miss] = candidate.samples[miss]
    return original.with_samples(out)


class SplitMix64:
    """SplitMix64 generator (Steele, Lea & Flood), 64-bit unsigned outputs."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` without modulo bias."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            v = self.next()
            if v < limit:
                return v % bound


def gap_length_samples(gap_length_ms: float, sample_rate: int) -> int:
    # round half away from zero, not banker's rounding
    return int(np.floor(gap_length_ms * sample_rate / 1000.0 + 0.5))


def generate_gaps(n: int, sample_rate: int, gap_length_ms: float, count: int = 10,
                  min_separation: int = 8192, border: int = 4096, seed: int = 0,
                  max_attempts: int = 10000) -> GapMask:
    """Place ``count`` equal gaps at pseudorandom positions.

    Each attempt draws all starts uniformly from
    ``[border, n - border - length]`` with :class:`SplitMix64`, sorts them and
    accepts if consecutive gaps leave at least ``min_separation`` reliable
    samples between them. The same arguments always give the same mask.
    """
    length = gap_length_samples(gap_length_ms, sample_rate)
    if length < 1 or count < 0:
        raise PlacementError("gap length must be at least one sample")
    if count == 0:
        return GapMask.empty(n)
    need = count * length + (count - 1) * max(min_separation, 1) + 2 * border
    if need > n:
        raise PlacementError(
            f"{count} gaps of {length} samples need {need} samples, signal has {n}")
    span = n - 2 * border - length + 1
    rng = SplitMix64(seed)
    for _ in range(max_attempts):
        starts = sorted(border + rng.below(span) for _ in range(count))
        if all(b - (a + length) >= max(min_separation, 1) for a, b in zip(starts, starts[1:])):
            return GapMask(tuple(Gap(s, length) for s in starts), n)
    raise PlacementError(f"no valid placement found in {max_attempts} attempts")
