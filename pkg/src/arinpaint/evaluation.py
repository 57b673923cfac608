"""Signal-to-distortion ratio and result aggregation."""
from __future__ import annotations

import math
import statistics
from dataclasses import astuple, dataclass, fields

import numpy as np

from .errors import ShapeError, UndefinedReferenceError
from .signals import GapMask, Signal


@dataclass(frozen=True)
class EvalRecord:
    signal_id: str
    method: str
    estimator: str
    order: int
    gap_length_ms: float
    gap_index: int
    sdr_db: float
    elapsed_s: float = 0.0

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def key(self) -> tuple:
        return astuple(self)[:6]


def sdr(reference, estimate) -> float:
    """``10 log10(||y||^2 / ||y - x||^2)`` in dB; ``inf`` for an exact match."""
    y = np.asarray(reference, dtype=np.float64)
    x = np.asarray(estimate, dtype=np.float64)
    if y.shape != x.shape:
        raise ShapeError(f"length mismatch: {y.shape} vs {x.shape}")
    energy = float(np.dot(y, y))
    if energy == 0.0:
        raise UndefinedReferenceError("reference has zero energy")
    d = y - x
    dist = float(np.dot(d, d))
    if dist == 0.0:
        return math.inf
    return 10.0 * math.log10(energy / dist)


def sdr_inpainted(reference: Signal, estimate: Signal, mask: GapMask,
                  scope: str = "per_gap"):
    """SDR restricted to the gap samples.

    ``scope="per_gap"`` returns one value per gap, ``"all_gaps"`` a single
    value over the concatenated gap samples.
    """
    if len(reference) != len(estimate) or len(reference) != mask.signal_length:
        raise ShapeError("reference, estimate and mask must have equal length")
    if reference.sample_rate != estimate.sample_rate:
        raise ShapeError("sample rates differ")
    y, x = reference.samples, estimate.samples
    if scope == "per_gap":
        out = []
        for i, g in enumerate(mask.gaps):
            try:
                out.append(sdr(y[g.start:g.stop], x[g.start:g.stop]))
            except UndefinedReferenceError:
                raise UndefinedReferenceError(f"reference is silent in gap {i} (start {g.start})")
        return out
    if scope == "all_gaps":
        if not mask.gaps:
            raise UndefinedReferenceError("mask has no gaps")
        idx = np.concatenate([np.arange(g.start, g.stop) for g in mask.gaps])
        return sdr(y[idx], x[idx])
    raise ValueError(f"unknown scope {scope!r}")


@dataclass(frozen=True)
class GroupStats:
    key: tuple
    mean_sdr_db: float
    median_sdr_db: float
    count: int
    perfect_count: int


def aggregate(records, group_by=("method", "estimator", "order", "gap_length_ms")) -> list[GroupStats]:
    """Mean and median gap SDR per group, sorted by group key.

    ``inf`` (perfect) values are left out of the statistics and counted in
    ``perfect_count``; NaN values (failed cells) are ignored altogether.
    """
    groups: dict[tuple, list[float]] = {}
    for r in records:
        groups.setdefault(tuple(getattr(r, f) for f in group_by), []).append(r.sdr_db)
    out = []
    for key in sorted(groups):
        vals = groups[key]
        finite = [v for v in vals if math.isfinite(v)]
        perfect = sum(1 for v in vals if v == math.inf)
        mean = statistics.fmean(finite) if finite else math.nan
        median = statistics.median(finite) if finite else math.nan
        out.append(GroupStats(key, mean, median, len(finite), perfect))
    return out
