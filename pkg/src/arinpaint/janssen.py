"""Janssen alternating minimisation over AR coefficients and missing samples.

With the coefficients fixed, the residual energy ``||a * x||^2`` is a
quadratic form ``x^T G x`` where ``G`` is the symmetric Toeplitz matrix
built from the autocorrelation of ``a`` (bandwidth ``p``). Minimising over
the missing coordinates only gives the normal equations

    G[miss, miss] x_miss = -G[miss, rel] x_rel

which are solved in :func:`solve_missing`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, solve, solve_toeplitz, solveh_banded
from scipy.signal import convolve

from .errors import InsufficientDataError, SolverError
from .estimation import ARModel, Estimator, estimate
from .prediction import objective
from .signals import Segment

# above this half-bandwidth the O(L^2) Levinson solve beats banded Cholesky
BANDED_MAX_BANDWIDTH = 512


@dataclass(frozen=True)
class JanssenConfig:
    order: int
    estimator: Estimator = Estimator.BURG
    max_iterations: int = 50
    rel_tolerance: float = 1e-6
    # "segment": refit on the whole segment incl. the current gap estimate;
    # "contexts": refit on the reliable runs only
    fit: str = "segment"

    def __post_init__(self):
        object.__setattr__(self, "estimator", Estimator(self.estimator))
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.rel_tolerance < 0:
            raise ValueError("rel_tolerance must be non-negative")
        if self.fit not in ("segment", "contexts"):
            raise ValueError(f"unknown fit mode {self.fit!r}")


@dataclass
class JanssenResult:
    segment: Segment
    iterations: int
    objective: float
    history: list[float] = field(default_factory=list)


def gram_band(a) -> np.ndarray:
    """``b_j = sum_i a_i a_{i+j}`` for ``j = 0..p``: one band of ``A^T A``."""
    c = a.coeffs if isinstance(a, ARModel) else np.asarray(a, dtype=np.float64)
    p = c.size - 1
    return np.correlate(c, c, mode="full")[p:]


def _gram_apply(band, y):
    p = band.size - 1
    kernel = np.concatenate([band[:0:-1], band])
    return convolve(y, kernel)[p:p + y.size]


def _dense_gram(band, idx):
    d = np.abs(idx[:, None] - idx[None, :])
    padded = np.zeros(int(d.max()) + 1 if d.size else 1)
    m = min(padded.size, band.size)
    padded[:m] = band[:m]
    return padded[d]


def solve_missing(a, segment: Segment, solver: str = "auto") -> np.ndarray:
    """Least-squares fill of the missing samples for fixed coefficients.

    ``solver`` is one of ``"auto"``, ``"banded"`` (banded Cholesky),
    ``"toeplitz"`` (Levinson solve) or ``"dense"``. The first three require
    a contiguous run of missing samples; ``"auto"`` falls back to the dense
    solve otherwise. Returns a new array; reliable samples are copied as is.
    """
    x = segment.samples.copy()
    miss = segment.missing
    if miss.size == 0:
        return x
    band = gram_band(a)
    y = x.copy()
    y[miss] = 0.0
    rhs = -_gram_apply(band, y)[miss]
    n = miss.size
    if solver == "auto":
        if not segment.is_contiguous:
            solver = "dense"
        else:
            solver = "banded" if min(band.size - 1, n - 1) <= BANDED_MAX_BANDWIDTH else "toeplitz"
    elif solver in ("banded", "toeplitz") and not segment.is_contiguous:
        raise SolverError(f"solver {solver!r} needs a contiguous run of missing samples")
    try:
        if solver == "banded":
            kd = min(band.size - 1, n - 1)
            ab = np.zeros((kd + 1, n))
            for j in range(kd + 1):
                ab[kd - j, j:] = band[j]
            sol = solveh_banded(ab, rhs)
        elif solver == "toeplitz":
            col = np.zeros(n)
            m = min(n, band.size)
            col[:m] = band[:m]
            sol = solve_toeplitz(col, rhs)
        elif solver == "dense":
            sol = solve(_dense_gram(band, miss), rhs, assume_a="pos")
        else:
            raise ValueError(f"unknown solver {solver!r}")
    except LinAlgError as exc:
        raise SolverError(f"normal equations not positive definite: {exc}") from exc
    if not np.all(np.isfinite(sol)):
        raise SolverError("non-finite solution of the normal equations")
    x[miss] = sol
    return x


def _reliable_runs(x, missing_mask):
    edges = np.flatnonzero(np.diff(np.r_[0, (~missing_mask).astype(np.int8), 0]))
    return [x[s:e] for s, e in zip(edges[::2], edges[1::2])]


def janssen_iterate(segment: Segment, cfg: JanssenConfig, solver: str = "auto") -> JanssenResult:
    """Alternate AR estimation and missing-sample solve until the gap settles.

    Missing samples start at zero. Iteration stops after
    ``cfg.max_iterations`` passes or once the relative update of the
    missing samples drops below ``cfg.rel_tolerance``. ``history`` holds the
    residual energy after each solve.
    """
    p = cfg.order
    if len(segment) < p + 1:
        raise InsufficientDataError(
            f"segment of {len(segment)} samples too short for order {p}")
    miss = segment.missing
    if miss.size == 0:
        return JanssenResult(Segment(segment.samples, segment.offset, miss), 0, float("nan"))
    if miss.size == len(segment):
        raise InsufficientDataError("segment has no reliable samples")
    missing_mask = segment.missing_mask
    x = segment.samples.copy()
    x[miss] = 0.0
    work = Segment(x, segment.offset, miss)
    if cfg.fit == "contexts":
        runs = _reliable_runs(x, missing_mask)
        if max(r.size for r in runs) < p + 1:
            raise InsufficientDataError(f"no reliable run of {p + 1} samples for order {p}")
    history = []
    it = 0
    for it in range(1, cfg.max_iterations + 1):
        fit_on = _reliable_runs(work.samples, missing_mask) if cfg.fit == "contexts" else work.samples
        model = estimate(fit_on, p, cfg.estimator)
        old = work.samples[miss].copy()
        work.samples = solve_missing(model, work, solver)
        history.append(objective(model, work.samples))
        new = work.samples[miss]
        change = np.linalg.norm(new - old) / max(np.linalg.norm(new), 1e-12)
        if change < cfg.rel_tolerance:
            break
    return JanssenResult(work, it, history[-1], history)
