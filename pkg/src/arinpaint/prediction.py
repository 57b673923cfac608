"""Residual evaluation and zero-input AR extrapolation."""
from __future__ import annotations

import numpy as np
from scipy.signal import lfilter, lfiltic

from .errors import InsufficientDataError
from .estimation import ARModel


def _coeffs(a) -> np.ndarray:
    return a.coeffs if isinstance(a, ARModel) else np.asarray(a, dtype=np.float64)


def residual(a, x) -> np.ndarray:
    """Full convolution of the coefficients with ``x`` (length ``N + p``).

    Samples outside ``x`` are taken as zero, so the residual energy is the
    least-squares objective used both by the autocorrelation estimator and
    by the Janssen missing-sample solve.
    """
    return np.convolve(_coeffs(a), np.asarray(x, dtype=np.float64))


def objective(a, x) -> float:
    e = residual(a, x)
    return float(np.dot(e, e))


def extrapolate_forward(a, context, horizon: int) -> np.ndarray:
    """Continue ``context`` by ``horizon`` samples with zero excitation."""
    c = _coeffs(a)
    p = c.size - 1
    context = np.asarray(context, dtype=np.float64)
    if context.size < p:
        raise InsufficientDataError(f"context of {context.size} samples is shorter than order {p}")
    if horizon <= 0:
        return np.zeros(0)
    if p == 0:
        return np.zeros(horizon)
    zi = lfiltic([1.0], c, context[::-1][:p])
    out, _ = lfilter([1.0], c, np.zeros(horizon), zi=zi)
    return out


def extrapolate_backward(a, context, horizon: int) -> np.ndarray:
    """Predict the ``horizon`` samples that precede ``context``."""
    context = np.asarray(context, dtype=np.float64)
    return extrapolate_forward(a, context[::-1], horizon)[::-1].copy()
