"""AR coefficient estimation: autocorrelation + Levinson-Durbin, and Burg.

Coefficients follow the prediction-error filter convention
``a = [1, a_2, ..., a_{p+1}]`` so that ``np.convolve(a, x)`` is the residual.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.signal import correlate

from .errors import InsufficientDataError, NumericError

# Burg stops once the lattice error energy falls below this fraction of the
# first-stage energy; further reflection coefficients would only fit rounding
# residue and place spurious poles next to the unit circle.
BURG_ENERGY_FLOOR = 1e-12


class Estimator(str, enum.Enum):
    LPC = "lpc"
    BURG = "burg"


@dataclass(frozen=True)
class ARModel:
    coeffs: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.coeffs, dtype=np.float64)
        if a.ndim != 1 or a.size < 1 or a[0] != 1.0:
            raise NumericError("AR coefficients must be a vector starting with 1")
        if not np.all(np.isfinite(a)):
            raise NumericError("non-finite AR coefficient")
        object.__setattr__(self, "coeffs", a)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def trivial(cls, p: int) -> "ARModel":
        a = np.zeros(p + 1)
        a[0] = 1.0
        return cls(a)

    def roots(self) -> np.ndarray:
        """Roots of A(z) in the z-plane, i.e. poles of the synthesis filter."""
        return np.roots(self.coeffs) if self.order else np.zeros(0)


def _as_parts(x) -> list[np.ndarray]:
    if isinstance(x, (list, tuple)) and x and np.ndim(x[0]) == 1:
        return [np.asarray(v, dtype=np.float64) for v in x]
    return [np.asarray(x, dtype=np.float64)]


def _check_length(parts, p):
    if p < 0:
        raise ValueError("order must be non-negative")
    if max(v.size for v in parts) < p + 1:
        raise InsufficientDataError(f"need at least {p + 1} samples for order {p}")
    for v in parts:
        if not np.all(np.isfinite(v)):
            raise NumericError("non-finite input samples")


def autocorrelation(x, p: int) -> np.ndarray:
    """Biased, unnormalized autocorrelation ``r_k = sum_n x_n x_{n+k}``, ``k = 0..p``.

    ``x`` may also be a list of separate vectors, in which case their
    autocorrelations are summed (each one zero-padded on its own).
    """
    parts = _as_parts(x)
    _check_length(parts, p)
    r = np.zeros(p + 1)
    for v in parts:
        n = v.size
        if n * (p + 1) > 2_000_000:
            full = correlate(v, v, mode="full", method="fft")[n - 1:]
        else:
            full = np.correlate(v, v, mode="full")[n - 1:]
        m = min(p + 1, n)
        r[:m] += full[:m]
    return r


def levinson_durbin(r) -> tuple[ARModel, float]:
    """Solve the Yule-Walker equations for the autocorrelation sequence ``r``.

    Returns the model and the final prediction error power. A zero-energy
    ``r`` yields the trivial model; the recursion also stops early (remaining
    reflection coefficients zero) once the error power reaches zero.
    """
    r = np.asarray(r, dtype=np.float64)
    if not np.all(np.isfinite(r)):
        raise NumericError("non-finite autocorrelation")
    if r[0] < 0:
        raise NumericError("r[0] must be non-negative")
    p = r.size - 1
    a = np.zeros(p + 1)
    a[0] = 1.0
    err = float(r[0])
    if err == 0.0:
        return ARModel(a), 0.0
    for m in range(1, p + 1):
        acc = r[m] + np.dot(a[1:m], r[m - 1:0:-1])
        k = -acc / err
        a[1:m + 1] = a[1:m + 1] + k * a[m - 1::-1]
        err *= 1.0 - k * k
        if err <= 0.0:
            err = 0.0
            break
    return ARModel(a), err


def estimate_lpc(x, p: int) -> ARModel:
    return levinson_durbin(autocorrelation(x, p))[0]


def estimate_burg(x, p: int) -> ARModel:
    """Burg lattice estimate of order ``p``.

    Minimises the summed forward and backward prediction error energy one
    stage at a time; all reflection coefficients satisfy ``|k| <= 1`` so
    A(z) is minimum phase. With a list input, the error sums run over all
    parts and a single model is fitted to them jointly.

    The recursion ends early, leaving the remaining coefficients at zero,
    when the error energy vanishes (below ``BURG_ENERGY_FLOOR`` relative to
    the first stage), e.g. for silence or an exactly predictable signal.
    """
    parts = _as_parts(x)
    _check_length(parts, p)
    fwd = [v[1:].copy() for v in parts]
    bwd = [v[:-1].copy() for v in parts]
    a = np.zeros(p + 1)
    a[0] = 1.0
    floor = None
    for m in range(1, p + 1):
        num = 0.0
        den = 0.0
        for f, b in zip(fwd, bwd):
            num += np.dot(f, b)
            den += np.dot(f, f) + np.dot(b, b)
        if floor is None:
            floor = BURG_ENERGY_FLOOR * den
        if den == 0.0 or den < floor:
            break
        k = -2.0 * num / den
        a[1:m + 1] = a[1:m + 1] + k * a[m - 1::-1]
        for i, (f, b) in enumerate(zip(fwd, bwd)):
            fwd[i] = f[1:] + k * b[1:]
            bwd[i] = b[:-1] + k * f[:-1]
    return ARModel(a)


def estimate(x, p: int, estimator: Estimator | str) -> ARModel:
    if Estimator(estimator) is Estimator.BURG:
        return estimate_burg(x, p)
    return estimate_lpc(x, p)
