"""Gap inpainting strategies built on AR models.

* extrapolation: forward/backward prediction from each context, blended
  with a raised-cosine crossfade;
* gap-wise Janssen: one segment (left context + gap + right context) per gap;
* frame-wise Janssen: windowed overlapping frames joined by overlap-add.
"""
from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, InsufficientDataError
from .estimation import Estimator, estimate
from .janssen import JanssenConfig, janssen_iterate
from .prediction import extrapolate_backward, extrapolate_forward
from .signals import GapMask, Segment, Signal, project_consistent

log = logging.getLogger(__name__)

Reporter = Callable[[str, float], None]


class Method(str, enum.Enum):
    EXTRAPOLATION = "extrapolation"
    GAPWISE = "gapwise"
    FRAMEWISE = "framewise"


class Window(str, enum.Enum):
    RECTANGULAR = "rect"
    HANN = "hann"


def window(shape: Window | str, length: int) -> np.ndarray:
    """Periodic Hann or rectangular window of ``length`` samples."""
    if Window(shape) is Window.HANN:
        n = np.arange(length)
        return 0.5 * (1.0 - np.cos(2.0 * np.pi * n / length))
    return np.ones(length)


def crossfade_weights(length: int) -> np.ndarray:
    """Raised-cosine fade-out from 1 to 0 over ``length`` samples."""
    if length < 1:
        raise ValueError("crossfade length must be positive")
    if length == 1:
        return np.array([0.5])
    w = 0.5 * (1.0 + np.cos(np.pi * np.arange(length) / (length - 1)))
    w[0], w[-1] = 1.0, 0.0
    if length % 2:
        w[length // 2] = 0.5
    return w


@dataclass(frozen=True)
class InpaintConfig:
    method: Method = Method.GAPWISE
    estimator: Estimator = Estimator.BURG
    order: int = 2048
    context_length: int = 4096
    frame_length: int = 4096
    window: Window = Window.HANN
    hop: Optional[int] = None
    max_iterations: int = 50
    rel_tolerance: float = 1e-6
    gapwise_fit: str = "segment"

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "estimator", Estimator(self.estimator))
        object.__setattr__(self, "window", Window(self.window))
        if self.order < 1:
            raise ConfigError("order must be positive")
        if self.method is Method.FRAMEWISE:
            if self.frame_length < self.order + 1:
                raise ConfigError("frame_length must exceed the model order")
            if not 1 <= self.hop_length <= self.frame_length:
                raise ConfigError("hop must lie in [1, frame_length]")
        elif self.context_length < self.order + 1:
            raise ConfigError("context_length must exceed the model order")

    @property
    def hop_length(self) -> int:
        return self.hop if self.hop is not None else self.frame_length // 2

    @property
    def janssen(self) -> JanssenConfig:
        fit = self.gapwise_fit if self.method is Method.GAPWISE else "segment"
        return JanssenConfig(self.order, self.estimator, self.max_iterations,
                             self.rel_tolerance, fit)


def _contexts(mask: GapMask, i: int, context_length: int) -> tuple[int, int]:
    """Start of the left context and end of the right context for gap ``i``."""
    gaps = mask.gaps
    g = gaps[i]
    lo = gaps[i - 1].stop if i > 0 else 0
    hi = gaps[i + 1].start if i + 1 < len(gaps) else mask.signal_length
    return max(lo, g.start - context_length), min(hi, g.stop + context_length)


def _timed(report: Optional[Reporter], label: str, t0: float):
    dt = time.perf_counter() - t0
    log.debug("%s: %.3f s", label, dt)
    if report is not None:
        report(label, dt)


def inpaint_extrapolation(signal: Signal, mask: GapMask, cfg: InpaintConfig,
                          report: Optional[Reporter] = None) -> Signal:
    p = cfg.order
    x = signal.samples.copy()
    for i, g in enumerate(mask.gaps):
        t0 = time.perf_counter()
        lo, hi = _contexts(mask, i, cfg.context_length)
        left, right = x[lo:g.start], x[g.stop:hi]
        if left.size < p + 1 or right.size < p + 1:
            raise InsufficientDataError(
                f"gap {i} at {g.start}: contexts of {left.size}/{right.size} samples, "
                f"need {p + 1} on each side")
        fwd = extrapolate_forward(estimate(left, p, cfg.estimator), left, g.length)
        bwd = extrapolate_backward(estimate(right, p, cfg.estimator), right, g.length)
        w = crossfade_weights(g.length)
        x[g.start:g.stop] = w * fwd + (1.0 - w) * bwd
        _timed(report, f"gap {i}", t0)
    return project_consistent(signal, mask, signal.with_samples(x))


def inpaint_janssen_gapwise(signal: Signal, mask: GapMask, cfg: InpaintConfig,
                            report: Optional[Reporter] = None) -> Signal:
    p = cfg.order
    x = signal.samples.copy()
    jcfg = cfg.janssen
    for i, g in enumerate(mask.gaps):
        t0 = time.perf_counter()
        lo, hi = _contexts(mask, i, cfg.context_length)
        if hi - lo - g.length < p + 1:
            raise InsufficientDataError(
                f"gap {i} at {g.start}: {hi - lo - g.length} context samples, need {p + 1}")
        seg = Segment(signal.samples[lo:hi], lo, np.arange(g.start - lo, g.stop - lo))
        res = janssen_iterate(seg, jcfg)
        x[g.start:g.stop] = res.segment.samples[g.start - lo:g.stop - lo]
        log.debug("gap %d: %d iterations", i, res.iterations)
        _timed(report, f"gap {i}", t0)
    return project_consistent(signal, mask, signal.with_samples(x))


def inpaint_janssen_framewise(signal: Signal, mask: GapMask, cfg: InpaintConfig,
                              report: Optional[Reporter] = None) -> Signal:
    n = len(signal)
    L, hop = cfg.frame_length, cfg.hop_length
    w = window(cfg.window, L)
    pad_front = L - hop
    n_frames = max(-(-(pad_front + n - hop) // hop) + 1, 1)
    total = (n_frames - 1) * hop + L
    xp = np.zeros(total)
    xp[pad_front:pad_front + n] = signal.samples
    mp = np.zeros(total, dtype=bool)
    mp[pad_front:pad_front + n] = mask.missing()
    acc = np.zeros(total)
    wsum = np.zeros(total)
    jcfg = cfg.janssen
    for k in range(n_frames):
        s = k * hop
        frame = xp[s:s + L] * w
        local = np.flatnonzero(mp[s:s + L])
        if local.size:
            t0 = time.perf_counter()
            frame = janssen_iterate(Segment(frame, s - pad_front, local), jcfg).segment.samples
            _timed(report, f"frame {k}", t0)
        acc[s:s + L] += frame
        wsum[s:s + L] += w
    core = wsum[pad_front:pad_front + n]
    if np.any(core <= 0.0):
        raise ConfigError("window and hop leave samples without coverage")
    out = acc[pad_front:pad_front + n] / core
    return project_consistent(signal, mask, signal.with_samples(out))


def inpaint(signal: Signal, mask: GapMask, cfg: InpaintConfig,
            report: Optional[Reporter] = None) -> Signal:
    if mask.signal_length != len(signal):
        raise ConfigError("mask does not match the signal length")
    if not mask.gaps:
        return signal.with_samples(signal.samples.copy())
    fn = {
        Method.EXTRAPOLATION: inpaint_extrapolation,
        Method.GAPWISE: inpaint_janssen_gapwise,
        Method.FRAMEWISE: inpaint_janssen_framewise,
    }[cfg.method]
    return fn(signal, mask, cfg, report)
