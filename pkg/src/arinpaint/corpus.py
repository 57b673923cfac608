"""Synthetic test signals for desk-scale experiments."""
from __future__ import annotations

import numpy as np

from .signals import Signal


def multisine(n: int, sample_rate: int = 44100, partials: int = 5, noise_db: float = -40.0,
              seed: int = 0, fmin: float = 100.0, fmax: float = 4000.0) -> Signal:
    """Sum of ``partials`` random sinusoids plus white noise ``noise_db`` below the tonal power.

    Frequencies are log-uniform in ``[fmin, fmax]``, amplitudes uniform in
    ``[0.2, 1]`` and phases uniform; the result is scaled to a peak of 0.9.
    """
    rng = np.random.default_rng(seed)
    t = np.arange(n) / sample_rate
    freqs = np.exp(rng.uniform(np.log(fmin), np.log(fmax), partials))
    amps = rng.uniform(0.2, 1.0, partials)
    phases = rng.uniform(0.0, 2.0 * np.pi, partials)
    x = (amps[:, None] * np.sin(2.0 * np.pi * freqs[:, None] * t + phases[:, None])).sum(axis=0)
    power = np.mean(x ** 2)
    x = x + rng.normal(0.0, np.sqrt(power * 10.0 ** (noise_db / 10.0)), n)
    return Signal(0.9 * x / np.max(np.abs(x)), sample_rate)


def multisine_corpus(count: int = 10, n: int = 88200, sample_rate: int = 44100,
                     seed: int = 0, **kwargs) -> dict[str, Signal]:
    return {f"multisine{i:02d}": multisine(n, sample_rate, seed=seed + i, **kwargs)
            for i in range(count)}
