import numpy as np
import pytest

from arinpaint.errors import ConfigError, InsufficientDataError
from arinpaint.evaluation import sdr_inpainted
from arinpaint.methods import (InpaintConfig, Method, Window, crossfade_weights, inpaint,
                               inpaint_extrapolation, window)
from arinpaint.prediction import extrapolate_backward, extrapolate_forward
from arinpaint.estimation import estimate_lpc
from arinpaint.signals import Gap, GapMask, Signal

FS = 44100
VARIANTS = [
    dict(method="extrapolation"),
    dict(method="gapwise"),
    dict(method="framewise", window="hann"),
    dict(method="framewise", window="rect"),
]


def test_crossfade_examples():
    assert crossfade_weights(3).tolist() == [1.0, 0.5, 0.0]
    assert crossfade_weights(1).tolist() == [0.5]
    for L in (5, 7, 441, 3529):
        w = crossfade_weights(L)
        assert w[L // 2] == 0.5
        assert w[0] == 1.0 and w[-1] == 0.0
        assert np.all(np.diff(w) < 0)
        assert np.all(w + (1 - w) == 1)


def test_windows():
    h = window("hann", 8)
    np.testing.assert_allclose(h, 0.5 * (1 - np.cos(2 * np.pi * np.arange(8) / 8)))
    assert window(Window.RECTANGULAR, 4).tolist() == [1, 1, 1, 1]
    # periodic Hann at 50 % overlap sums to one
    L = 64
    acc = np.zeros(L * 4)
    for s in range(0, acc.size - L + 1, L // 2):
        acc[s:s + L] += window("hann", L)
    np.testing.assert_allclose(acc[L:-L], 1.0)


def test_config_validation():
    with pytest.raises(ConfigError):
        InpaintConfig(method="extrapolation", order=4096, context_length=4096)
    with pytest.raises(ConfigError):
        InpaintConfig(method="framewise", order=100, frame_length=64)
    with pytest.raises(ConfigError):
        InpaintConfig(method="framewise", order=8, frame_length=64, hop=65)
    assert InpaintConfig(method="framewise", order=8, frame_length=64).hop_length == 32


def test_extrapolation_exponential_forward_branch():
    # LPC on a long decaying exponential recovers r to machine precision, so
    # the forward branch continues it exactly (closed form r**n)
    r = 0.9
    x = r ** np.arange(3000.0)
    left = x[:1000]
    model = estimate_lpc(left, 1)
    assert model.coeffs[1] == pytest.approx(-r, abs=1e-15)
    np.testing.assert_allclose(extrapolate_forward(model, left, 200), r ** np.arange(1000.0, 1200.0),
                               rtol=1e-9, atol=1e-300)


@pytest.mark.parametrize("r", [1.0, -1.0])
def test_extrapolation_exact_in_both_directions(r):
    # r = +-1 is AR(1) forwards and backwards; Burg recovers it exactly
    x = 0.5 * r ** np.arange(4000.0)
    mask = GapMask([Gap(2000, 500)], 4000)
    cfg = InpaintConfig(method="extrapolation", estimator="burg", order=1, context_length=1000)
    out = inpaint(Signal(x * mask.reliable(), FS), mask, cfg)
    assert np.max(np.abs(out.samples - x)) <= 1e-6


def test_extrapolation_exact_ar1_recovery():
    # an AR(1) model that both contexts reproduce exactly
    r = 0.99
    x = r ** np.arange(2000)
    mask = GapMask([Gap(900, 100)], 2000)
    cfg = InpaintConfig(method="extrapolation", estimator="lpc", order=1, context_length=800)
    out = inpaint(Signal(x, FS), mask, cfg)
    left, right = x[100:900], x[1000:1800]
    fwd = extrapolate_forward(estimate_lpc(left, 1), left, 100)
    bwd = extrapolate_backward(estimate_lpc(right, 1), right, 100)
    w = crossfade_weights(100)
    np.testing.assert_allclose(out.samples[900:1000], w * fwd + (1 - w) * bwd, atol=1e-12)


def test_extrapolation_gap_of_one(rng):
    x = rng.normal(size=200)
    mask = GapMask([Gap(100, 1)], 200)
    cfg = InpaintConfig(method="extrapolation", estimator="lpc", order=4, context_length=50)
    out = inpaint(Signal(x, FS), mask, cfg)
    left, right = x[50:100], x[101:151]
    f = extrapolate_forward(estimate_lpc(left, 4), left, 1)[0]
    b = extrapolate_backward(estimate_lpc(right, 4), right, 1)[0]
    assert out.samples[100] == pytest.approx(0.5 * (f + b), abs=1e-15)


def test_extrapolation_insufficient_context(rng):
    x = rng.normal(size=400)
    mask = GapMask([Gap(5, 10)], 400)
    with pytest.raises(InsufficientDataError, match="gap 0"):
        inpaint(Signal(x, FS), mask, InpaintConfig(method="extrapolation", order=16, context_length=100))


def test_gapwise_sinusoid():
    n = 4096 + 3528 + 4096 + 2000
    y = np.sin(2 * np.pi * 440 * np.arange(n) / FS)
    mask = GapMask([Gap(5000, 3528)], n)
    out = inpaint(Signal(y * mask.reliable(), FS), mask,
                  InpaintConfig(method="gapwise", estimator="burg", order=32))
    assert sdr_inpainted(Signal(y, FS), out, mask)[0] >= 40


@pytest.mark.parametrize("kw", VARIANTS)
def test_gapless_identity(kw, rng):
    x = rng.normal(size=5000) * 0.1
    sig = Signal(x, FS)
    mask = GapMask.empty(5000)
    out = inpaint(sig, mask, InpaintConfig(order=16, context_length=256, frame_length=256, **kw))
    np.testing.assert_array_equal(out.samples, x)


@pytest.mark.parametrize("shape", ["hann", "rect"])
def test_framewise_ola_identity_without_projection(shape, rng):
    # a gap far outside the inspected region forces the frame-wise path
    x = rng.normal(size=6000)
    mask = GapMask([Gap(5800, 10)], 6000)
    cfg = InpaintConfig(method="framewise", window=shape, order=8, frame_length=256)
    out = inpaint(Signal(x, FS), mask, cfg)
    np.testing.assert_allclose(out.samples[:5500], x[:5500], atol=1e-10)


@pytest.mark.parametrize("kw", VARIANTS)
def test_consistency_and_determinism(kw, rng):
    n = 12000
    x = np.sin(0.05 * np.arange(n)) + 0.01 * rng.normal(size=n)
    mask = GapMask([Gap(3000, 300), Gap(7000, 500)], n)
    sig = Signal(x, FS)
    cfg = InpaintConfig(order=24, context_length=1024, frame_length=1024, max_iterations=10, **kw)
    a = inpaint(sig, mask, cfg)
    b = inpaint(sig, mask, cfg)
    np.testing.assert_array_equal(a.samples, b.samples)
    rel = mask.reliable()
    np.testing.assert_array_equal(a.samples[rel], x[rel])
    assert min(sdr_inpainted(sig, a, mask)) > 10


def test_gapwise_locality(rng):
    n = 20000
    x = np.sin(0.03 * np.arange(n)) + 0.05 * rng.normal(size=n)
    mask = GapMask([Gap(10000, 200)], n)
    cfg = InpaintConfig(method="gapwise", order=16, context_length=1000, max_iterations=5)
    a = inpaint(Signal(x, FS), mask, cfg)
    y = x.copy()
    y[:8999] += rng.normal(size=8999)
    y[11201:] -= 3.0
    b = inpaint(Signal(y, FS), mask, cfg)
    np.testing.assert_array_equal(a.samples[10000:10200], b.samples[10000:10200])


def test_contexts_truncated_at_neighbours(rng):
    n = 3000
    x = np.sin(0.1 * np.arange(n))
    mask = GapMask([Gap(1000, 50), Gap(1100, 50)], n)
    for method in ("extrapolation", "gapwise"):
        out = inpaint(Signal(x * mask.reliable(), FS), mask,
                      InpaintConfig(method=method, order=8, context_length=500))
        assert min(sdr_inpainted(Signal(x, FS), out, mask)) > 30


def test_gapwise_contexts_fit_option(rng):
    n = 6000
    x = np.sin(0.07 * np.arange(n)) + 0.01 * rng.normal(size=n)
    mask = GapMask([Gap(3000, 400)], n)
    out = inpaint(Signal(x, FS), mask, InpaintConfig(method="gapwise", order=16, context_length=1500,
                                                     gapwise_fit="contexts"))
    assert sdr_inpainted(Signal(x, FS), out, mask)[0] > 20
