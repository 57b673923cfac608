import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from arinpaint.errors import InsufficientDataError, SolverError
from arinpaint.estimation import Estimator
from arinpaint.evaluation import sdr
from arinpaint.janssen import JanssenConfig, gram_band, janssen_iterate, solve_missing
from arinpaint.prediction import residual
from arinpaint.signals import Segment

from oracles import conv_matrix, missing_lstsq


def test_gram_band_examples(rng):
    assert gram_band([1, -1]).tolist() == [2, -1]
    assert gram_band([1, 0, 0, 0]).tolist() == [1, 0, 0, 0]
    a = np.r_[1.0, rng.normal(size=8)]
    A = conv_matrix(a, 30)
    G = A.T @ A
    # interior rows of A^T A carry the full band
    np.testing.assert_allclose(gram_band(a), G[10, 10:19], atol=1e-12)
    for j in range(9):
        np.testing.assert_allclose(np.diag(G, j), gram_band(a)[j], atol=1e-12)


def test_solve_missing_examples():
    seg = Segment([1.0, 0.0, 3.0], 0, [1])
    np.testing.assert_allclose(solve_missing([1, -1], seg), [1, 2, 3])
    seg = Segment([5.0, 123.0, 5.0], 0, [1])
    assert solve_missing([1, 0], seg).tolist() == [5, 0, 5]


@pytest.mark.parametrize("solver", ["banded", "toeplitz", "dense", "auto"])
def test_solve_missing_matches_lstsq(rng, solver):
    for _ in range(10):
        n = int(rng.integers(40, 300))
        p = int(rng.integers(1, 16))
        L = int(rng.integers(1, min(64, n - 2)))
        s = int(rng.integers(0, n - L))
        a = np.r_[1.0, 0.3 * rng.normal(size=p)]
        x = rng.normal(size=n)
        miss = np.arange(s, s + L)
        got = solve_missing(a, Segment(x, 0, miss), solver=solver)
        ref = missing_lstsq(a, x, miss)
        np.testing.assert_allclose(got, ref, rtol=1e-6, atol=1e-9)
        keep = np.ones(n, dtype=bool)
        keep[miss] = False
        np.testing.assert_array_equal(got[keep], x[keep])


def test_scattered_missing_uses_dense(rng):
    a = np.r_[1.0, 0.2 * rng.normal(size=6)]
    x = rng.normal(size=120)
    miss = np.array([3, 10, 11, 50, 90, 91, 92])
    np.testing.assert_allclose(solve_missing(a, Segment(x, 0, miss)), missing_lstsq(a, x, miss), rtol=1e-6, atol=1e-9)
    with pytest.raises(SolverError):
        solve_missing(a, Segment(x, 0, miss), solver="banded")


def test_solution_is_stationary(rng):
    for _ in range(5):
        a = np.r_[1.0, 0.4 * rng.normal(size=5)]
        x = rng.normal(size=60)
        miss = np.arange(20, 32)
        s = solve_missing(a, Segment(x, 0, miss))
        band = gram_band(a)
        h = 1e-6
        base = 0.5 * np.sum(residual(a, s) ** 2)
        for i in miss:
            t = s.copy()
            t[i] += h
            up = 0.5 * np.sum(residual(a, t) ** 2)
            t[i] -= 2 * h
            down = 0.5 * np.sum(residual(a, t) ** 2)
            grad = (up - down) / (2 * h)
            assert abs(grad) <= 1e-6 * max(1.0, np.linalg.norm(band))
        assert base >= 0


def test_janssen_sinusoid_gap():
    fs = 44100
    n = np.arange(4096 + 3528 + 4096)
    y = np.sin(2 * np.pi * 440 * n / fs + 0.3)
    miss = np.arange(4096, 4096 + 3528)
    x = y.copy()
    x[miss] = 0
    res = janssen_iterate(Segment(x, 0, miss), JanssenConfig(32, Estimator.BURG))
    assert res.iterations <= 50
    assert sdr(y[miss], res.segment.samples[miss]) >= 40


def test_janssen_preconditions():
    cfg = JanssenConfig(2)
    with pytest.raises(InsufficientDataError):
        janssen_iterate(Segment(np.zeros(5), 0, np.arange(5)), cfg)
    with pytest.raises(InsufficientDataError):
        janssen_iterate(Segment(np.zeros(2), 0, [0]), cfg)
    x = np.arange(10.0)
    res = janssen_iterate(Segment(x, 0, []), cfg)
    assert res.iterations == 0
    np.testing.assert_array_equal(res.segment.samples, x)


def test_contexts_only_fit_converges_immediately(rng):
    x = rng.normal(size=400)
    miss = np.arange(150, 200)
    cfg = JanssenConfig(8, Estimator.LPC, fit="contexts")
    res = janssen_iterate(Segment(x, 0, miss), cfg)
    # the model ignores the gap estimate, so the second pass changes nothing
    assert res.iterations == 2


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), estimator=st.sampled_from(list(Estimator)))
def test_reliable_samples_untouched(seed, estimator):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=300)
    miss = np.arange(100, 100 + int(rng.integers(1, 80)))
    res = janssen_iterate(Segment(x, 0, miss), JanssenConfig(10, estimator, max_iterations=5))
    keep = np.setdiff1d(np.arange(300), miss)
    np.testing.assert_array_equal(res.segment.samples[keep], x[keep])


def test_lpc_objective_non_increasing(rng):
    for _ in range(5):
        x = np.cumsum(rng.normal(size=600)) * 0.01 + np.sin(0.05 * np.arange(600))
        miss = np.arange(250, 330)
        res = janssen_iterate(Segment(x, 0, miss), JanssenConfig(12, Estimator.LPC, 30, 0.0))
        h = np.array(res.history)
        assert np.all(np.diff(h) <= 1e-10)
