"""Depolarizing channel model: priors, sampling, baseline error rate."""

import numpy as np
import pytest

from qturbo.channel import (
    channel_prior,
    sample_error,
    sample_symbols,
    uncoded_qber,
)


def test_prior_values():
    assert channel_prior(0.0).tolist() == [1.0, 0.0, 0.0, 0.0]
    p = channel_prior(0.3)
    assert abs(p[0] - 0.7) < 1e-15
    assert np.abs(p[1:] - 0.1).max() < 1e-15
    assert abs(channel_prior(0.75).sum() - 1.0) < 1e-15


def test_prior_validation():
    for bad in (-0.01, 1.01, float("nan")):
        with pytest.raises(ValueError):
            channel_prior(bad)


def test_sampling_deterministic_per_stream():
    a = sample_symbols(0.2, 100, np.random.default_rng(42))
    b = sample_symbols(0.2, 100, np.random.default_rng(42))
    assert np.array_equal(a, b)
    c = sample_symbols(0.2, 100, np.random.default_rng(43))
    assert not np.array_equal(a, c)


def test_sampling_distribution():
    n = 200_000
    sym = sample_symbols(0.3, n, np.random.default_rng(7))
    freq = np.bincount(sym, minlength=4) / n
    assert abs(freq[0] - 0.7) < 0.01
    assert np.abs(freq[1:] - 0.1).max() < 0.01


def test_sampling_edge_probabilities():
    assert not sample_symbols(0.0, 50, np.random.default_rng(0)).any()
    with pytest.raises(ValueError):
        sample_symbols(1.0, 500, np.random.default_rng(0))


def test_sample_error_operator():
    rng = np.random.default_rng(3)
    op = sample_error(0.25, 12, rng)
    assert op.n == 12
    rng2 = np.random.default_rng(3)
    assert np.array_equal(op.symbol_indices(), sample_symbols(0.25, 12, rng2))


def test_uncoded_qber_is_flip_probability():
    assert uncoded_qber(0.0) == 0.0
    assert uncoded_qber(0.37) == 0.37
