"""Shared fixtures: compiled schemes are session-scoped because code
construction (symplectic compilation + pattern tables) dominates the
cost of small tests."""

from fractions import Fraction

import numpy as np
import pytest

from qturbo.pipeline import SchemeConfig, compile_scheme
from qturbo.qurc import build_qurc


@pytest.fixture(scope="session")
def qurc_spec():
    return build_qurc()


@pytest.fixture(scope="session")
def tiny_scheme():
    """One rate-1/2 outer block feeding four machine steps."""
    return compile_scheme(SchemeConfig(rate=Fraction(1, 2), k=2))


@pytest.fixture()
def rng():
    return np.random.default_rng(20260814)


def random_priors(rng: np.random.Generator, n: int) -> np.ndarray:
    """Strictly positive normalized rows (no degenerate zeros)."""
    rows = rng.random((n, 4)) + 0.05
    return rows / rows.sum(axis=1, keepdims=True)
