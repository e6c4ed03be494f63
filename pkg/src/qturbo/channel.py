"""Symmetric depolarizing channel: priors and error sampling.

Each qubit independently stays clean with probability 1 - p or suffers
X, Y, or Z with probability p/3 each.  Sampling spends exactly one
uniform draw per qubit and maps it through fixed interval boundaries
[0, 1-p) -> I, then equal thirds -> X, Y, Z, so two samplers with the
same stream state produce the same operator on any platform.
"""
from __future__ import annotations

import numpy as np

from .pauli import PauliOperator


def _validate_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p < 1.0:
        raise ValueError(f"depolarizing probability must be in [0, 1), got {p}")
    return p


def channel_prior(p: float) -> np.ndarray:
    """Per-qubit symbol distribution (p_I, p_X, p_Y, p_Z)."""
    p = _validate_p(p)
    return np.array([1.0 - p, p / 3.0, p / 3.0, p / 3.0])


def sample_symbols(p: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n i.i.d. error symbols (indices into IXYZ) from the channel."""
    p = _validate_p(p)
    if n < 1:
        raise ValueError("need at least one qubit")
    # cumulative boundaries of the I / X / Y intervals; side='right'
    # sends u < 1-p to symbol 0 and the remaining thirds to 1, 2, 3
    bounds = np.array([1.0 - p, 1.0 - 2.0 * p / 3.0, 1.0 - p / 3.0])
    u = rng.random(n)
    return np.searchsorted(bounds, u, side="right").astype(np.uint8)


def sample_error(p: float, n: int, rng: np.random.Generator) -> PauliOperator:
    """Draw an n-qubit error operator from the channel."""
    return PauliOperator.from_indices(sample_symbols(p, n, rng))


def uncoded_qber(p: float) -> float:
    """Error ratio with no coding: any non-identity symbol is an error."""
    return _validate_p(p)
