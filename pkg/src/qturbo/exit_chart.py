"""EXIT-chart machinery: a-priori modeling, mutual-information
estimation, component decoder transfer curves, and tunnel checking.

Messages are 4-ary symbol distributions, so mutual information lives in
[0, 2] bits.  The synthetic a-priori channel is the 4-ary symmetric
channel with flip probability q: the observation equals the true symbol
with probability 1-q, otherwise one of the other three uniformly.  Its
information content has the closed form

    I(q) = 2 - H_b(q) - q*log2(3),       q in [0, 3/4],

strictly decreasing from 2 to 0, which makes calibration a bisection.
Measured information uses the sample estimator 2 + mean(log2 m(truth))
over emitted messages m.

Output files normalize both axes to [0, 1] by dividing by 2; internal
math stays in bits.
"""
from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .channel import channel_prior, sample_symbols
from .qsbc import QsbcCode, build_qsbc, decompose_blocks, outer_siso_batch
from .qurc import QurcSpec, build_qurc, inner_siso_decode, propagate_inverse

LOG2_3 = math.log2(3.0)
MAX_BITS = 2.0
_LOG_FLOOR = 1e-12


@dataclass(frozen=True)
class ExitPoint:
    I_A: float
    I_E: float
    samples: int


@dataclass(frozen=True)
class TrajectoryPoint:
    iteration: int
    stage: str          # "inner" or "outer"
    I: float


def binary_entropy(q: float) -> float:
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"entropy argument must be in [0, 1], got {q}")
    if q == 0.0 or q == 1.0:
        return 0.0
    return -q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q)


def apriori_mi(q: float) -> float:
    """Information carried by the synthetic a-priori channel at flip
    probability q."""
    if not 0.0 <= q <= 0.75:
        raise ValueError(f"flip probability must be in [0, 3/4], got {q}")
    return MAX_BITS - binary_entropy(q) - q * LOG2_3


def calibrate_q(I_target: float) -> float:
    """Flip probability whose a-priori information equals I_target."""
    if not 0.0 <= I_target <= MAX_BITS:
        raise ValueError(f"target information must be in [0, 2], got {I_target}")
    lo, hi = 0.0, 0.75  # I(lo) = 2, I(hi) = 0, strictly decreasing
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        value = apriori_mi(mid)
        if abs(value - I_target) < 1e-9:
            return mid
        if value > I_target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def generate_apriori(
    true_symbols: np.ndarray, q: float, rng: np.random.Generator
) -> np.ndarray:
    """Posterior messages of the synthetic a-priori channel.

    One uniform draw per symbol: u >= q keeps the true symbol, u < q
    picks among the other three by thirds.  The emitted message puts
    1-q on the observed symbol and q/3 on the rest.
    """
    if not 0.0 <= q <= 0.75:
        raise ValueError(f"flip probability must be in [0, 3/4], got {q}")
    truth = np.asarray(true_symbols, dtype=np.int64)
    n = truth.size
    u = rng.random(n)
    observed = truth.copy()
    if q > 0.0:
        flip = u < q
        # offset 1..3 from the true symbol, cyclic, uniform over thirds
        third = np.minimum((u / (q / 3.0)).astype(np.int64), 2)
        observed[flip] = (truth[flip] + 1 + third[flip]) % 4
    messages = np.full((n, 4), q / 3.0)
    messages[np.arange(n), observed] = 1.0 - q
    return messages


def _log_scores(messages: np.ndarray, true_symbols: np.ndarray) -> tuple[float, int]:
    """Sum of log2 message mass at the truth, and how many hit the floor."""
    m = messages[np.arange(true_symbols.size), np.asarray(true_symbols, dtype=np.int64)]
    clamped = int((m < _LOG_FLOOR).sum())
    return float(np.log2(np.maximum(m, _LOG_FLOOR)).sum()), clamped


def measure_mi(messages: np.ndarray, true_symbols: np.ndarray) -> float:
    """Sample estimate of the information the messages carry about the
    true symbols, clamped to [0, 2] bits."""
    messages = np.asarray(messages, dtype=np.float64)
    true_symbols = np.asarray(true_symbols)
    if messages.ndim != 2 or messages.shape[1] != 4:
        raise ValueError("messages must have shape (N, 4)")
    if true_symbols.shape != (messages.shape[0],):
        raise ValueError("true_symbols length must match messages")
    total, clamped = _log_scores(messages, true_symbols)
    if clamped:
        warnings.warn(
            f"{clamped} messages had (near-)zero mass at the true symbol; "
            "their logs were clamped",
            RuntimeWarning,
            stacklevel=2,
        )
    return min(max(MAX_BITS + total / true_symbols.size, 0.0), MAX_BITS)


def inner_exit_curve(
    p: float,
    I_A_grid: np.ndarray,
    samples_per_point: int,
    *,
    spec: QurcSpec | None = None,
    master_seed: int = 0,
    stream_tag: int = 1,
    frame_len: int = 1024,
) -> list[ExitPoint]:
    """Extrinsic-vs-a-priori transfer of the inner SISO decoder.

    Per grid point: sample channel errors, derive the true logical
    sequence, hand the decoder the channel priors plus synthetic
    a-priori messages, and measure the extrinsic information against
    the truth.
    """
    if spec is None:
        spec = build_qurc()
    ch_row = channel_prior(p)
    points = []
    for point_idx, I_A in enumerate(I_A_grid):
        q = calibrate_q(float(I_A))
        total = 0.0
        count = 0
        frame = 0
        while count < samples_per_point:
            rng = np.random.default_rng(
                np.random.SeedSequence([master_seed, stream_tag, point_idx, frame])
            )
            e_phys = sample_symbols(p, frame_len, rng) if p > 0 else np.zeros(
                frame_len, dtype=np.uint8
            )
            truth = propagate_inverse(spec, e_phys)
            apriori = generate_apriori(truth, q, rng)
            ch = np.tile(ch_row, (frame_len, 1))
            extrinsic = inner_siso_decode(spec.trellis, ch, apriori)
            score, _ = _log_scores(extrinsic, truth)
            total += score
            count += frame_len
            frame += 1
        I_E = min(max(MAX_BITS + total / count, 0.0), MAX_BITS)
        points.append(ExitPoint(float(I_A), I_E, count))
    return points


def outer_exit_curve(
    rate,
    I_A_grid: np.ndarray,
    samples_per_point: int,
    *,
    master_seed: int = 0,
    stream_tag: int = 2,
) -> list[ExitPoint]:
    """Extrinsic-vs-a-priori transfer of the outer SISO decoder.

    True block errors are drawn per-qubit uniform over the four
    symbols; each block's syndrome comes from its own truth, so the
    decoder sees consistent (a priori, syndrome) pairs.
    """
    code = code_for_rate(rate)
    n = code.n
    points = []
    for point_idx, I_A in enumerate(I_A_grid):
        q = calibrate_q(float(I_A))
        total = 0.0
        count = 0
        batch = max(1, 8192 // n)
        chunk = 0
        while count < samples_per_point:
            rng = np.random.default_rng(
                np.random.SeedSequence([master_seed, stream_tag, point_idx, chunk])
            )
            truth = rng.integers(0, 4, size=(batch, n)).astype(np.uint8)
            _, syndromes = decompose_blocks(code, truth)
            apriori = generate_apriori(truth.reshape(-1), q, rng).reshape(batch, n, 4)
            extrinsic, _ = outer_siso_batch(code, apriori, syndromes)
            score, _ = _log_scores(extrinsic.reshape(-1, 4), truth.reshape(-1))
            total += score
            count += batch * n
            chunk += 1
        I_E = min(max(MAX_BITS + total / count, 0.0), MAX_BITS)
        points.append(ExitPoint(float(I_A), I_E, count))
    return points


def record_trajectory(
    config,
    p: float,
    stream: np.random.Generator | None = None,
    *,
    frames: int = 1,
    master_seed: int = 0,
) -> list[TrajectoryPoint]:
    """Measured information at each decoder interface, iteration by
    iteration, for one simulated frame (or averaged over several).

    The frame is decoded with early stopping disabled so every
    iteration contributes one "inner" and one "outer" measurement:
    after each inner pass the extrinsic messages are scored against the
    true inner-logical symbols, after each outer pass against the true
    outer-domain symbols.  With `frames > 1` the log scores are pooled
    across frames before conversion to bits.  Channel errors are drawn
    sequentially from `stream` (or a stream derived from `master_seed`).
    """
    from .pipeline import SchemeConfig, compile_scheme, simulate_frame

    if not isinstance(config, SchemeConfig):
        raise TypeError("config must be a SchemeConfig")
    if frames < 1:
        raise ValueError("need at least one frame")
    scheme = compile_scheme(dataclasses.replace(config, early_stop=False))
    if stream is None:
        stream = np.random.default_rng(np.random.SeedSequence([int(master_seed), 3, 0]))

    order: list[tuple[int, str]] = []
    sums: dict[tuple[int, str], list] = {}

    def observer(iteration: int, stage: str, messages: np.ndarray, truth: np.ndarray):
        key = (iteration, stage)
        slot = sums.get(key)
        if slot is None:
            slot = sums[key] = [0.0, 0]
            order.append(key)
        score, _ = _log_scores(np.asarray(messages, dtype=np.float64), truth)
        slot[0] += score
        slot[1] += truth.size

    for _ in range(frames):
        simulate_frame(scheme, float(p), stream, observer=observer)

    points = []
    for iteration, stage in order:
        score, count = sums[(iteration, stage)]
        I = min(max(MAX_BITS + score / count, 0.0), MAX_BITS)
        points.append(TrajectoryPoint(iteration, stage, I))
    return points


def code_for_rate(rate) -> QsbcCode:
    """Outer code whose rate k/(k+2) matches `rate` ("1/2", fraction,
    or float)."""
    from fractions import Fraction

    if isinstance(rate, str):
        frac = Fraction(rate)
    elif isinstance(rate, Fraction):
        frac = rate
    else:
        frac = Fraction(float(rate)).limit_denominator(100)
    if not 0 < frac < 1:
        raise ValueError(f"rate must be in (0, 1), got {rate}")
    k_frac = 2 * frac / (1 - frac)
    if k_frac.denominator != 1 or k_frac.numerator % 2:
        raise ValueError(f"no short-block code has rate {rate}")
    return build_qsbc(int(k_frac))


def tunnel_is_open(
    inner_points: list[ExitPoint],
    outer_points: list[ExitPoint],
    max_normalized: float = 0.95,
) -> bool:
    """Whether the inner transfer clears the outer demand curve.

    The outer curve is read inversely: to emit extrinsic information I
    (which becomes the inner a priori), the outer decoder demands
    a-priori information demand(I).  The tunnel is open when, at every
    a-priori level I up to `max_normalized` of the 2-bit maximum, the
    inner decoder's extrinsic output meets that demand:
    inner_I_E(I) >= demand(I).

    The cap comparison carries a small tolerance so that grid points
    meant to land exactly on the cap (e.g. 1.9000000000000001 from
    `linspace`) are still checked.
    """
    cap = max_normalized * MAX_BITS + 1e-9
    inner_ia = np.array([pt.I_A for pt in inner_points])
    inner_ie = np.array([pt.I_E for pt in inner_points])
    outer_ia = np.array([pt.I_A for pt in outer_points])
    outer_ie = np.array([pt.I_E for pt in outer_points])
    order = np.argsort(outer_ie)
    grid = inner_ia[inner_ia <= cap]
    if grid.size == 0:
        raise ValueError("inner curve has no points at or below the cap")
    inner_at = np.interp(grid, inner_ia, inner_ie)
    demand_at = np.interp(grid, outer_ie[order], outer_ia[order])
    return bool((inner_at >= demand_at).all())
