"""Acceptance gate: one test per shipping criterion (A1-A10).

Every numerical requirement is asserted together with its runtime
budget.  The heavy Monte-Carlo sweeps are shared between criteria
through module-scoped fixtures, each reporting its own elapsed time.
"""
import time
from fractions import Fraction

import numpy as np
import pytest

from oracles import brute_inner_extrinsic, brute_outer_decode
from qturbo.bounds import (
    BEAT_UNCODED,
    distance_from_bound,
    goodput,
    hashing_threshold,
    switching_points,
    target_requirement,
)
from qturbo.channel import channel_prior
from qturbo.cli import cmd_simulate
from qturbo.config import RunConfig
from qturbo.exit_chart import inner_exit_curve, outer_exit_curve, tunnel_is_open
from qturbo.pipeline import (
    SchemeConfig,
    StopRule,
    compile_scheme,
    decode_frame,
    deinterleave,
    run_point,
)
from qturbo.qsbc import build_qsbc, decompose_blocks, outer_siso_decode, qsbc_gate_list
from qturbo.qurc import (
    build_qurc,
    check_non_catastrophic,
    inner_siso_decode,
    propagate_inverse,
)
from qturbo.symplectic import compile_gates, conjugate, is_symplectic, seed_encode
from qturbo.pauli import from_string


# Transcribed reference literals (independent of the package's own
# tables, so a corrupted table cannot self-certify).

STAGE_SEEDS = (
    (128, 64, 32, 16, 8, 4, 2, 1),
    (128, 64, 160, 16, 10, 4, 2, 1),
    (128, 64, 224, 16, 10, 6, 2, 1),
    (128, 64, 224, 1, 10, 6, 2, 16),
    (128, 64, 240, 3, 10, 6, 2, 16),
    (128, 80, 224, 7, 10, 6, 2, 16),
    (144, 80, 240, 15, 10, 6, 2, 16),
)
CONJUGATION_IN, CONJUGATION_OUT = "ZIXY", "YXIX"

OUTER_SEEDS = {
    2: (144, 80, 240, 15, 10, 6, 2, 16),
    4: (2112, 1088, 576, 320, 4032, 63, 34, 18, 10, 6, 2, 64),
    6: (33024, 16640, 8448, 4352, 2304, 1280, 65280, 255,
        130, 66, 34, 18, 10, 6, 2, 256),
}
INNER_SEED = (21, 56, 5, 46, 44, 38)

QBER_TARGET = 3e-3
MASTER_SEED = 0


# ---------------------------------------------------------------------------
# shared Monte-Carlo sweeps
# ---------------------------------------------------------------------------

def _sweep(rate: Fraction, k: int, points: list[tuple[float, StopRule]]):
    scheme = compile_scheme(SchemeConfig(rate=rate, k=k, iterations=16))
    t0 = time.perf_counter()
    records = [
        run_point(scheme, p, rule, MASTER_SEED, index)
        for index, (p, rule) in enumerate(points)
    ]
    return records, time.perf_counter() - t0


@pytest.fixture(scope="module")
def half_sweep():
    return _sweep(
        Fraction(1, 2), 500,
        [(0.030, StopRule(100, 3000)), (0.048, StopRule(100, 3000))],
    )


@pytest.fixture(scope="module")
def half_sweep_k100():
    return _sweep(Fraction(1, 2), 100, [(0.030, StopRule(100, 8000))])


@pytest.fixture(scope="module")
def two_thirds_sweep():
    return _sweep(
        Fraction(2, 3), 500,
        [(0.012, StopRule(100, 4000)), (0.024, StopRule(100, 4000))],
    )


@pytest.fixture(scope="module")
def three_quarters_sweep():
    return _sweep(
        Fraction(3, 4), 498,
        [(0.009, StopRule(300, 900)), (0.020, StopRule(300, 900))],
    )


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def test_A01_worked_example_bit_exact():
    t0 = time.perf_counter()
    gates = qsbc_gate_list(2)
    assert len(gates) + 1 == len(STAGE_SEEDS)
    for i in range(len(STAGE_SEEDS)):
        built = tuple(seed_encode(compile_gates(gates[:i], 4)))
        assert built == STAGE_SEEDS[i], f"stage {i}: {built}"
    encoder = compile_gates(gates, 4)
    conj = conjugate(from_string(CONJUGATION_IN), encoder).to_string()
    assert conj == CONJUGATION_OUT
    assert time.perf_counter() - t0 < 1.0


def test_A02_seed_tables_and_inner_symplectic():
    t0 = time.perf_counter()
    for k, expected in OUTER_SEEDS.items():
        code = build_qsbc(k)
        assert tuple(seed_encode(code.encoder)) == expected
        assert is_symplectic(code.encoder)
    spec = build_qurc(seed=INNER_SEED)
    assert is_symplectic(spec.transform)
    assert check_non_catastrophic(spec.trellis)
    assert time.perf_counter() - t0 < 1.0


def test_A03_siso_decoders_match_brute_force():
    t0 = time.perf_counter()
    rng = np.random.default_rng(314159)

    for n, prior_sets in ((4, 100), (6, 25), (8, 25)):
        code = build_qsbc(n - 2)
        for _ in range(prior_sets):
            priors = rng.random((n, 4)) + 0.02
            priors /= priors.sum(axis=1, keepdims=True)
            for syndrome_index in range(4):
                res = outer_siso_decode(code, priors, divmod(syndrome_index, 2))
                oracle_ext, oracle_post = brute_outer_decode(
                    code, priors, syndrome_index
                )
                assert np.abs(res.extrinsic - oracle_ext).max() < 1e-12
                assert np.abs(res.logical_posterior - oracle_post).max() < 1e-12

    spec = build_qurc()
    for _ in range(100):
        N = int(rng.integers(2, 7))
        ch = rng.random((N, 4)) + 0.02
        ch /= ch.sum(axis=1, keepdims=True)
        ap = rng.random((N, 4)) + 0.02
        ap /= ap.sum(axis=1, keepdims=True)
        ext = inner_siso_decode(spec.trellis, ch, ap)
        oracle = brute_inner_extrinsic(spec.trellis, ch, ap)
        assert np.abs(ext - oracle).max() < 1e-10

    assert time.perf_counter() - t0 < 300.0


def test_A04_tiny_instance_matches_global_map():
    """Every length-4 pattern whose syndrome-conditioned class posterior
    has a unique maximum must be decoded to that class at p=0.1."""
    t0 = time.perf_counter()
    scheme = compile_scheme(SchemeConfig(rate=Fraction(1, 2), k=2))
    N = scheme.n_total
    p = 0.1
    prior = channel_prior(p)

    shifts = 2 * np.arange(N - 1, -1, -1)
    digits = ((np.arange(4 ** N)[:, None] >> shifts[None, :]) & 3).astype(np.uint8)
    probs = prior[digits].prod(axis=1)

    cls_of = np.empty(4 ** N, dtype=np.int64)
    syn_of = np.empty(4 ** N, dtype=np.int64)
    for idx in range(4 ** N):
        inner_true = propagate_inverse(scheme.qurc, digits[idx])
        outer_true = deinterleave(scheme.interleaver, inner_true)
        logical, syn = decompose_blocks(scheme.code, outer_true.reshape(1, N))
        cls_of[idx] = logical[0, 0] * 4 + logical[0, 1]
        syn_of[idx] = syn[0]

    posterior = np.zeros((4, 16))
    np.add.at(posterior, (syn_of, cls_of), probs)

    unique = 0
    agreed = 0
    disagreements = []
    for idx in range(4 ** N):
        post = posterior[syn_of[idx]]
        order = np.argsort(post)
        if post[order[-1]] - post[order[-2]] <= 1e-12:
            continue  # tied optimum: either answer is acceptable
        unique += 1
        map_class = int(order[-1])
        res = decode_frame(scheme, p, digits[idx])
        sym = res.decoded_logical.symbol_indices()
        decoded = int(sym[0]) * 4 + int(sym[1])
        if decoded == map_class:
            agreed += 1
        elif len(disagreements) < 4:
            disagreements.append(
                f"pattern {idx:3d} (syndrome {syn_of[idx]}): decoded "
                f"class {decoded}, global MAP {map_class}"
            )

    assert time.perf_counter() - t0 < 60.0
    assert agreed == unique, (
        f"pipeline agrees with the global MAP on {agreed}/{unique} "
        f"uniquely-decidable patterns; first mismatches: {disagreements}"
    )


def test_A05_hashing_thresholds():
    t0 = time.perf_counter()
    assert abs(hashing_threshold(Fraction(1, 2)) - 0.074) <= 1e-3
    assert abs(hashing_threshold(Fraction(2, 3)) - 0.044) <= 1e-3
    assert abs(hashing_threshold(Fraction(3, 4)) - 0.031) <= 1e-3
    assert time.perf_counter() - t0 < 1.0


def test_A06_rate_half_waterfall(half_sweep, half_sweep_k100):
    records, seconds = half_sweep
    spot, spot_seconds = half_sweep_k100
    rec_030, rec_048 = records

    assert rec_030.p == 0.030 and rec_048.p == 0.048
    assert rec_030.qber <= QBER_TARGET, f"qber {rec_030.qber:.3e} at p=0.030"
    assert rec_048.qber < 0.048, f"qber {rec_048.qber:.3e} not below uncoded"
    assert rec_030.qubit_errors >= 100
    assert rec_048.qubit_errors >= 100

    # longer frames must not be worse, up to Monte-Carlo resolution
    k100 = spot[0]
    assert k100.qubit_errors >= 100
    monotone = k100.qber >= rec_030.qber
    overlap = (
        k100.ci_high >= rec_030.ci_low and rec_030.ci_high >= k100.ci_low
    )
    assert monotone or overlap, (
        f"k=100 qber {k100.qber:.3e} CI ({k100.ci_low:.3e}, {k100.ci_high:.3e}) vs "
        f"k=500 qber {rec_030.qber:.3e} CI ({rec_030.ci_low:.3e}, {rec_030.ci_high:.3e})"
    )
    assert seconds + spot_seconds <= 7200.0


def test_A07_higher_rate_waterfalls(two_thirds_sweep, three_quarters_sweep):
    two_thirds, s23 = two_thirds_sweep
    three_quarters, s34 = three_quarters_sweep

    rec = two_thirds[0]
    assert rec.p == 0.012
    assert rec.qber <= QBER_TARGET, f"rate 2/3 qber {rec.qber:.3e} at p=0.012"
    assert rec.qubit_errors >= 100

    rec = three_quarters[0]
    assert rec.p == 0.009
    assert rec.qber <= QBER_TARGET, f"rate 3/4 qber {rec.qber:.3e} at p=0.009"
    assert rec.qubit_errors >= 100

    assert s23 + s34 <= 7200.0


def test_A08_exit_tunnel():
    t0 = time.perf_counter()
    # The decisive gap sits at the 0.95-normalized cap (1.9 bits), so the
    # inner grid is rounded to hit 1.9 exactly.  The outer curve is read
    # inversely by linear interpolation and is concave near full
    # information, where a sparse grid would understate its demand; it is
    # exhaustive and cheap, so it gets a 4x denser grid.
    grid = np.round(np.linspace(0.0, 2.0, 21), 10)
    outer_grid = np.round(np.linspace(0.0, 2.0, 81), 10)
    samples = 100_000
    inner_samples = 200_000
    inner_050 = inner_exit_curve(0.05, grid, inner_samples)
    inner_060 = inner_exit_curve(0.06, grid, inner_samples)
    outer_half = outer_exit_curve(Fraction(1, 2), outer_grid, samples)

    for curve in (inner_050, inner_060, outer_half):
        assert all(pt.samples >= samples for pt in curve)

    # even a perfect a priori cannot drive the inner extrinsic to 2 bits
    assert inner_050[-1].I_A == 2.0
    assert inner_050[-1].I_E < 2.0
    assert inner_060[-1].I_E < 2.0

    assert tunnel_is_open(inner_050, outer_half, max_normalized=0.95)
    assert not tunnel_is_open(inner_060, outer_half, max_normalized=0.95)
    assert time.perf_counter() - t0 < 1800.0


def test_A09_bound_analysis(half_sweep, half_sweep_k100, two_thirds_sweep,
                            three_quarters_sweep):
    margin = distance_from_bound(Fraction(1, 2), 0.045, p_star=0.074)
    assert abs(margin - 0.029) <= 1e-12
    assert goodput(Fraction(1, 2), 1e-3) == 0.4995

    records = half_sweep[0] + two_thirds_sweep[0] + three_quarters_sweep[0]
    for requirement in (target_requirement(QBER_TARGET), BEAT_UNCODED):
        table = switching_points(records, requirement)
        thresholds = [
            table.threshold_of(r) for r in (Fraction(1, 2), Fraction(2, 3), Fraction(3, 4))
        ]
        assert all(t is not None for t in thresholds), (
            f"{requirement.label()}: {thresholds}"
        )
        assert thresholds[0] > thresholds[1] > thresholds[2], (
            f"{requirement.label()}: thresholds not decreasing: {thresholds}"
        )


def test_A10_worker_count_is_byte_invisible(tmp_path):
    t0 = time.perf_counter()

    def config(sub: str, workers: int) -> RunConfig:
        return RunConfig(
            rate=Fraction(1, 2), k=100, p_list=(0.02, 0.035, 0.05),
            iterations=16, max_frames=400, target_errors=50,
            master_seed=MASTER_SEED, workers=workers,
            out_dir=str(tmp_path / sub),
        )

    solo = cmd_simulate(config("w1", 1))
    pooled = cmd_simulate(config("w8", 8))
    assert solo.read_bytes() == pooled.read_bytes()
    assert time.perf_counter() - t0 < 600.0
