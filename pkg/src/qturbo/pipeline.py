"""Serially concatenated scheme: interleaved short-block outer code with
a unity-rate convolutional inner code, plus the iterative decoder and
the Monte-Carlo sweep harness.

Message flow per frame (k logical qubits, B = k/k1 outer blocks,
N = B*n physical qubits = inner frames):

    channel error E_phys  --inverse inner machine-->  L2 (inner-logical)
    L2  --deinterleave-->  P1, split per block into true logical + syndrome

    iterate:  inner SISO(channel priors, a priori)  ->  extrinsic
              --deinterleave-->  outer a priori
              outer SISO(a priori, syndrome)        ->  extrinsic + hard classes
              --interleave-->  inner a priori

The decoded logical error is the last iteration's block-wise class MAP;
a logical qubit counts as an error when its decoded symbol differs from
the true one (X, Y, Z all count once).

Determinism: every frame draws from a stream derived from
(master_seed, point_index, frame_index); frames are simulated one at a
time with fixed-size reductions only, and sweep stop rules are
evaluated at fixed 32-frame chunk boundaries in frame order — so
results are bit-identical for any worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channel import channel_prior, sample_symbols
from .pauli import PauliOperator
from .qsbc import QsbcCode, build_qsbc, decompose_blocks, outer_siso_batch
from .qurc import QurcSpec, build_qurc, inner_siso_decode, propagate_inverse

SWEEP_CHUNK = 32
_WILSON_Z = 1.959963984540054  # two-sided 95%


@dataclass(frozen=True)
class SchemeConfig:
    """Static description of one simulated scheme."""

    rate: Fraction                # outer rate k1/(k1+2), one of 1/2, 2/3, 3/4
    k: int                        # total logical qubits per frame
    iterations: int = 16
    early_stop: bool = True
    interleaver_seed: int = 0
    memory_last: bool = False

    def __post_init__(self):
        if not isinstance(self.rate, Fraction):
            object.__setattr__(self, "rate", Fraction(self.rate))
        k1 = self.block_k
        if self.k < k1 or self.k % k1:
            raise ValueError(
                f"k must be a positive multiple of the per-block k1={k1}, got {self.k}"
            )
        if self.iterations < 1:
            raise ValueError("need at least one iteration")

    @property
    def block_k(self) -> int:
        frac = 2 * self.rate / (1 - self.rate)
        if frac.denominator != 1 or frac.numerator % 2:
            raise ValueError(f"no short-block code has rate {self.rate}")
        return int(frac)


@dataclass(frozen=True)
class Interleaver:
    permutation: np.ndarray       # interleaved[t] = flat[permutation[t]]
    inverse: np.ndarray


@dataclass(frozen=True)
class CompiledScheme:
    """Config plus the built code objects (immutable, shareable)."""

    config: SchemeConfig
    code: QsbcCode
    qurc: QurcSpec
    interleaver: Interleaver

    @property
    def num_blocks(self) -> int:
        return self.config.k // self.code.k

    @property
    def n_total(self) -> int:
        return self.num_blocks * self.code.n


@dataclass(frozen=True)
class FrameResult:
    true_logical: PauliOperator
    decoded_logical: PauliOperator
    qubit_errors: int
    iterations_used: int


@dataclass(frozen=True)
class StopRule:
    """Sweep point finishes when either bound is reached (checked at
    fixed chunk boundaries)."""

    target_errors: int = 100
    max_frames: int = 10_000


@dataclass(frozen=True)
class SweepRecord:
    rate: Fraction
    k: int
    p: float
    frames: int
    qubit_errors: int
    qubit_total: int
    qber: float
    ci_low: float
    ci_high: float
    mean_iterations: float


def _fisher_yates(n: int, rng: np.random.Generator) -> np.ndarray:
    """Explicit Fisher-Yates walk (stable across library versions)."""
    perm = np.arange(n, dtype=np.intp)
    for i in range(n - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def _spread_permutation(n: int, seed: int, spread: int) -> np.ndarray | None:
    """One deterministic greedy attempt family at a given spread.

    Greedy walk over a seeded shuffled pool: the value placed at
    position t must differ by at least `spread` from the values at the
    previous spread-1 positions.  Returns None when every attempt at
    this spread dead-ends.
    """
    for attempt in range(40):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), spread, attempt]))
        pool = _fisher_yates(n, rng).tolist()
        perm: list[int] = []
        recent: list[int] = []
        ok = True
        for _ in range(n):
            pick = None
            for idx, v in enumerate(pool):
                if all(abs(v - r) >= spread for r in recent):
                    pick = idx
                    break
            if pick is None:
                ok = False
                break
            v = pool.pop(pick)
            perm.append(v)
            recent.append(v)
            if len(recent) >= spread:
                recent.pop(0)
        if ok:
            return np.array(perm, dtype=np.intp)
    return None


def build_interleaver(n: int, seed: int, spread: int | None = None) -> Interleaver:
    """Fixed pseudo-random permutation with a minimum-spread guarantee.

    Positions closer than S in one domain are mapped at least S apart
    in the other (S-random construction), which prevents short cycles
    between the inner machine's memory span and an outer block's
    consecutive qubits - plain random permutations intermittently
    produce such cycles and with them bursty convergence failures.  S
    defaults to floor(sqrt(n/2)), the classical achievable spread; the
    greedy construction deterministically retries and then lowers S
    whenever it dead-ends, so the result is a pure function of
    (n, seed, spread).  S <= 1 reduces to a plain Fisher-Yates shuffle.
    """
    if n < 1:
        raise ValueError("interleaver needs at least one position")
    s = int(math.isqrt(n // 2)) if spread is None else int(spread)
    perm = None
    while s > 1:
        perm = _spread_permutation(n, seed, s)
        if perm is not None:
            break
        s -= 1
    if perm is None:
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), 1, 0]))
        perm = _fisher_yates(n, rng)
    inverse = np.empty(n, dtype=np.intp)
    inverse[perm] = np.arange(n, dtype=np.intp)
    return Interleaver(permutation=perm, inverse=inverse)


def interleave(interleaver: Interleaver, values: np.ndarray) -> np.ndarray:
    return values[interleaver.permutation]


def deinterleave(interleaver: Interleaver, values: np.ndarray) -> np.ndarray:
    return values[interleaver.inverse]


def compile_scheme(config: SchemeConfig) -> CompiledScheme:
    code = build_qsbc(config.block_k)
    qurc = build_qurc(memory_last=config.memory_last)
    n_total = (config.k // code.k) * code.n
    interleaver = build_interleaver(n_total, config.interleaver_seed)
    return CompiledScheme(config=config, code=code, qurc=qurc, interleaver=interleaver)


def early_stop_check(prev_decision: np.ndarray | None, current_decision: np.ndarray) -> bool:
    """True when two successive hard-decision vectors agree everywhere."""
    if prev_decision is None:
        return False
    return bool(np.array_equal(prev_decision, current_decision))


def decode_frame(
    scheme: CompiledScheme,
    p: float,
    e_phys: np.ndarray,
    observer=None,
) -> FrameResult:
    """Run the receiver chain and iterative decoder on a given error.

    `observer(iteration, stage, messages, truth)` - if given - is called
    after each inner pass (stage "inner", messages in the inner domain)
    and each outer pass (stage "outer", messages in the outer domain),
    with the true symbols of that domain.
    """
    cfg = scheme.config
    code = scheme.code
    N = scheme.n_total
    e_phys = np.asarray(e_phys, dtype=np.uint8)
    if e_phys.shape != (N,):
        raise ValueError(f"physical error must have shape ({N},)")

    inner_true = propagate_inverse(scheme.qurc, e_phys)
    outer_true = deinterleave(scheme.interleaver, inner_true)
    blocks = outer_true.reshape(scheme.num_blocks, code.n)
    true_logical, syndromes = decompose_blocks(code, blocks)
    true_flat = true_logical.reshape(-1)

    ch = np.tile(channel_prior(p), (N, 1))
    inner_apriori = np.full((N, 4), 0.25)
    decided = None
    iterations_used = cfg.iterations
    for iteration in range(1, cfg.iterations + 1):
        inner_ext = inner_siso_decode(scheme.qurc.trellis, ch, inner_apriori)
        if observer is not None:
            observer(iteration, "inner", inner_ext, inner_true)
        outer_priors = deinterleave(scheme.interleaver, inner_ext).reshape(
            scheme.num_blocks, code.n, 4
        )
        outer_ext, hard = outer_siso_batch(code, outer_priors, syndromes)
        if observer is not None:
            observer(
                iteration, "outer", outer_ext.reshape(N, 4),
                outer_true,
            )
        hard_flat = hard.reshape(-1)
        if cfg.early_stop and early_stop_check(decided, hard_flat):
            decided = hard_flat
            iterations_used = iteration
            break
        decided = hard_flat
        inner_apriori = interleave(scheme.interleaver, outer_ext.reshape(N, 4))

    qubit_errors = int((decided != true_flat).sum())
    return FrameResult(
        true_logical=PauliOperator.from_indices(true_flat),
        decoded_logical=PauliOperator.from_indices(decided),
        qubit_errors=qubit_errors,
        iterations_used=iterations_used,
    )


def frame_stream(master_seed: int, point_index: int, frame_index: int) -> np.random.Generator:
    """Independent, reproducible stream for one Monte-Carlo frame."""
    return np.random.default_rng(
        np.random.SeedSequence([int(master_seed), int(point_index), int(frame_index)])
    )


def simulate_frame(
    scheme: CompiledScheme,
    p: float,
    rng: np.random.Generator,
    observer=None,
) -> FrameResult:
    """Sample a channel error and decode it."""
    e_phys = sample_symbols(p, scheme.n_total, rng) if p > 0 else np.zeros(
        scheme.n_total, dtype=np.uint8
    )
    return decode_frame(scheme, p, e_phys, observer=observer)


def wilson_interval(errors: int, total: int, z: float = _WILSON_Z) -> tuple[float, float]:
    """Wilson 95% score interval for a binomial proportion."""
    if total <= 0:
        raise ValueError("need at least one observation")
    phat = errors / total
    denom = 1.0 + z * z / total
    center = (phat + z * z / (2 * total)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / total + z * z / (4 * total * total))
    return (max(0.0, center - half), min(1.0, center + half))


def run_point(
    scheme: CompiledScheme,
    p: float,
    stop_rule: StopRule,
    master_seed: int,
    point_index: int,
    workers: int = 1,
) -> SweepRecord:
    """Monte-Carlo one sweep point deterministically.

    Frames are processed in fixed chunks; each frame's stream depends
    only on (master_seed, point_index, frame_index), and the stop rule
    is evaluated at chunk boundaries, so the result does not depend on
    the worker count.
    """
    cfg = scheme.config
    errors = 0
    frames = 0
    iteration_sum = 0

    def one(frame_index: int) -> FrameResult:
        return simulate_frame(scheme, p, frame_stream(master_seed, point_index, frame_index))

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while frames < stop_rule.max_frames and errors < stop_rule.target_errors:
            chunk = range(frames, min(frames + SWEEP_CHUNK, stop_rule.max_frames))
            results = list(pool.map(one, chunk)) if pool else [one(i) for i in chunk]
            for res in results:  # aggregate in frame order
                errors += res.qubit_errors
                iteration_sum += res.iterations_used
                frames += 1
    finally:
        if pool:
            pool.shutdown()

    total = frames * cfg.k
    qber = errors / total
    lo, hi = wilson_interval(errors, total)
    return SweepRecord(
        rate=cfg.rate,
        k=cfg.k,
        p=float(p),
        frames=frames,
        qubit_errors=errors,
        qubit_total=total,
        qber=qber,
        ci_low=lo,
        ci_high=hi,
        mean_iterations=iteration_sum / frames,
    )


def run_sweep(
    config: SchemeConfig,
    p_list,
    stop_rule: StopRule,
    master_seed: int = 0,
    workers: int = 1,
    point_offset: int = 0,
    progress=None,
) -> list[SweepRecord]:
    """Sweep a p-grid; point i uses stream family (master_seed, i + offset)."""
    if not len(p_list):
        raise ValueError("p_list must be non-empty")
    scheme = compile_scheme(config)
    records = []
    for i, p in enumerate(p_list):
        record = run_point(scheme, float(p), stop_rule, master_seed, point_offset + i, workers)
        records.append(record)
        if progress is not None:
            progress(record)
    return records
