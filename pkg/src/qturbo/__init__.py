"""Classical simulation and analysis suite for serially concatenated
short-block / unity-rate quantum turbo codes on depolarizing channels.

Layers, lowest first:

    pauli           phaseless Pauli algebra over z/x bit vectors
    symplectic      CNOT/H circuit compilation to binary transforms
    qsbc            a short-block outer code family and its exact SISO decoder
    qurc            a unity-rate convolutional inner code and its BCJR decoder
    channel         depolarizing-channel priors and sampling
    pipeline        concatenation, iterative decoding, Monte-Carlo sweeps
    exit_chart      information-transfer curves and decoding trajectories
    bounds          hashing-bound analysis, goodput, rate switching
    config, cli     TOML run configuration and the qturbo command
"""

__version__ = "0.1.0"

from .bounds import (
    BEAT_UNCODED,
    Requirement,
    SwitchTable,
    distance_from_bound,
    goodput,
    hashing_capacity,
    hashing_threshold,
    switching_points,
    target_requirement,
)
from .channel import channel_prior, sample_error, sample_symbols, uncoded_qber
from .config import RunConfig, config_hash, load_config
from .exit_chart import (
    ExitPoint,
    TrajectoryPoint,
    apriori_mi,
    calibrate_q,
    generate_apriori,
    inner_exit_curve,
    measure_mi,
    outer_exit_curve,
    record_trajectory,
    tunnel_is_open,
)
from .pauli import PauliOperator, from_string, from_symbols, multiply, symplectic_product, weight
from .pipeline import (
    FrameResult,
    Interleaver,
    SchemeConfig,
    StopRule,
    SweepRecord,
    build_interleaver,
    compile_scheme,
    decode_frame,
    run_point,
    run_sweep,
    simulate_frame,
)
from .qsbc import QsbcCode, build_qsbc, outer_siso_decode, split_error, syndrome_of
from .qurc import (
    QurcSpec,
    build_qurc,
    check_non_catastrophic,
    inner_siso_decode,
    propagate_forward,
    propagate_inverse,
)
from .symplectic import (
    SymplecticTransform,
    apply_cnot,
    apply_hadamard,
    compile_gates,
    conjugate,
    identity_transform,
    invert_gates,
    is_symplectic,
    seed_decode,
    seed_encode,
)

__all__ = [name for name in dir() if not name.startswith("_")]
