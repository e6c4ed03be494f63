"""Named seed constants for the code families handled by this package.

A "seed" is the decimal encoding of an encoder's binary symplectic
matrix, one integer per row with qubit 1 as the most significant bit
(see symplectic.seed_encode).  The short-block outer codes are rebuilt
from gate lists and must compile to exactly these rows; the unity-rate
inner code is decoded directly from its seed.

The irregular-convolutional rows are reference data only: they describe
the benchmark scheme this package does not simulate, and are exposed by
the `codes` subcommand for side-by-side comparison.
"""
from __future__ import annotations

# Compiled encoder rows for the C[k+2, k, 2] outer codes, keyed by k.
QSBC_SEEDS: dict[int, tuple[int, ...]] = {
    2: (144, 80, 240, 15, 10, 6, 2, 16),
    4: (2112, 1088, 576, 320, 4032, 63, 34, 18, 10, 6, 2, 64),
    6: (33024, 16640, 8448, 4352, 2304, 1280, 65280, 255,
        130, 66, 34, 18, 10, 6, 2, 256),
}

# The 3-qubit unity-rate inner code (2 memory qubits + 1 frame qubit).
QURC_SEED: tuple[int, ...] = (21, 56, 5, 46, 44, 38)

# Row encodings of every intermediate transform while building the k=2
# encoder gate by gate: stage 0 is the identity, stage i the compile of
# the first i gates of qsbc_gate_list(2), stage 6 the full encoder.
# `verify` replays the build and demands each stage bit-exactly.
QSBC2_BUILD_STAGES: tuple[tuple[int, ...], ...] = (
    (128, 64, 32, 16, 8, 4, 2, 1),
    (128, 64, 160, 16, 10, 4, 2, 1),
    (128, 64, 224, 16, 10, 6, 2, 1),
    (128, 64, 224, 1, 10, 6, 2, 16),
    (128, 64, 240, 3, 10, 6, 2, 16),
    (128, 80, 224, 7, 10, 6, 2, 16),
    (144, 80, 240, 15, 10, 6, 2, 16),
)

# Conjugating the first string through the full k=2 encoder must give
# the second (qubit 1 leftmost).
CONJUGATION_EXAMPLE: tuple[str, str] = ("ZIXY", "YXIX")

# Hashing-bound thresholds p* for the supported outer rates, quoted to
# the precision used in acceptance checks; bounds.hashing_threshold
# recomputes them from the capacity formula.
REFERENCE_HASHING_THRESHOLDS: dict[str, float] = {
    "1/2": 0.074,
    "2/3": 0.044,
    "3/4": 0.031,
}

# Benchmark irregular-convolutional component seeds (memory 3), data
# only — printable for reference, never simulated here.
QIRCC_REFERENCE_SEEDS: dict[str, tuple[int, ...]] = {
    "1/4": (9600, 691, 11713, 4863, 1013, 6907, 1125, 828, 10372, 6337,
            5590, 11024, 12339, 3439),
    "1/3": (3968, 1463, 2596, 3451, 1134, 3474, 657, 686, 3113, 1866,
            2608, 2570),
    "1/2": (848, 1000, 930, 278, 611, 263, 744, 260, 356, 880),
    "2/3": (529, 807, 253, 1950, 3979, 2794, 956, 1892, 3359, 2127,
            3812, 1580),
    "3/4": (62, 6173, 4409, 12688, 7654, 10804, 1763, 15590, 6304, 3120,
            2349, 1470, 9063, 4020),
}
