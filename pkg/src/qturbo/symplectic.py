"""Binary symplectic transforms built from CNOT/Hadamard gate lists.

A Clifford circuit on n qubits that maps Paulis to Paulis (phase
ignored) is represented by a 2n x 2n binary matrix V: row i is the
image of Z_i and row n+i the image of X_i, each written as a [z | x]
bit row with qubit 1 the most significant position of each half.
Conjugating an operator P by the circuit is then the row-vector
product P * V over F2.

Gate action on V (columns indexed 1..2n, qubits 1-based):

* CNOT(i, j): column i += column j, and column n+j += column n+i
  (X propagates control -> target, Z propagates target -> control);
* H(i): swap columns i and n+i.

A transform serializes to a "seed": the list of its 2n rows read as
big-endian 2n-bit integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .pauli import PauliOperator


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int


@dataclass(frozen=True)
class Hadamard:
    qubit: int


Gate = Union[Cnot, Hadamard]


@dataclass(frozen=True)
class SymplecticTransform:
    """2n x 2n binary matrix acting on [z | x] row vectors."""

    n: int
    mat: np.ndarray

    def __post_init__(self):
        mat = np.ascontiguousarray(self.mat, dtype=np.uint8)
        if mat.shape != (2 * self.n, 2 * self.n):
            raise ValueError("matrix must be 2n x 2n")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymplecticTransform)
            and self.n == other.n
            and np.array_equal(self.mat, other.mat)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.mat.tobytes()))


def identity_transform(n: int) -> SymplecticTransform:
    if n < 1:
        raise ValueError("need at least one qubit")
    return SymplecticTransform(n, np.eye(2 * n, dtype=np.uint8))


def apply_cnot(V: SymplecticTransform, control: int, target: int) -> SymplecticTransform:
    """Update V by a CNOT with 1-based control/target qubits."""
    n = V.n
    if not (1 <= control <= n and 1 <= target <= n):
        raise ValueError("qubit index out of range")
    if control == target:
        raise ValueError("control and target must differ")
    mat = V.mat.copy()
    i, j = control - 1, target - 1
    mat[:, i] ^= mat[:, j]
    mat[:, n + j] ^= mat[:, n + i]
    return SymplecticTransform(n, mat)


def apply_hadamard(V: SymplecticTransform, qubit: int) -> SymplecticTransform:
    """Update V by a Hadamard on a 1-based qubit."""
    n = V.n
    if not 1 <= qubit <= n:
        raise ValueError("qubit index out of range")
    mat = V.mat.copy()
    i = qubit - 1
    mat[:, [i, n + i]] = mat[:, [n + i, i]]
    return SymplecticTransform(n, mat)


def _apply_gate(V: SymplecticTransform, gate: Gate) -> SymplecticTransform:
    if isinstance(gate, Cnot):
        return apply_cnot(V, gate.control, gate.target)
    if isinstance(gate, Hadamard):
        return apply_hadamard(V, gate.qubit)
    raise TypeError(f"unknown gate {gate!r}")


def compile_gates(gates: Iterable[Gate], n: int) -> SymplecticTransform:
    """Left-to-right fold of the gate list starting from the identity."""
    V = identity_transform(n)
    for gate in gates:
        V = _apply_gate(V, gate)
    return V


def invert_gates(gates: Iterable[Gate], n: int) -> SymplecticTransform:
    """Transform of the reversed circuit (CNOT and H are self-inverse)."""
    return compile_gates(list(gates)[::-1], n)


def conjugate(P: PauliOperator, V: SymplecticTransform) -> PauliOperator:
    """Image of P under the circuit: [z | x] row times V over F2."""
    if P.n != V.n:
        raise ValueError("operator and transform sizes differ")
    bits = (P.to_bits().astype(np.uint16) @ V.mat) % 2
    return PauliOperator.from_bits(bits.astype(np.uint8))


def matmul_f2(A: SymplecticTransform, B: SymplecticTransform) -> SymplecticTransform:
    """Composition: first A's circuit, then B's (rows map through both)."""
    if A.n != B.n:
        raise ValueError("transform sizes differ")
    prod = (A.mat.astype(np.uint16) @ B.mat) % 2
    return SymplecticTransform(A.n, prod.astype(np.uint8))


def inverse_transform(V: SymplecticTransform) -> SymplecticTransform:
    """Matrix inverse over F2 by Gauss-Jordan elimination."""
    m = 2 * V.n
    aug = np.concatenate([V.mat.copy(), np.eye(m, dtype=np.uint8)], axis=1)
    row = 0
    for col in range(m):
        pivots = np.nonzero(aug[row:, col])[0]
        if pivots.size == 0:
            raise ValueError("matrix is singular over F2")
        piv = row + int(pivots[0])
        if piv != row:
            aug[[row, piv]] = aug[[piv, row]]
        hits = np.nonzero(aug[:, col])[0]
        for r in hits:
            if r != row:
                aug[r] ^= aug[row]
        row += 1
    return SymplecticTransform(V.n, aug[:, m:])


def is_symplectic(V: SymplecticTransform) -> bool:
    """True iff V preserves all pairwise symplectic products of basis rows."""
    n = V.n
    lam = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    lam[:n, n:] = np.eye(n, dtype=np.uint8)
    lam[n:, :n] = np.eye(n, dtype=np.uint8)
    m = V.mat.astype(np.uint16)
    got = m @ lam @ m.T % 2
    return np.array_equal(got.astype(np.uint8), lam)


def seed_encode(V: SymplecticTransform) -> list[int]:
    """Rows of V as big-endian 2n-bit integers (qubit 1 = most significant)."""
    w = 2 * V.n
    weights = 1 << np.arange(w - 1, -1, -1, dtype=np.uint64)
    return [int(row @ weights) for row in V.mat.astype(np.uint64)]


def seed_decode(seed: Iterable[int], n: int) -> SymplecticTransform:
    """Transform whose rows are the given big-endian 2n-bit integers."""
    values = [int(v) for v in seed]
    w = 2 * n
    if len(values) != w:
        raise ValueError(f"seed must list exactly {w} integers")
    rows = np.zeros((w, w), dtype=np.uint8)
    for r, value in enumerate(values):
        if not 0 <= value < (1 << w):
            raise ValueError(f"seed entry {value} out of range for {w} bits")
        for c in range(w):
            rows[r, c] = (value >> (w - 1 - c)) & 1
    return SymplecticTransform(n, rows)
