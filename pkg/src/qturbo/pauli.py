"""Phaseless n-qubit Pauli algebra in the binary symplectic representation.

A Pauli operator (global phase discarded) is stored as a pair of n-bit
vectors (z, x): qubit i carries the symbol determined by

    (z_i, x_i) = (0,0) -> I,  (0,1) -> X,  (1,1) -> Y,  (1,0) -> Z.

The concatenated length-2n row vector [z | x] is the operator's binary
form.  Two operators anticommute exactly when their symplectic product

    <a, b> = (a.z . b.x + a.x . b.z) mod 2

equals 1; the phaseless group product is componentwise XOR.  Qubit 1 is
the leftmost character of a symbol string and index 0 of the bit arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Symbol indices: the canonical 4-ary alphabet order used everywhere
# (distributions, trellis labels, hard decisions).  Lexicographic
# comparisons of symbol strings coincide with numeric comparisons of
# these indices.
SYMBOLS = "IXYZ"
I, X, Y, Z = 0, 1, 2, 3

# symbol index -> (z bit, x bit)
_SYMBOL_Z = np.array([0, 0, 1, 1], dtype=np.uint8)
_SYMBOL_X = np.array([0, 1, 1, 0], dtype=np.uint8)
# (z bit, x bit) -> symbol index
_SYMBOL_OF_BITS = np.array([[0, 1], [3, 2]], dtype=np.uint8)


def symbol_z_bits(symbols: np.ndarray) -> np.ndarray:
    """Z bit of each symbol index in an array."""
    return _SYMBOL_Z[symbols]


def symbol_x_bits(symbols: np.ndarray) -> np.ndarray:
    """X bit of each symbol index in an array."""
    return _SYMBOL_X[symbols]


def symbols_from_bits(z: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Symbol indices from parallel arrays of z and x bits."""
    return _SYMBOL_OF_BITS[z.astype(np.intp), x.astype(np.intp)]


@dataclass(frozen=True)
class PauliOperator:
    """Phaseless Pauli operator on ``n`` qubits as z/x bit vectors."""

    n: int
    z: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        z = np.ascontiguousarray(self.z, dtype=np.uint8)
        x = np.ascontiguousarray(self.x, dtype=np.uint8)
        if self.n < 1:
            raise ValueError("operator needs at least one qubit")
        if z.shape != (self.n,) or x.shape != (self.n,):
            raise ValueError("z and x parts must both have length n")
        if (z > 1).any() or (x > 1).any():
            raise ValueError("z and x parts must be 0/1 vectors")
        z.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "x", x)

    # -- constructors ------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @classmethod
    def single(cls, n: int, qubit: int, symbol: int | str) -> "PauliOperator":
        """Operator acting with ``symbol`` on one qubit (1-based) and I elsewhere."""
        if not 1 <= qubit <= n:
            raise ValueError(f"qubit {qubit} out of range 1..{n}")
        if isinstance(symbol, str):
            symbol = SYMBOLS.index(symbol)
        z = np.zeros(n, dtype=np.uint8)
        x = np.zeros(n, dtype=np.uint8)
        z[qubit - 1] = _SYMBOL_Z[symbol]
        x[qubit - 1] = _SYMBOL_X[symbol]
        return cls(n, z, x)

    @classmethod
    def from_indices(cls, symbols: np.ndarray) -> "PauliOperator":
        """Build from an array of symbol indices (0..3), qubit 1 first."""
        symbols = np.asarray(symbols)
        if symbols.ndim != 1 or symbols.size == 0:
            raise ValueError("need a non-empty 1-D symbol sequence")
        return cls(symbols.size, _SYMBOL_Z[symbols], _SYMBOL_X[symbols])

    @classmethod
    def from_bits(cls, bits: np.ndarray) -> "PauliOperator":
        """Build from a length-2n row vector [z | x]."""
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 1 or bits.size % 2 or bits.size == 0:
            raise ValueError("bit vector must have even positive length")
        n = bits.size // 2
        return cls(n, bits[:n], bits[n:])

    # -- views -------------------------------------------------------

    def to_bits(self) -> np.ndarray:
        """Length-2n row vector [z | x]."""
        return np.concatenate([self.z, self.x])

    def symbol_indices(self) -> np.ndarray:
        """Array of symbol indices (0..3), qubit 1 first."""
        return symbols_from_bits(self.z, self.x)

    def to_string(self) -> str:
        return "".join(SYMBOLS[s] for s in self.symbol_indices())

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.to_string()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliOperator)
            and self.n == other.n
            and np.array_equal(self.z, other.z)
            and np.array_equal(self.x, other.x)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.z.tobytes(), self.x.tobytes()))


def from_symbols(symbols) -> PauliOperator:
    """Build an operator from a sequence of symbols ('X' or index), qubit 1 first."""
    seq = list(symbols)
    if not seq:
        raise ValueError("need a non-empty symbol sequence")
    idx = np.array(
        [SYMBOLS.index(s) if isinstance(s, str) else int(s) for s in seq],
        dtype=np.uint8,
    )
    if (idx > 3).any():
        raise ValueError("symbol indices must be in 0..3")
    return PauliOperator.from_indices(idx)


def from_string(text: str) -> PauliOperator:
    """Parse a Pauli string like ``"ZIXY"`` (qubit 1 leftmost)."""
    return from_symbols(text)


def to_symbols(a: PauliOperator) -> list[str]:
    return [SYMBOLS[s] for s in a.symbol_indices()]


def symplectic_product(a: PauliOperator, b: PauliOperator) -> int:
    """0 if a and b commute, 1 if they anticommute."""
    if a.n != b.n:
        raise ValueError("operators act on different qubit counts")
    return int(a.z @ b.x + a.x @ b.z) % 2


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Phaseless group product: componentwise XOR of z and x parts."""
    if a.n != b.n:
        raise ValueError("operators act on different qubit counts")
    return PauliOperator(a.n, a.z ^ b.z, a.x ^ b.x)


def weight(a: PauliOperator) -> int:
    """Number of qubits carrying a non-identity symbol."""
    return int(np.count_nonzero(a.z | a.x))
