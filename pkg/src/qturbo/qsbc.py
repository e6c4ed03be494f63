"""Short-block outer codes C[n, n-2, 2] and their exact SISO decoder.

The family is a dual-containing CSS construction whose parity-check
matrix is a pair of all-ones rows, [[1..1 | 0..0], [0..0 | 1..1]]; the
two stabilizers are Z^(x)n and X^(x)n.  A code with k logical qubits
uses n = k + 2 physical qubits (n even) and has rate k/n.

Encoder circuit (two stages, 1-based qubits):

    stage 1:  CNOT(i, k+1) for i = 1..k ascending
    stage 2:  H(n), then CNOT(n, j) for j = n-1 down to 1

With this layout the encoded Z of ancilla k+1 is Z^(x)n and the encoded
Z of ancilla n is X^(x)n, so measuring those two ancillas in the
unencoded frame reads off both stabilizer syndromes.

Decoding is exact MAP marginalization by enumerating all 4^n physical
error patterns (n <= 8 keeps this below 65536 patterns).  Degenerate
patterns - equal up to multiplication by a stabilizer-group element -
are pooled into one logical class before the hard decision.

Numerical discipline: every reduction in the batched decoder is either
elementwise or a per-row sum over a fixed-size contiguous axis, so a
block's result is bit-identical no matter how blocks are batched or
scheduled across workers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import pauli
from .pauli import PauliOperator
from .symplectic import (
    Cnot,
    Gate,
    Hadamard,
    SymplecticTransform,
    compile_gates,
    conjugate,
    invert_gates,
)

# Blocks are processed in fixed-size chunks inside the batched decoder so
# peak memory stays bounded; the chunk size is a constant to keep results
# independent of batch composition.
_BLOCK_CHUNK = 32


@dataclass(frozen=True)
class QsbcCode:
    """A C[n, n-2, 2] code with its compiled encoder and index map."""

    n: int
    k: int
    pcm: np.ndarray
    stabilizers: tuple[PauliOperator, PauliOperator]
    gates: tuple[Gate, ...]
    encoder: SymplecticTransform
    inverse_encoder: SymplecticTransform
    logical_positions: tuple[int, ...]
    z_ancilla: int
    x_ancilla: int


@dataclass(frozen=True)
class ErrorDecomposition:
    """Error split into logical content, syndrome bits, and the
    degenerate Z residual on the two ancillas."""

    logical: PauliOperator
    syndrome: tuple[int, int]
    ancilla_z_residual: tuple[int, int]


@dataclass(frozen=True)
class OuterDecodeResult:
    extrinsic: np.ndarray            # (n, 4) rows summing to 1
    logical_posterior: np.ndarray    # (4^k,) over degenerate classes
    hard_decision: PauliOperator     # argmax class, lexicographic ties
    priors_renormalized: bool        # input rows were not normalized


def qsbc_gate_list(k: int) -> tuple[Gate, ...]:
    """Two-stage encoder layout for k logical qubits (n = k + 2)."""
    n = k + 2
    gates: list[Gate] = [Cnot(i, k + 1) for i in range(1, k + 1)]
    gates.append(Hadamard(n))
    gates.extend(Cnot(n, j) for j in range(n - 1, 0, -1))
    return tuple(gates)


def build_qsbc(k: int) -> QsbcCode:
    """Construct the C[k+2, k, 2] code for an even k >= 2."""
    if k < 2 or k % 2:
        raise ValueError("k must be an even integer >= 2 (n = k + 2 must be even)")
    n = k + 2
    ones = np.ones(n, dtype=np.uint8)
    zeros = np.zeros(n, dtype=np.uint8)
    pcm = np.array([np.concatenate([ones, zeros]), np.concatenate([zeros, ones])])
    s1 = PauliOperator(n, ones.copy(), zeros.copy())   # Z^(x)n
    s2 = PauliOperator(n, zeros.copy(), ones.copy())   # X^(x)n
    gates = qsbc_gate_list(k)
    encoder = compile_gates(gates, n)
    inverse = invert_gates(gates, n)
    return QsbcCode(
        n=n,
        k=k,
        pcm=pcm,
        stabilizers=(s1, s2),
        gates=gates,
        encoder=encoder,
        inverse_encoder=inverse,
        logical_positions=tuple(range(1, k + 1)),
        z_ancilla=k + 1,
        x_ancilla=n,
    )


def rate_of(code: QsbcCode) -> float:
    return code.k / code.n


def syndrome_of(code: QsbcCode, E: PauliOperator) -> tuple[int, int]:
    """Anticommutation bits of E with (Z^(x)n, X^(x)n)."""
    if E.n != code.n:
        raise ValueError("operator size does not match the code")
    s1 = int(E.x.sum()) % 2   # overlap with the all-Z stabilizer
    s2 = int(E.z.sum()) % 2   # overlap with the all-X stabilizer
    return (s1, s2)


def split_error(code: QsbcCode, E: PauliOperator) -> ErrorDecomposition:
    """Decompose a physical error via the inverse encoder.

    The conjugated error's first k qubits carry the logical content;
    the X components on the two ancilla qubits are the computational
    basis flips that the stabilizer measurements detect, and the Z
    components there act trivially on the code space (degenerate part).
    """
    if E.n != code.n:
        raise ValueError("operator size does not match the code")
    Ep = conjugate(E, code.inverse_encoder)
    k = code.k
    logical = PauliOperator(k, Ep.z[:k].copy(), Ep.x[:k].copy())
    za, xa = code.z_ancilla - 1, code.x_ancilla - 1
    syndrome = (int(Ep.x[za]), int(Ep.x[xa]))
    residual = (int(Ep.z[za]), int(Ep.z[xa]))
    return ErrorDecomposition(logical, syndrome, residual)


# ---------------------------------------------------------------------------
# Enumeration tables
# ---------------------------------------------------------------------------

class _PatternTables:
    """Per-code lookup tables over all 4^n physical error patterns.

    Pattern index = base-4 integer of the symbol string (qubit 1 most
    significant digit, symbol order I<X<Y<Z), so np.argmax's first-hit
    rule realizes lexicographic tie-breaking.  Patterns are grouped by
    syndrome; within a syndrome group every logical class contains
    exactly the 4 stabilizer-group multiples of one representative.
    """

    def __init__(self, code: QsbcCode):
        n, k = code.n, code.k
        total = 4 ** n
        shifts = 2 * np.arange(n - 1, -1, -1, dtype=np.int64)
        patterns = np.arange(total, dtype=np.int64)
        # digits[i, p] = symbol index of qubit i+1 in pattern p
        digits = ((patterns[None, :] >> shifts[:, None]) & 3).astype(np.uint8)

        xbits = pauli.symbol_x_bits(digits)
        zbits = pauli.symbol_z_bits(digits)
        syn = ((xbits.sum(axis=0) % 2) * 2 + (zbits.sum(axis=0) % 2)).astype(np.uint8)

        # logical class of each pattern through the inverse encoder
        bits = np.concatenate([zbits.T, xbits.T], axis=1).astype(np.uint16)
        conj = (bits @ code.inverse_encoder.mat) % 2
        lsym = pauli.symbols_from_bits(conj[:, :k], conj[:, n:n + k])
        cls_weights = 4 ** np.arange(k - 1, -1, -1, dtype=np.int64)
        cls = lsym.astype(np.int64) @ cls_weights

        self.n, self.k = n, k
        self.num_classes = 4 ** k
        # class index -> symbol indices of the logical operator
        self.class_symbols = (
            (np.arange(self.num_classes, dtype=np.int64)[:, None]
             >> (2 * np.arange(k - 1, -1, -1, dtype=np.int64))[None, :]) & 3
        ).astype(np.uint8)

        self.idx = []        # pattern ids per syndrome
        self.digits = []     # (n, P) digit table per syndrome
        self.order = []      # (n, P) reorder sorting patterns by digit value
        self.class_pos = []  # (4^k, 4) positions of each class's patterns
        for s in range(4):
            ids = np.nonzero(syn == s)[0]
            dig = digits[:, ids]
            order = np.empty((n, ids.size), dtype=np.intp)
            for i in range(n):
                order[i] = np.argsort(dig[i], kind="stable")
            csort = np.argsort(cls[ids], kind="stable")
            grouped = cls[ids][csort].reshape(self.num_classes, 4)
            if not (grouped == np.arange(self.num_classes)[:, None]).all():
                raise AssertionError("every logical class must appear 4 times per syndrome")
            self.idx.append(ids)
            self.digits.append(dig)
            self.order.append(order)
            self.class_pos.append(csort.reshape(self.num_classes, 4))


_TABLES: dict[tuple[int, bytes], _PatternTables] = {}


def _tables(code: QsbcCode) -> _PatternTables:
    key = (code.n, code.inverse_encoder.mat.tobytes())
    tab = _TABLES.get(key)
    if tab is None:
        tab = _PatternTables(code)
        _TABLES[key] = tab
    return tab


# ---------------------------------------------------------------------------
# Exact SISO decoding
# ---------------------------------------------------------------------------

def _leave_one_out(gathered: list[np.ndarray]) -> tuple[list[np.ndarray], np.ndarray]:
    """Products of all per-qubit weight rows except one.

    Returns ([W_0..W_{n-1}], T) where W_i omits qubit i's factor and T is
    the full product.  Prefix/suffix products keep the computation exact
    for zero entries (no division).
    """
    n = len(gathered)
    suffix = [None] * (n + 1)
    suffix[n] = np.ones_like(gathered[0])
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] * gathered[i]
    out = []
    prefix = np.ones_like(gathered[0])
    for i in range(n):
        out.append(prefix * suffix[i + 1])
        prefix = prefix * gathered[i]
    return out, prefix


def outer_siso_decode(
    code: QsbcCode,
    priors: np.ndarray,
    syndrome: tuple[int, int],
) -> OuterDecodeResult:
    """Exact symbol-by-symbol MAP for one block.

    Enumerates every physical pattern consistent with the observed
    syndrome.  extrinsic[j] is the syndrome-constrained marginal of
    qubit j computed without qubit j's own prior; the posterior pools
    pattern probabilities over degenerate logical classes.
    """
    n = code.n
    priors = np.asarray(priors, dtype=np.float64)
    if priors.shape != (n, 4):
        raise ValueError(f"priors must have shape ({n}, 4)")
    if not np.isfinite(priors).all() or (priors < 0).any():
        raise ValueError("priors must be finite and non-negative")
    sums = priors.sum(axis=1)
    if (sums <= 0).any():
        raise ValueError("each prior row needs positive total mass")
    renorm = bool(np.abs(sums - 1.0).max() > 1e-9)
    if renorm:
        priors = priors / sums[:, None]

    s1, s2 = syndrome
    with np.errstate(invalid="ignore"):
        ext, hard, post = _decode_group(
            code, priors[None, :, :], int(s1) * 2 + int(s2), want_posterior=True
        )
    total = float(post[0].sum())
    if total <= 0.0:
        raise ValueError("zero total mass: no pattern is consistent with the syndrome")
    tab = _tables(code)
    cls = int(hard[0] @ (4 ** np.arange(code.k - 1, -1, -1, dtype=np.int64)))
    return OuterDecodeResult(
        extrinsic=ext[0],
        logical_posterior=post[0] / total,
        hard_decision=PauliOperator.from_indices(tab.class_symbols[cls]),
        priors_renormalized=renorm,
    )


def _decode_group(
    code: QsbcCode,
    priors: np.ndarray,
    syndrome_index: int,
    want_posterior: bool = False,
):
    """Decode a batch of blocks that share one syndrome value.

    priors: (B, n, 4).  Returns (extrinsic (B, n, 4), hard (B, k)[,
    posterior (B, 4^k)]).
    """
    tab = _tables(code)
    n = code.n
    dig = tab.digits[syndrome_index]
    order = tab.order[syndrome_index]
    cpos = tab.class_pos[syndrome_index]
    P = dig.shape[1]
    quarter = P // 4

    B = priors.shape[0]
    ext = np.empty((B, n, 4), dtype=np.float64)
    hard = np.empty((B, code.k), dtype=np.uint8)
    post_out = np.empty((B, tab.num_classes), dtype=np.float64) if want_posterior else None

    for lo in range(0, B, _BLOCK_CHUNK):
        hi = min(lo + _BLOCK_CHUNK, B)
        chunk = priors[lo:hi]
        gathered = [chunk[:, i, :][:, dig[i]] for i in range(n)]
        loo, full = _leave_one_out(gathered)
        for i in range(n):
            # sum the leave-one-out weights per symbol value of qubit i
            sums = loo[i][:, order[i]].reshape(hi - lo, 4, quarter).sum(axis=2)
            totals = sums.sum(axis=1, keepdims=True)
            ext[lo:hi, i, :] = sums / totals
        pooled = full[:, cpos.ravel()].reshape(hi - lo, tab.num_classes, 4).sum(axis=2)
        hard[lo:hi] = tab.class_symbols[np.argmax(pooled, axis=1)]
        if want_posterior:
            post_out[lo:hi] = pooled
    if want_posterior:
        return ext, hard, post_out
    return ext, hard


def outer_siso_batch(
    code: QsbcCode,
    priors: np.ndarray,
    syndrome_indices: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Decode many blocks at once (pipeline fast path).

    priors: (B, n, 4) strictly valid distributions; syndrome_indices:
    (B,) values in 0..3 encoded as 2*s1 + s2.  Returns (extrinsic,
    hard-decision symbol indices).  Results match decoding each block
    alone to floating-point round-off (reduction order over patterns
    depends on the batch shape); for a fixed batch they are fully
    deterministic.
    """
    B = priors.shape[0]
    ext = np.empty((B, code.n, 4), dtype=np.float64)
    hard = np.empty((B, code.k), dtype=np.uint8)
    for s in range(4):
        sel = np.nonzero(syndrome_indices == s)[0]
        if sel.size == 0:
            continue
        e, h = _decode_group(code, priors[sel], s)
        ext[sel] = e
        hard[sel] = h
    return ext, hard


def decompose_blocks(
    code: QsbcCode, symbols: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """True logical symbols and syndrome indices for many blocks.

    symbols: (B, n) physical symbol indices.  Returns (logical (B, k),
    syndrome_index (B,) = 2*s1 + s2).  Vectorized version of
    split_error/syndrome_of for the simulation hot path.
    """
    if symbols.ndim != 2 or symbols.shape[1] != code.n:
        raise ValueError("symbols must have shape (B, n)")
    n, k = code.n, code.k
    zb = pauli.symbol_z_bits(symbols)
    xb = pauli.symbol_x_bits(symbols)
    syn = ((xb.sum(axis=1) % 2) * 2 + (zb.sum(axis=1) % 2)).astype(np.uint8)
    bits = np.concatenate([zb, xb], axis=1).astype(np.uint16)
    conj = (bits @ code.inverse_encoder.mat) % 2
    logical = pauli.symbols_from_bits(conj[:, :k], conj[:, n:n + k])
    return logical, syn
