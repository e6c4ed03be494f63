"""Unity-rate convolutional inner code on 3 qubits (2 memory + 1 frame).

The code is a fixed 3-qubit Clifford transform applied once per frame
to (memory ⊗ frame): the same two memory qubits persist across frames
while a fresh frame qubit enters and leaves at each step.  Error
propagation is therefore a Mealy machine over phaseless Paulis: the
2-qubit memory Pauli is the state (16 values), the 1-qubit frame Pauli
is the input (4 values), and one conjugation step yields the next
memory Pauli and the output frame Pauli.  Because the transform is an
invertible linear map on bit vectors, the 64-entry transition map
(state, input) -> (state, output) is a bijection.

Directionality matters.  The encoder circuit applies the transform to
frames 1..N in order, so conjugating a *logical* error forward through
the circuit is the causal machine run of the forward transform from an
identity memory (clean ancillas).  Conjugating a *physical* channel
error backward through the circuit peels the unitaries in the opposite
order: the recursion starts at the last frame with an identity memory
Pauli (the memory qubits are never transmitted, so the channel cannot
touch them after the final frame) and walks toward the first frame.
`propagate_inverse` therefore runs the inverse-transform machine over
the reversed frame sequence and reverses the result; any residual
memory component left at the first frame acts only on the discarded
ancilla preparation and is dropped.  Under these conventions each
direction exactly reproduces conjugation by the fully composed
multi-qubit circuit, and the round trip is the identity for every
qubit layout.

The SISO decoder is a forward-backward pass over the 16-state trellis
of the forward machine, whose transition weight multiplies the channel
prior of the output frame Pauli with the a priori of the input frame
Pauli.  Matching the inverse direction above, the path ensemble leaves
the first-frame memory state free and pins the memory state after the
last frame to the identity.

Qubit layout inside the 3-qubit transform is a convention the seed
alone does not fix.  The default places the memory on qubits 1-2 and
the frame on qubit 3 on both sides; it is the layout under which the
forward machine is non-catastrophic.  `memory_last=True` exposes the
alternative (frame on qubit 1, memory on qubits 2-3) for
falsification experiments.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import pauli
from .reference_data import QURC_SEED
from .symplectic import (
    SymplecticTransform,
    inverse_transform,
    is_symplectic,
    seed_decode,
)

MEMORY_QUBITS = 2
FRAME_QUBITS = 1


@dataclass(frozen=True)
class QurcTrellis:
    """Transition tables of the 16-state, 4-input error machine.

    next_state[s, a] and out_symbol[s, a] give the successor state and
    output symbol for state s and input symbol a.  pre_flat[s'] lists
    the four flattened (s*4 + a) pairs that lead into s' (the map is a
    bijection, so every state has exactly four inbound transitions).
    """

    next_state: np.ndarray
    out_symbol: np.ndarray
    pre_flat: np.ndarray


@dataclass(frozen=True)
class QurcSpec:
    transform: SymplecticTransform
    inverse: SymplecticTransform
    memory_last: bool
    trellis: QurcTrellis            # forward direction (encoder)
    inverse_trellis: QurcTrellis    # inverse direction (receiver side)


def build_trellis(transform: SymplecticTransform, memory_last: bool = False) -> QurcTrellis:
    """Tabulate one conjugation step as a state machine."""
    if transform.n != MEMORY_QUBITS + FRAME_QUBITS:
        raise ValueError("trellis construction expects a 3-qubit transform")
    if memory_last:
        frame_pos, mem_pos = 0, (1, 2)
    else:
        frame_pos, mem_pos = 2, (0, 1)

    next_state = np.empty((16, 4), dtype=np.uint8)
    out_symbol = np.empty((16, 4), dtype=np.uint8)
    for m1 in range(4):
        for m2 in range(4):
            state = 4 * m1 + m2
            for a in range(4):
                syms = [0, 0, 0]
                syms[frame_pos] = a
                syms[mem_pos[0]] = m1
                syms[mem_pos[1]] = m2
                sym_arr = np.array(syms, dtype=np.uint8)
                u = np.concatenate(
                    [pauli.symbol_z_bits(sym_arr), pauli.symbol_x_bits(sym_arr)]
                ).astype(np.uint16)
                v = (u @ transform.mat) % 2
                img = pauli.symbols_from_bits(v[:3], v[3:])
                next_state[state, a] = 4 * img[mem_pos[0]] + img[mem_pos[1]]
                out_symbol[state, a] = img[frame_pos]

    flat_next = next_state.reshape(-1)
    pre_flat = np.empty((16, 4), dtype=np.intp)
    for s in range(16):
        inbound = np.nonzero(flat_next == s)[0]
        if inbound.size != 4:
            raise AssertionError("transition map must be a bijection on 64 pairs")
        pre_flat[s] = inbound
    return QurcTrellis(next_state, out_symbol, pre_flat)


def build_qurc(memory_last: bool = False, seed: tuple[int, ...] = QURC_SEED) -> QurcSpec:
    """Decode the seed, check it, and tabulate both machine directions."""
    transform = seed_decode(seed, MEMORY_QUBITS + FRAME_QUBITS)
    if not is_symplectic(transform):
        raise ValueError("seed does not decode to a symplectic transform")
    inverse = inverse_transform(transform)
    return QurcSpec(
        transform=transform,
        inverse=inverse,
        memory_last=memory_last,
        trellis=build_trellis(transform, memory_last),
        inverse_trellis=build_trellis(inverse, memory_last),
    )


def _propagate(trellis: QurcTrellis, symbols: np.ndarray) -> np.ndarray:
    symbols = np.asarray(symbols)
    if symbols.ndim != 1:
        raise ValueError("expected a 1-D sequence of symbol indices")
    nxt = trellis.next_state.tolist()
    out = trellis.out_symbol.tolist()
    result = np.empty(symbols.size, dtype=np.uint8)
    state = 0  # memory starts in the identity (clean ancillas)
    for t, a in enumerate(symbols.tolist()):
        result[t] = out[state][a]
        state = nxt[state][a]
    return result


def propagate_forward(spec: QurcSpec, logical_symbols: np.ndarray) -> np.ndarray:
    """Physical frame errors produced by logical frame errors.

    Causal run of the forward machine from an identity memory, frame 1
    to frame N - the order in which the encoder circuit touches the
    memory qubits.
    """
    return _propagate(spec.trellis, logical_symbols)


def propagate_inverse(spec: QurcSpec, physical_symbols: np.ndarray) -> np.ndarray:
    """Logical frame errors equivalent to the given physical errors.

    Undoing the encoder conjugates by the inverse transform in reverse
    frame order: the memory Pauli starts as the identity after the last
    frame (the memory qubits are never exposed to the channel) and is
    carried backward, so the machine consumes the reversed sequence and
    the emitted logical symbols are reversed back.  The memory residue
    reaching the first frame acts on the discarded ancilla preparation
    and carries no logical content.
    """
    physical_symbols = np.asarray(physical_symbols)
    return _propagate(spec.inverse_trellis, physical_symbols[::-1])[::-1].copy()


def inner_siso_decode(
    trellis: QurcTrellis,
    channel_priors: np.ndarray,
    apriori: np.ndarray,
) -> np.ndarray:
    """Forward-backward marginalization over the 16-state trellis.

    channel_priors[t] weights the physical output symbol of step t and
    apriori[t] its logical input symbol.  The path ensemble mirrors the
    inverse propagation direction: the forward pass starts uniform over
    the 16 memory states (the memory residue at the first frame acts on
    discarded ancillas and is unobserved), while the backward pass
    starts as a point mass on the identity memory (the memory qubits
    are never transmitted, so they carry no channel error after the
    final frame).  Both are renormalized each step in the linear
    domain.  extrinsic[t, a] sums alpha*channel*beta over the
    transitions with input a - the input's own a priori factor is
    omitted rather than divided out, which is the zero-safe equivalent.
    Rows are normalized to sum to 1.
    """
    channel_priors = np.asarray(channel_priors, dtype=np.float64)
    apriori = np.asarray(apriori, dtype=np.float64)
    if channel_priors.ndim != 2 or channel_priors.shape[1] != 4:
        raise ValueError("channel_priors must have shape (N, 4)")
    if apriori.shape != channel_priors.shape:
        raise ValueError("apriori must match channel_priors in shape")
    N = channel_priors.shape[0]
    if N < 1:
        raise ValueError("need at least one frame")
    for name, arr in (("channel_priors", channel_priors), ("apriori", apriori)):
        if not np.isfinite(arr).all() or (arr < 0).any():
            raise ValueError(f"{name} must be finite and non-negative")

    out, nxt, pre = trellis.out_symbol, trellis.next_state, trellis.pre_flat
    ch_out = channel_priors[:, out]                 # (N, 16, 4)
    gamma = ch_out * apriori[:, None, :]            # (N, 16, 4)

    alpha = np.zeros((N + 1, 16))
    alpha[0] = 1.0 / 16.0
    for t in range(N):
        mass = alpha[t][:, None] * gamma[t]
        forward = mass.reshape(-1)[pre].sum(axis=1)
        total = forward.sum()
        if total <= 0.0:
            raise ValueError(f"zero total path mass in the forward pass at step {t}")
        alpha[t + 1] = forward / total

    beta = np.zeros((N + 1, 16))
    beta[N, 0] = 1.0
    for t in range(N - 1, -1, -1):
        backward = (gamma[t] * beta[t + 1][nxt]).sum(axis=1)
        total = backward.sum()
        if total <= 0.0:
            raise ValueError(f"zero total path mass in the backward pass at step {t}")
        beta[t] = backward / total

    beta_next = np.take(beta[1:], nxt, axis=1)      # (N, 16, 4)
    extrinsic = (alpha[:N][:, :, None] * ch_out * beta_next).sum(axis=1)
    totals = extrinsic.sum(axis=1, keepdims=True)
    if (totals <= 0.0).any():
        raise ValueError("zero extrinsic mass at some step (degenerate priors)")
    return extrinsic / totals


def check_non_catastrophic(trellis: QurcTrellis) -> bool:
    """True iff no identity-output cycle carries a non-identity input.

    Searches the subgraph of transitions whose physical output is the
    identity.  If any directed cycle in that subgraph uses at least one
    transition with a non-identity logical input, an unbounded logical
    error can pass through while remaining invisible on the channel,
    and the function returns False.
    """
    nxt, out = trellis.next_state, trellis.out_symbol
    adj = np.zeros((16, 16), dtype=bool)
    for s in range(16):
        for a in range(4):
            if out[s, a] == pauli.I:
                adj[s, nxt[s, a]] = True
    # reachability via paths of length >= 1 within the subgraph
    reach = adj.copy()
    for _ in range(16):
        reach |= (reach[:, :, None] & adj[None, :, :]).any(axis=1)
    for s in range(16):
        for a in range(1, 4):
            if out[s, a] == pauli.I:
                v = nxt[s, a]
                if v == s or reach[v, s]:
                    return False
    return True
