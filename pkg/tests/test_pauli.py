"""Phaseless Pauli algebra: representations, products, round trips."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qturbo import pauli
from qturbo.pauli import (
    PauliOperator,
    from_string,
    from_symbols,
    multiply,
    symbol_x_bits,
    symbol_z_bits,
    symbols_from_bits,
    symplectic_product,
    to_symbols,
    weight,
)

symbol_arrays = st.lists(st.integers(0, 3), min_size=1, max_size=24).map(
    lambda xs: np.array(xs, dtype=np.uint8)
)


def test_symbol_bit_convention():
    # I -> (0,0), X -> (0,1), Y -> (1,1), Z -> (1,0)
    sym = np.arange(4)
    assert symbol_z_bits(sym).tolist() == [0, 0, 1, 1]
    assert symbol_x_bits(sym).tolist() == [0, 1, 1, 0]


@given(symbol_arrays)
def test_bits_round_trip(sym):
    z, x = symbol_z_bits(sym), symbol_x_bits(sym)
    assert np.array_equal(symbols_from_bits(z, x), sym)


@given(symbol_arrays)
def test_operator_round_trips(sym):
    op = PauliOperator.from_indices(sym)
    assert np.array_equal(op.symbol_indices(), sym)
    assert PauliOperator.from_bits(op.to_bits()) == op
    assert from_string(op.to_string()) == op


def test_string_fixtures():
    op = from_string("ZIXY")
    assert op.n == 4
    assert op.z.tolist() == [1, 0, 0, 1]
    assert op.x.tolist() == [0, 0, 1, 1]
    assert to_symbols(op) == ["Z", "I", "X", "Y"]
    assert from_symbols(["Z", "I", "X", "Y"]) == op


def test_single_and_identity():
    assert PauliOperator.identity(3).to_string() == "III"
    assert PauliOperator.single(4, 2, "X").to_string() == "IXII"
    assert PauliOperator.single(4, 4, 3).to_string() == "IIIZ"
    with pytest.raises(ValueError):
        PauliOperator.single(4, 0, "X")
    with pytest.raises(ValueError):
        PauliOperator.single(4, 5, "X")


def test_validation_errors():
    with pytest.raises(ValueError):
        PauliOperator(2, np.zeros(3, np.uint8), np.zeros(2, np.uint8))
    with pytest.raises(ValueError):
        PauliOperator(0, np.zeros(0, np.uint8), np.zeros(0, np.uint8))
    with pytest.raises(ValueError):
        PauliOperator(1, np.array([2], np.uint8), np.array([0], np.uint8))
    with pytest.raises(ValueError):
        PauliOperator.from_bits(np.array([1, 0, 1], np.uint8))


def test_anticommutation_table():
    # single-qubit pairs: anticommute iff distinct non-identity symbols
    ops = {s: from_string(s) for s in "IXYZ"}
    for a in "IXYZ":
        for b in "IXYZ":
            expect = int(a != b and a != "I" and b != "I")
            assert symplectic_product(ops[a], ops[b]) == expect


@given(symbol_arrays, st.randoms(use_true_random=False))
def test_product_is_componentwise_xor(sym, pyrand):
    other = np.array([pyrand.randrange(4) for _ in sym], dtype=np.uint8)
    a, b = PauliOperator.from_indices(sym), PauliOperator.from_indices(other)
    prod = multiply(a, b)
    assert np.array_equal(prod.z, a.z ^ b.z)
    assert np.array_equal(prod.x, a.x ^ b.x)
    # self-inverse group: a*a = identity
    assert multiply(a, a) == PauliOperator.identity(a.n)


@given(symbol_arrays)
def test_weight_counts_non_identity(sym):
    assert weight(PauliOperator.from_indices(sym)) == int((sym != 0).sum())


@given(symbol_arrays, st.randoms(use_true_random=False))
@settings(max_examples=50)
def test_symplectic_product_bilinear(sym, pyrand):
    b = np.array([pyrand.randrange(4) for _ in sym], dtype=np.uint8)
    c = np.array([pyrand.randrange(4) for _ in sym], dtype=np.uint8)
    A = PauliOperator.from_indices(sym)
    B = PauliOperator.from_indices(b)
    C = PauliOperator.from_indices(c)
    lhs = symplectic_product(A, multiply(B, C))
    rhs = (symplectic_product(A, B) + symplectic_product(A, C)) % 2
    assert lhs == rhs


def test_operators_hashable_and_frozen():
    op = from_string("XY")
    assert hash(op) == hash(from_string("XY"))
    with pytest.raises(Exception):
        op.z[0] = 1  # buffers are read-only


def test_symbol_alphabet_order():
    assert pauli.SYMBOLS == "IXYZ"
    assert (pauli.I, pauli.X, pauli.Y, pauli.Z) == (0, 1, 2, 3)
