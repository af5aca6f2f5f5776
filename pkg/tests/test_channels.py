import json

import numpy as np
import pytest

from pauliblock.channels import (
    KrausPairChannel,
    apply_channel,
    cbe_operator,
    channel_from_dict,
    channel_to_dict,
    check_cptp,
    compose,
    embed_channel,
    gate_channel,
    gate_target_unitary,
    pauli_channel,
    po_target,
    verify_po,
)
from pauliblock.encoding import decode_state, encode_state_optimal
from pauliblock.errors import ChannelError, DimensionError
from pauliblock.oracle import random_statevector
from pauliblock.paulis import HADAMARD, I2, PauliString, X, Y, Z, bell_frame, embed_operator

LIBRARY = [
    ("X", "projector"),
    ("Y", "projector"),
    ("Z", "projector"),
    ("H", "projector"),
    ("HSH", "projector"),
    ("HTH", "projector"),
    ("HH_CNOT_HH", "projector"),
    ("X", "identity"),
    ("Y", "identity"),
    ("Z", "identity"),
]


@pytest.mark.parametrize("gate,variant", LIBRARY)
def test_library_channel_is_cptp_and_verifies(gate, variant):
    ch = gate_channel(gate, variant)
    assert check_cptp(ch) < 1e-12
    residual = verify_po(ch, gate_target_unitary(gate), variant, ch.eta)
    assert residual < 1e-12


def test_declared_etas():
    assert gate_channel("H").eta == pytest.approx(2**-0.5, abs=1e-15)
    for gate in ("HSH", "HTH", "HH_CNOT_HH", "X", "Y", "Z"):
        assert gate_channel(gate).eta == 1.0


def test_cbe_operator_fixtures():
    single = KrausPairChannel(n=1, pairs=[(I2.copy(), I2.copy())], eta=1.0)
    assert np.array_equal(cbe_operator(single), np.eye(4))
    h = cbe_operator(gate_channel("H"))
    want = (np.kron(I2, X) + np.kron(Z, Z) + np.kron(X, I2) - np.kron(Y, Y)) / 4
    assert np.abs(h - want).max() < 1e-15
    xproj = cbe_operator(gate_channel("X"))
    assert np.abs(xproj - (np.kron(I2, X) + np.kron(X, I2)) / 2).max() < 1e-15


def test_wrong_eta_detected():
    ch = gate_channel("H")
    residual = verify_po(ch, gate_target_unitary("H"), "projector", 1.0)
    assert residual > 1e-3


def test_pauli_channel_fixtures():
    ch = pauli_channel(PauliString(1, "X"), "identity")
    assert len(ch.pairs) == 1
    K, L = ch.pairs[0]
    assert np.array_equal(K, I2) and np.array_equal(L, X)

    ch = pauli_channel(PauliString(1, "Z"), "projector")
    assert len(ch.pairs) == 2
    assert verify_po(ch, Z, "projector", 1.0) < 1e-12

    p = PauliString.from_label("-ZZ")
    ch = pauli_channel(p, "identity")
    assert len(ch.pairs) == 1
    K, L = ch.pairs[0]
    assert np.array_equal(K, np.kron(Z, Z)) and np.array_equal(L, -np.kron(Z, Z))
    assert verify_po(ch, p.matrix(), "identity", 1.0) < 1e-12


def test_pauli_channel_random_signed_strings():
    rng = np.random.default_rng(0)
    for _ in range(10):
        n = int(rng.integers(1, 3))
        letters = "".join(rng.choice(list("IXYZ"), n))
        p = PauliString(1 if rng.random() < 0.5 else -1, letters)
        for variant in ("identity", "projector"):
            ch = pauli_channel(p, variant)
            assert check_cptp(ch) < 1e-12
            assert verify_po(ch, p.matrix(), variant, 1.0) < 1e-12


def test_pauli_channel_rejects_imaginary_phase():
    with pytest.raises(ValueError):
        pauli_channel(PauliString(1j, "X"))


def test_apply_identity_channel_is_noop():
    st = encode_state_optimal(random_statevector(2, np.random.default_rng(1)))
    ch = KrausPairChannel(n=2, pairs=[(np.eye(4, dtype=complex), np.eye(4, dtype=complex))], eta=1.0)
    out = apply_channel(ch, st)
    assert np.abs(out.rho - st.rho).max() < 1e-15
    assert out.gamma == pytest.approx(st.gamma, abs=1e-12)


def test_hadamard_channel_on_plus():
    st = encode_state_optimal(np.array([1, 1]) / np.sqrt(2))
    out = apply_channel(gate_channel("H"), st)
    assert np.abs(decode_state(out) - np.array([1, 0])).max() < 1e-12
    assert out.gamma == pytest.approx(0.5 / np.sqrt(2), abs=1e-12)


def test_x_channel_flips_basis_state():
    st = encode_state_optimal([1, 0])
    out = apply_channel(pauli_channel(PauliString(1, "X"), "identity"), st)
    assert np.abs(np.abs(decode_state(out)) - np.array([0, 1])).max() < 1e-12


def test_apply_channel_rejects_non_cptp():
    bad = KrausPairChannel(n=1, pairs=[(I2 * 0.5, I2 * 0.5)], eta=None)
    st = encode_state_optimal([1, 0])
    with pytest.raises(ChannelError):
        apply_channel(bad, st)


def test_apply_channel_dimension_mismatch():
    st = encode_state_optimal([1, 0])
    with pytest.raises(DimensionError):
        apply_channel(gate_channel("HH_CNOT_HH"), st)


def test_compose_identities():
    ident = KrausPairChannel(n=1, pairs=[(I2.copy(), I2.copy())], eta=1.0)
    out = compose(ident, ident)
    assert out.eta == 1.0 and len(out.pairs) == 1

    hh = compose(gate_channel("H"), gate_channel("H"))
    assert verify_po(hh, np.eye(2), "projector", 0.5) < 1e-12

    ss = compose(gate_channel("HSH"), gate_channel("HSH"))
    assert verify_po(ss, X, "projector", 1.0) < 1e-12


def test_cbe_multiplicativity_on_library_pairs():
    rng = np.random.default_rng(2)
    gates = ["X", "Y", "Z", "H", "HSH", "HTH"]
    for _ in range(10):
        a = gate_channel(gates[rng.integers(len(gates))])
        b = gate_channel(gates[rng.integers(len(gates))])
        lhs = cbe_operator(compose(a, b))
        rhs = cbe_operator(b) @ cbe_operator(a)
        assert np.abs(lhs - rhs).max() < 1e-12


def test_positivity_preserved():
    rng = np.random.default_rng(3)
    for gate in ("H", "HTH", "Z"):
        st = encode_state_optimal(random_statevector(1, rng))
        out = apply_channel(gate_channel(gate), st)
        assert np.linalg.eigvalsh(out.rho).min() > -1e-10
        assert abs(np.trace(out.rho) - 1) < 1e-12


@pytest.mark.parametrize("n,qubit", [(2, 0), (2, 1), (3, 1)])
def test_embedded_gate_keeps_block_identity(n, qubit):
    # embedded channel block-encodes V on its qubit with the projector only
    # on that qubit's row slot
    ch = embed_channel(gate_channel("HTH"), [qubit], n)
    assert check_cptp(ch) < 1e-12
    f_local = np.zeros((2, 2), dtype=complex)
    f_local[0, 0] = 1.0
    f_embedded = embed_operator(f_local, [qubit], n)
    v_embedded = embed_operator(gate_target_unitary("HTH"), [qubit], n)
    ub = bell_frame(n)
    target = ub.conj().T @ np.kron(f_embedded, v_embedded) @ ub
    assert np.abs(cbe_operator(ch) - target).max() < 1e-12


def test_embedded_cnot_on_arbitrary_pair():
    ch = embed_channel(gate_channel("HH_CNOT_HH"), [2, 0], 3)
    assert check_cptp(ch) < 1e-12
    f_local = np.zeros((4, 4), dtype=complex)
    f_local[0, 0] = 1.0
    f_embedded = embed_operator(f_local, [2, 0], 3)
    v_embedded = embed_operator(gate_target_unitary("HH_CNOT_HH"), [2, 0], 3)
    ub = bell_frame(3)
    target = ub.conj().T @ np.kron(f_embedded, v_embedded) @ ub
    assert np.abs(cbe_operator(ch) - target).max() < 1e-12


def test_cbe_operator_size_guard():
    ch = embed_channel(gate_channel("X"), [0], 5)
    with pytest.raises(DimensionError):
        cbe_operator(ch)


def test_po_target_variant_validation():
    with pytest.raises(ValueError):
        po_target(HADAMARD, "diagonal", 1)
    with pytest.raises(ValueError):
        gate_channel("HTH", "identity")


def test_wire_format_roundtrip():
    for gate in ("H", "HTH", "HH_CNOT_HH"):
        ch = gate_channel(gate)
        data = json.loads(json.dumps(channel_to_dict(ch)))
        back = channel_from_dict(data)
        assert back.n == ch.n and back.eta == pytest.approx(ch.eta)
        for (k1, l1), (k2, l2) in zip(ch.pairs, back.pairs):
            assert np.abs(k1 - k2).max() == 0.0
            assert np.abs(l1 - l2).max() == 0.0


def test_wire_format_shape():
    data = channel_to_dict(gate_channel("X"))
    assert set(data) == {"n", "eta", "pairs"}
    assert all(set(p) == {"k", "l"} for p in data["pairs"])
    # row-major [re, im] entries
    assert data["pairs"][0]["k"] == [[0.7071067811865475, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071067811865475, 0.0]]
