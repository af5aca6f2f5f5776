"""Readout relations for encoded states.

Amplitudes come out of X/Y-type Pauli traces on the whole density matrix,
operator expectation values out of a swap-type trace between two encoded
states, and both have purification-level counterparts.  All traces are
computed exactly from the density matrix; shot sampling is an optional
emulation layer and never the source of truth for identity tests.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .channels import apply_channel, pauli_channel
from .encoding import NdmeState
from .errors import DimensionError, EncodingError
from .paulis import PauliString, X, Y, embed_operator, num_qubits, pauli_matrix


@dataclass(frozen=True)
class MeasurementRecord:
    """One extracted value: observable label, complex value, shot metadata."""

    observable: str
    value: complex
    shots: object = "exact"  # int or the string "exact"
    seed: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "observable": self.observable,
            "value_re": float(self.value.real),
            "value_im": float(self.value.imag),
            "shots": self.shots,
            "seed": self.seed,
        }


def _bits(alpha, n: int) -> tuple:
    if isinstance(alpha, str):
        alpha = [int(ch) for ch in alpha]
    bits = tuple(int(b) for b in alpha)
    if len(bits) != n or any(b not in (0, 1) for b in bits):
        raise ValueError(f"expected {n} bits, got {alpha!r}")
    return bits


def pauli_expectation(rho: np.ndarray, p: PauliString) -> float:
    """Exact Tr(P rho) for a Hermitian-phase Pauli string."""
    rho = np.asarray(rho, dtype=complex)
    if np.abs(rho - rho.conj().T).max() > 1e-10:
        raise ValueError("density matrix is not Hermitian")
    if num_qubits(rho.shape[0]) != p.n:
        raise DimensionError(f"operator on {p.n} qubits, state on {rho.shape}")
    val = np.trace(pauli_matrix(p) @ rho)
    if abs(val.imag) > 1e-12:
        raise ValueError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def amplitude_via_pauli(state: NdmeState, alpha) -> complex:
    """Amplitude c_alpha recovered from the X and Y assistant-qubit traces.

    With the upper-right block at gamma * S, the exact trace identities are
    Tr((X (x) Q_alpha) rho) = +2^(n/2+1) gamma Re[c_alpha] and
    Tr((Y (x) Q_alpha) rho) = -2^(n/2+1) gamma Im[c_alpha], so the
    imaginary part enters with a minus sign.
    """
    if state.gamma < 1e-14:
        raise EncodingError("encoding factor too small to divide out")
    n = state.n
    bits = _bits(alpha, n)
    q = PauliString.from_bits(bits).matrix()
    tr_x = np.trace(np.kron(X, q) @ state.rho)
    tr_y = np.trace(np.kron(Y, q) @ state.rho)
    if max(abs(tr_x.imag), abs(tr_y.imag)) > 1e-10:
        raise ValueError("Pauli traces of a Hermitian state should be real")
    scale = 2.0 ** (n / 2 + 1) * state.gamma
    return complex(tr_x.real - 1j * tr_y.real) / scale


def _swap_matrix(n: int) -> np.ndarray:
    dim = 2**n
    swap = np.zeros((dim * dim, dim * dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            swap[j * dim + i, i * dim + j] = 1.0
    return swap


def expectation_via_swap(state: NdmeState, state1: NdmeState) -> complex:
    """Trace of the cross-assistant swap observable on state (x) state1.

    When state1 is the image of state under an eta = 1 Pauli channel, the
    returned value divided by gamma^2 is the Pauli expectation value of the
    decoded pure state.
    """
    if state.n != state1.n:
        raise DimensionError("states carry different qubit counts")
    if abs(state.gamma - state1.gamma) > 1e-10 * max(1.0, state.gamma):
        raise EncodingError(
            f"encoding factors disagree: {state.gamma} vs {state1.gamma}"
        )
    n = state.n
    total = 2 * n + 2
    ket01 = np.zeros((2, 2), dtype=complex)
    ket01[0, 1] = 1.0  # |0><1|
    ket10 = ket01.T.copy()  # |1><0|
    assist = embed_operator(np.kron(ket01, ket10), [0, n + 1], total)
    enc_qubits = list(range(1, n + 1)) + list(range(n + 2, 2 * n + 2))
    swap = embed_operator(_swap_matrix(n), enc_qubits, total)
    observable = assist @ swap
    return complex(np.trace(observable @ np.kron(state.rho, state1.rho)))


def pauli_pair_expectation(state: NdmeState, p: PauliString) -> complex:
    """Convenience wrapper: push state through the Pauli channel, take the swap trace."""
    state1 = apply_channel(pauli_channel(p, "identity"), state)
    return expectation_via_swap(state, state1)


def hle_identity_check(state: NdmeState, alpha) -> float:
    """Residual of the purification readout identity.

    Purifies rho by eigendecomposition, evaluates the quadratic form of
    I_env (x) (X (x) Q_alpha + I) on the purified vector, and compares with
    1 + Tr((X (x) Q_alpha) rho).
    """
    rho = state.rho
    n = state.n
    bits = _bits(alpha, n)
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    if w.min() < -1e-8:
        raise ValueError(f"state has negative eigenvalue {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    dim = rho.shape[0]
    # |P> = sum_k sqrt(w_k) |k>_env (x) |v_k>, environment of equal size
    purified = (v * np.sqrt(w)[None, :]).T.reshape(-1)
    observable = np.kron(X, PauliString.from_bits(bits).matrix())
    big = np.kron(np.eye(dim), observable + np.eye(dim))
    lhs = purified.conj() @ big @ purified
    rhs = 1.0 + np.trace(observable @ rho)
    return float(abs(lhs - rhs))


def sample_pauli(rho: np.ndarray, p: PauliString, shots: int, seed: int):
    """Draw +-1 outcomes with P(+1) = (1 + Tr(P rho))/2 under a fixed seed.

    Returns (mean, standard error).  A mean further than five standard
    errors from the exact trace is flagged with a warning, not an error.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    exact = pauli_expectation(rho, p)
    p_plus = min(max((1.0 + exact) / 2.0, 0.0), 1.0)
    rng = np.random.default_rng(seed)
    outcomes = np.where(rng.random(shots) < p_plus, 1.0, -1.0)
    mean = float(outcomes.mean())
    stderr = float(outcomes.std(ddof=1) / np.sqrt(shots)) if shots > 1 else 0.0
    if stderr > 0 and abs(mean - exact) > 5 * stderr:
        warnings.warn(
            f"sample mean {mean:.4f} is {abs(mean - exact) / stderr:.1f} standard"
            f" errors from the exact value {exact:.4f}",
            stacklevel=2,
        )
    return mean, stderr
