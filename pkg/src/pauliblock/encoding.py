"""Encode amplitude vectors into the upper-right block of a density matrix.

An n-qubit amplitude vector c lives in the carrier matrix
S = 2^(-n/2) sum_alpha c_alpha Q_alpha, where Q_alpha runs over the {I, X}
strings indexed by n-bit strings alpha.  A (1+n)-qubit density matrix rho
with upper-right block gamma * S carries the same information at scale
gamma; the first qubit selects the block and is called the assistant qubit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionError, EncodingError
from .paulis import is_power_of_two, num_qubits

NORM_SLACK = 1e-9


def check_amplitudes(c) -> np.ndarray:
    """Validate and renormalize an amplitude vector (drift above 1e-9 is an error)."""
    c = np.asarray(c, dtype=complex).reshape(-1)
    num_qubits(c.size)
    norm = np.linalg.norm(c)
    if abs(norm - 1.0) > NORM_SLACK:
        raise EncodingError(f"amplitude vector norm {norm} is not 1")
    return c / norm


@lru_cache(maxsize=None)
def _xor_grid(n: int) -> np.ndarray:
    """Index grid g[j, k] = j XOR k over 2^n basis labels."""
    idx = np.arange(2**n)
    return idx[:, None] ^ idx[None, :]


def hadamard_transform(arr: np.ndarray, axis: int = 0) -> np.ndarray:
    """Apply the normalized n-fold Hadamard transform along one axis."""
    out = np.array(arr, dtype=complex)
    out = np.moveaxis(out, axis, 0)
    size = out.shape[0]
    if not is_power_of_two(size):
        raise DimensionError(f"axis length {size} is not a power of two")
    h = 1
    while h < size:
        for start in range(0, size, 2 * h):
            a = out[start : start + h].copy()
            b = out[start + h : start + 2 * h]
            out[start : start + h] = a + b
            out[start + h : start + 2 * h] = a - b
        h *= 2
    out /= np.sqrt(size)
    return np.moveaxis(out, 0, axis)


def sector_matrix(coeffs: np.ndarray) -> np.ndarray:
    """Matrix 2^(-n/2) sum_alpha coeffs_alpha Q_alpha (no norm requirement)."""
    coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
    n = num_qubits(coeffs.size)
    return coeffs[_xor_grid(n)] * 2.0 ** (-n / 2)


def s_from_amplitudes(c) -> np.ndarray:
    """Carrier matrix S of a unit-norm amplitude vector."""
    return sector_matrix(check_amplitudes(c))


def block_coefficients(B: np.ndarray) -> np.ndarray:
    """Raw {I, X}-sector coefficients 2^(-n/2) Tr(Q_alpha B) of a block matrix."""
    B = np.asarray(B, dtype=complex)
    n = num_qubits(B.shape[0])
    idx = np.arange(2**n)
    # Tr(Q_alpha B) = sum_j B[j, j ^ alpha]
    traces = B[idx[None, :], idx[None, :] ^ idx[:, None]].sum(axis=1)
    return traces * 2.0 ** (-n / 2)


def pqc_decode(S: np.ndarray, atol: float = 1e-12) -> np.ndarray:
    """Amplitudes of a carrier matrix; rejects support outside the {I, X} sector."""
    S = np.asarray(S, dtype=complex)
    n = num_qubits(S.shape[0])
    c = block_coefficients(S)
    rebuilt = c[_xor_grid(n)] * 2.0 ** (-n / 2)
    resid = np.abs(S - rebuilt).max()
    if resid > atol:
        raise EncodingError(
            f"matrix has weight {resid:.3e} outside the I/X Pauli sector"
        )
    return c


def ndme_block(rho: np.ndarray) -> np.ndarray:
    """Upper-right 2^n x 2^n block of a (1+n)-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"expected a square matrix, got {rho.shape}")
    if num_qubits(rho.shape[0]) < 1:
        raise DimensionError("need at least one assistant and one encoding qubit")
    d = rho.shape[0] // 2
    return rho[:d, d:].copy()


@dataclass(frozen=True)
class NdmeState:
    """A (1+n)-qubit density matrix whose upper-right block equals gamma * S."""

    n: int
    rho: np.ndarray
    gamma: float

    def block(self) -> np.ndarray:
        return ndme_block(self.rho)


def gamma_upper_bound(c) -> float:
    """Largest encoding factor achievable for the given amplitudes."""
    c = check_amplitudes(c)
    chi = hadamard_transform(c)
    return 1.0 / (2.0 * np.abs(chi).sum())


def encode_state_optimal(c) -> NdmeState:
    """Encode amplitudes at the largest achievable gamma.

    Builds the mixture rho = sum_beta q_beta |phi_beta><phi_beta| with
    q_beta proportional to |chi_beta|, chi the Hadamard transform of c, and
    phi_beta = (|0> + e^{-i arg chi_beta} |1>)/sqrt(2) (x) H^n |beta>.
    """
    c = check_amplitudes(c)
    n = num_qubits(c.size)
    dim = c.size
    chi = hadamard_transform(c)
    mag = np.abs(chi)
    total = mag.sum()
    if total <= 0.0:  # impossible for unit norm, guards divide-by-zero
        raise EncodingError("all Hadamard-transform coefficients vanish")
    gamma = 1.0 / (2.0 * total)
    q = mag / total
    keep = mag > 1e-15 * total
    phase = np.ones(dim, dtype=complex)
    phase[keep] = np.exp(-1j * np.angle(chi[keep]))
    # Columns of the Hadamard matrix are the states H^n |beta>.
    h_cols = hadamard_transform(np.eye(dim), axis=0)
    amp = np.sqrt(q / 2.0)
    top = h_cols * amp[None, :]
    bottom = h_cols * (amp * phase)[None, :]
    psi = np.vstack([top, bottom])  # column beta is sqrt(q_beta) phi_beta
    rho = psi @ psi.conj().T
    return NdmeState(n=n, rho=rho, gamma=gamma)


def decode_state(state: NdmeState, atol: float = 1e-12) -> np.ndarray:
    """Amplitudes carried by an NdmeState (block / gamma, sector-checked)."""
    if state.gamma <= 0.0:
        raise EncodingError("encoding factor must be positive")
    return pqc_decode(state.block() / state.gamma, atol=atol)


def validate_ndme(state: NdmeState) -> dict:
    """Residuals of all NdmeState invariants, for assertion by callers."""
    rho = state.rho
    herm = np.abs(rho - rho.conj().T).max()
    trace = abs(np.trace(rho) - 1.0)
    min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min())
    block = state.block()
    b = block_coefficients(block)
    n = state.n
    rebuilt = b[_xor_grid(n)] * 2.0 ** (-n / 2)
    sector = np.abs(block - rebuilt).max()
    gamma_resid = abs(np.linalg.norm(b) - state.gamma)
    norm_b = np.linalg.norm(b)
    if norm_b > 0:
        bound_slack = state.gamma - gamma_upper_bound(b / norm_b)
    else:
        bound_slack = 0.0
    return {
        "hermiticity": herm,
        "trace": trace,
        "min_eig": min_eig,
        "sector_residual": sector,
        "gamma_residual": gamma_resid,
        "gamma_bound_slack": bound_slack,
    }
