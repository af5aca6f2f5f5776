"""Dense complex linear algebra and signed Pauli-string bookkeeping.

Conventions used throughout the package:

* Qubit 0 is the leftmost (most significant) tensor factor.
* Vectorization is row-major: a matrix O = sum_ij o_ij |i><j| maps to the
  vector sum_ij o_ij |i>|j|, i.e. ``O.reshape(-1)``.
* In the vectorized 2n-qubit space the n row-space qubits sit in front and
  the n column-space qubits behind; the Bell frame pairs qubit j with
  qubit n + j.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product

import numpy as np

from .errors import DimensionError

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

LETTER_MATRICES = {"I": I2, "X": X, "Y": Y, "Z": Z}
PHASES = (1 + 0j, -1 + 0j, 1j, -1j)

# Product table for single letters: (a, b) -> (phase, letter) with a*b = phase*letter.
_LETTER_PRODUCT = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


def is_power_of_two(k: int) -> bool:
    return k > 0 and (k & (k - 1)) == 0


def num_qubits(dim: int) -> int:
    """Number of qubits for a Hilbert-space dimension, or DimensionError."""
    if not is_power_of_two(dim):
        raise DimensionError(f"dimension {dim} is not a power of two")
    return dim.bit_length() - 1


def kron_all(mats) -> np.ndarray:
    return reduce(np.kron, mats)


@dataclass(frozen=True)
class PauliString:
    """A signed tensor product over {I, X, Y, Z} with phase in {+1, -1, +i, -i}."""

    phase: complex
    letters: str

    def __post_init__(self):
        if self.phase not in PHASES:
            raise ValueError(f"phase must be one of +1, -1, +i, -i, got {self.phase}")
        object.__setattr__(self, "phase", complex(self.phase))
        if not self.letters or any(ch not in "IXYZ" for ch in self.letters):
            raise ValueError(f"letters must be a nonempty string over IXYZ, got {self.letters!r}")

    @property
    def n(self) -> int:
        return len(self.letters)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse labels like "XZ", "-YI", "+iZZ", "-iX"."""
        s = label.strip()
        phase = 1 + 0j
        if s.startswith("+"):
            s = s[1:]
        elif s.startswith("-"):
            phase = -1 + 0j
            s = s[1:]
        if s.startswith("i"):
            phase *= 1j
            s = s[1:]
        return cls(phase, s)

    @classmethod
    def from_bits(cls, bits, one: str = "X") -> "PauliString":
        """The string with `one` where a bit is 1 and I where it is 0."""
        letters = "".join(one if int(b) else "I" for b in bits)
        return cls(1, letters)

    @property
    def label(self) -> str:
        prefix = {1 + 0j: "+", -1 + 0j: "-", 1j: "+i", -1j: "-i"}[self.phase]
        return prefix + self.letters

    def matrix(self) -> np.ndarray:
        return self.phase * kron_all([LETTER_MATRICES[ch] for ch in self.letters])

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise DimensionError("cannot multiply Pauli strings of different lengths")
        phase = self.phase * other.phase
        letters = []
        for a, b in zip(self.letters, other.letters):
            p, c = _LETTER_PRODUCT[(a, b)]
            phase *= p
            letters.append(c)
        return PauliString(phase, "".join(letters))

    def __neg__(self) -> "PauliString":
        return PauliString(-self.phase, self.letters)

    def is_hermitian(self) -> bool:
        return self.phase.imag == 0.0


def pauli_matrix(p) -> np.ndarray:
    """Dense matrix of a PauliString (or of a label string)."""
    if isinstance(p, str):
        p = PauliString.from_label(p)
    return p.matrix()


def vectorize(O: np.ndarray) -> np.ndarray:
    """Row-major vectorization sum_ij o_ij |i>|j>."""
    O = np.asarray(O, dtype=complex)
    if O.ndim != 2 or O.shape[0] != O.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {O.shape}")
    num_qubits(O.shape[0])
    return O.reshape(-1).copy()


def matrixize(v: np.ndarray) -> np.ndarray:
    """Inverse of vectorize; the length must be a power of four."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    d = int(round(np.sqrt(v.size)))
    if d * d != v.size or not is_power_of_two(d):
        raise DimensionError(f"length {v.size} is not a power of four")
    return v.reshape(d, d).copy()


def kraus_block_identity(K: np.ndarray, L: np.ndarray, O: np.ndarray):
    """Return (K O L^dag, (K (x) conj(L)) vec(O)); both sides agree under vectorize."""
    K = np.asarray(K, dtype=complex)
    L = np.asarray(L, dtype=complex)
    O = np.asarray(O, dtype=complex)
    if K.shape[1] != O.shape[0] or L.shape[1] != O.shape[1]:
        raise DimensionError(
            f"incompatible shapes K{K.shape}, L{L.shape}, O{O.shape}"
        )
    block = K @ O @ L.conj().T
    vec = np.kron(K, L.conj()) @ vectorize(O)
    return block, vec


def pauli_decompose(O: np.ndarray, drop_tol: float = 1e-14) -> dict:
    """Coefficients of O over unsigned Pauli strings, keyed by letter label.

    Uses coeff(P) = 2^-n Tr(P O); entries below drop_tol are omitted.
    """
    O = np.asarray(O, dtype=complex)
    n = num_qubits(O.shape[0])
    if n > 8:
        raise DimensionError("pauli_decompose supports at most 8 qubits")
    coeffs = {}
    scale = 1.0 / O.shape[0]
    for letters in product("IXYZ", repeat=n):
        P = kron_all([LETTER_MATRICES[ch] for ch in letters])
        c = scale * np.trace(P @ O)
        if abs(c) > drop_tol:
            coeffs["".join(letters)] = c
    return coeffs


def embed_operator(op: np.ndarray, qubits, n: int) -> np.ndarray:
    """Embed a 2^m-dimensional operator onto the given qubit indices of n qubits."""
    op = np.asarray(op, dtype=complex)
    qubits = list(qubits)
    m = num_qubits(op.shape[0])
    if len(qubits) != m or len(set(qubits)) != m:
        raise DimensionError(f"need {m} distinct qubit indices, got {qubits}")
    if any(q < 0 or q >= n for q in qubits):
        raise DimensionError(f"qubit indices {qubits} out of range for n={n}")
    rest = [q for q in range(n) if q not in qubits]
    full = np.kron(op, np.eye(2 ** (n - m), dtype=complex))
    order = qubits + rest  # order[slot] = natural qubit label of tensor slot
    axes = [order.index(j) for j in range(n)]
    t = full.reshape([2] * (2 * n))
    t = t.transpose(axes + [n + a for a in axes])
    return np.ascontiguousarray(t.reshape(2**n, 2**n))


def bell_matrix() -> np.ndarray:
    """The two-qubit Bell circuit (H (x) I) CNOT."""
    return np.kron(HADAMARD, I2) @ CNOT


def bell_frame(n: int) -> np.ndarray:
    """Tensor power of the Bell circuit on the vectorized 2n-qubit space.

    Pair j couples row-space qubit j with column-space qubit n + j.
    """
    if n > 6:
        raise DimensionError("bell_frame supports at most 6 logical qubits")
    ub = bell_matrix()
    out = np.eye(4**n, dtype=complex)
    for j in range(n):
        out = embed_operator(ub, [j, n + j], 2 * n) @ out
    return out
