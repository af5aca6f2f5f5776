"""Planted-target search driven by an attenuation-1/3 oracle channel.

The oracle is the mixture (2/3) C_x + (1/3) C_I: C_I twirls each block over
the {I, X} strings with a sign flip on the cross blocks, and C_x collapses
diagonal blocks to the maximally mixed state while projecting the
off-diagonal blocks onto the single string matching the planted target.
Net effect on the X (x) Q_alpha operators: the target string is kept at
scale 1/3, every other string is negated at scale 1/3.

The protocol mixes one oracle application into a fresh uniform state,
samples the result in the X basis, discards the two outcomes attributable
to the maximally mixed component, and recovers the target from the
remaining outcomes by GF(2) elimination.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import hadamard_transform
from .errors import DimensionError, SearchFailure
from .paulis import is_power_of_two

ORACLE_ETA = 1.0 / 3.0
MAX_SEARCH_QUBITS = 10


def _as_bits(x, n: int) -> np.ndarray:
    if isinstance(x, str):
        x = [int(ch) for ch in x]
    bits = np.array([int(b) for b in x], dtype=np.uint8)
    if bits.size != n or np.any(bits > 1):
        raise ValueError(f"expected {n} bits, got {x!r}")
    return bits


def bits_to_index(bits) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


@dataclass(frozen=True)
class SearchOracle:
    n: int
    target: tuple
    eta: float = ORACLE_ETA

    def __post_init__(self):
        if self.n > MAX_SEARCH_QUBITS:
            raise DimensionError(f"search capped at {MAX_SEARCH_QUBITS} qubits")
        object.__setattr__(self, "target", tuple(_as_bits(self.target, self.n)))

    @property
    def target_index(self) -> int:
        return bits_to_index(self.target)


def _sector_twirl(B: np.ndarray) -> np.ndarray:
    """Average of Q_i B Q_i over all {I, X} strings (XOR-class averaging)."""
    dim = B.shape[0]
    idx = np.arange(dim)
    grid = idx[:, None] ^ idx[None, :]
    class_avg = B[idx[None, :], grid].mean(axis=1)  # one value per XOR class
    return class_avg[grid]


def _apply_channel_i(rho: np.ndarray, d: int) -> np.ndarray:
    out = np.empty_like(rho)
    out[:d, :d] = _sector_twirl(rho[:d, :d])
    out[:d, d:] = -_sector_twirl(rho[:d, d:])
    out[d:, :d] = -_sector_twirl(rho[d:, :d])
    out[d:, d:] = _sector_twirl(rho[d:, d:])
    return out


def _apply_channel_x(rho: np.ndarray, d: int, xi: int) -> np.ndarray:
    idx = np.arange(d)
    perm = idx ^ xi
    qx = np.eye(d, dtype=complex)[perm]
    out = np.zeros_like(rho)
    out[:d, :d] = np.trace(rho[:d, :d]) / d * np.eye(d)
    out[d:, d:] = np.trace(rho[d:, d:]) / d * np.eye(d)
    out[:d, d:] = rho[:d, d:][idx, perm].sum() / d * qx
    out[d:, :d] = rho[d:, :d][perm, idx].sum() / d * qx
    return out


def oracle_apply(oracle: SearchOracle, rho: np.ndarray) -> np.ndarray:
    """Structured fast path for one oracle application, O(4^n) work."""
    rho = np.asarray(rho, dtype=complex)
    d = 2**oracle.n
    if rho.shape != (2 * d, 2 * d):
        raise DimensionError(f"expected shape {(2 * d, 2 * d)}, got {rho.shape}")
    return (2.0 / 3.0) * _apply_channel_x(rho, d, oracle.target_index) + (
        1.0 / 3.0
    ) * _apply_channel_i(rho, d)


def oracle_apply_kraus(oracle: SearchOracle, rho: np.ndarray) -> np.ndarray:
    """Literal Kraus-sum evaluation (test oracle for the fast path), n <= 3."""
    n = oracle.n
    if n > 3:
        raise DimensionError("literal Kraus application capped at 3 qubits")
    rho = np.asarray(rho, dtype=complex)
    d = 2**n
    xi = oracle.target_index
    idx = np.arange(d)
    out_x = np.zeros_like(rho)
    scale = 1.0 / d
    for i in range(d):
        for j in range(d):
            K = np.zeros((d, d), dtype=complex)
            K[i, j] = 1.0
            L = np.zeros((d, d), dtype=complex)
            L[i ^ xi, j ^ xi] = 1.0
            F = np.block(
                [[K, np.zeros((d, d))], [np.zeros((d, d)), L]]
            ) * np.sqrt(scale)
            out_x += F @ rho @ F.conj().T
    out_i = np.zeros_like(rho)
    for i in range(d):
        Q = np.eye(d, dtype=complex)[idx ^ i]
        F = np.block(
            [[Q, np.zeros((d, d))], [np.zeros((d, d)), -Q]]
        ) * np.sqrt(scale)
        out_i += F @ rho @ F.conj().T
    return (2.0 / 3.0) * out_x + (1.0 / 3.0) * out_i


def run_protocol(oracle: SearchOracle) -> np.ndarray:
    """Output density matrix after one controlled oracle query.

    The controlled channel on the block-diagonal input reduces to the
    classical mixture eta/(1+eta) * rho_sys + 1/(1+eta) * C[rho_sys] with
    rho_sys the uniform (n+1)-qubit state.
    """
    n = oracle.n
    dim = 2 ** (n + 1)
    rho_sys = np.full((dim, dim), 1.0 / dim, dtype=complex)
    w = oracle.eta / (1.0 + oracle.eta)
    return w * rho_sys + (1.0 - w) * oracle_apply(oracle, rho_sys)


def rho_out_closed_form(n: int, x) -> np.ndarray:
    """The protocol output assembled directly from its block structure."""
    bits = _as_bits(x, n)
    d = 2**n
    plus = np.full((d, d), 1.0 / d, dtype=complex)
    diag = 0.5 * plus + 2.0 ** -(n + 1) * np.eye(d)
    idx = np.arange(d)
    qx = np.eye(d, dtype=complex)[idx ^ bits_to_index(bits)]
    off = 2.0 ** -(n + 1) * qx
    return 0.5 * np.block([[diag, off], [off, diag]])


def x_basis_probabilities(rho_out: np.ndarray) -> np.ndarray:
    """Outcome distribution of measuring every qubit in the X basis."""
    rho_out = np.asarray(rho_out, dtype=complex)
    if not is_power_of_two(rho_out.shape[0]):
        raise DimensionError("density matrix dimension must be a power of two")
    conj = hadamard_transform(hadamard_transform(rho_out, axis=0), axis=1)
    probs = np.clip(np.diag(conj).real, 0.0, None)
    return probs / probs.sum()


@dataclass(frozen=True)
class SampleBatch:
    """X-basis outcomes as rows of n+1 bits, with the post-selection mask."""

    outcomes: np.ndarray
    seed: object
    accepted_mask: np.ndarray

    @property
    def accepted(self) -> np.ndarray:
        return self.outcomes[self.accepted_mask]


def _indices_to_bits(indices: np.ndarray, width: int) -> np.ndarray:
    shifts = np.arange(width - 1, -1, -1)
    return ((indices[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def sample_x_basis(rho_out: np.ndarray, shots: int, seed) -> SampleBatch:
    """Draw X-basis outcomes; discard the all-plus and minus-all-plus results.

    Those two outcomes carry the entire maximally-mixed component of the
    output, so everything that survives satisfies the target parity
    relation exactly.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    probs = x_basis_probabilities(rho_out)
    width = probs.size.bit_length() - 1
    rng = np.random.default_rng(seed)
    indices = rng.choice(probs.size, size=shots, p=probs)
    outcomes = _indices_to_bits(indices, width)
    rejected = (indices == 0) | (indices == probs.size // 2)
    return SampleBatch(outcomes=outcomes, seed=seed, accepted_mask=~rejected)


def gf2_solve(A: np.ndarray, b: np.ndarray):
    """Solve A r = b over GF(2); None unless the solution is unique."""
    A = np.asarray(A, dtype=np.uint8) % 2
    b = np.asarray(b, dtype=np.uint8) % 2
    rows, cols = A.shape
    aug = np.concatenate([A, b.reshape(-1, 1)], axis=1).astype(np.uint8)
    pivot_cols = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if aug[i, c]:
                pivot = i
                break
        if pivot is None:
            continue
        aug[[r, pivot]] = aug[[pivot, r]]
        for i in range(rows):
            if i != r and aug[i, c]:
                aug[i] ^= aug[r]
        pivot_cols.append(c)
        r += 1
        if r == rows:
            break
    if len(pivot_cols) < cols:
        return None  # underdetermined
    if np.any(aug[r:, cols]):
        return None  # inconsistent
    x = np.zeros(cols, dtype=np.uint8)
    for i, c in enumerate(pivot_cols):
        x[c] = aug[i, cols]
    return x


def gf2_rank(A: np.ndarray) -> int:
    A = np.asarray(A, dtype=np.uint8).copy() % 2
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        pivot = None
        for i in range(rank, rows):
            if A[i, c]:
                pivot = i
                break
        if pivot is None:
            continue
        A[[rank, pivot]] = A[[pivot, rank]]
        for i in range(rows):
            if i != rank and A[i, c]:
                A[i] ^= A[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def extract_target(batch: SampleBatch):
    """Recover the planted string from accepted outcomes, or None on low rank.

    Each accepted outcome beta contributes the parity equation
    beta_0 + sum_l beta_l r_l = 0 (mod 2); a unique solution needs the
    trailing n-bit parts to span the full space.
    """
    rows = batch.accepted
    if rows.shape[0] == 0:
        return None
    A = rows[:, 1:]
    b = rows[:, 0]
    return gf2_solve(A, b)


def scan_all_targets(outcomes: np.ndarray, n: int) -> np.ndarray:
    """Exhaustive readout: score every candidate string on the raw samples.

    The parity statistic of the planted string concentrates at +1/2 while
    every other candidate concentrates at 0, so the argmax identifies the
    target from O(1) samples at the price of 2^n postprocessing.
    Test-scale only (n <= 4).
    """
    if n > 4:
        raise DimensionError("exhaustive scan capped at 4 qubits")
    outcomes = np.asarray(outcomes, dtype=np.uint8)
    candidates = _indices_to_bits(np.arange(2**n), n)
    parity = (outcomes[:, :1] + outcomes[:, 1:] @ candidates.T) % 2
    scores = 1.0 - 2.0 * parity.mean(axis=0)
    return candidates[int(np.argmax(scores))]


class _SampleStream:
    """Sequential sampler that counts every drawn outcome as one query."""

    def __init__(self, probs: np.ndarray, rng: np.random.Generator, chunk: int):
        self.probs = probs
        self.rng = rng
        self.chunk = max(chunk, 8)
        self.buffer = []
        self.drawn = 0

    def next_index(self) -> int:
        if not self.buffer:
            draws = self.rng.choice(self.probs.size, size=self.chunk, p=self.probs)
            self.buffer = list(draws[::-1])
        self.drawn += 1
        return self.buffer.pop()


def end_to_end_search(n: int, x, seed, max_batch_retries: int = 64):
    """Full pipeline: protocol state, sampling, post-selection, GF(2) solve.

    Gathers fresh batches of n accepted outcomes until one has full rank,
    then solves for the target.  Returns (found_bits, stats) where stats
    reports oracle_queries (every drawn sample costs one query),
    acceptance_rate, and independence_batches (batches consumed).
    """
    oracle = SearchOracle(n=n, target=_as_bits(x, n))
    rho_out = run_protocol(oracle)
    probs = x_basis_probabilities(rho_out)
    width = n + 1
    rng = np.random.default_rng(seed)
    stream = _SampleStream(probs, rng, chunk=4 * n)
    dim_half = probs.size // 2

    accepted_total = 0
    for batch_no in range(1, max_batch_retries + 1):
        rows = []
        while len(rows) < n:
            idx = stream.next_index()
            if idx == 0 or idx == dim_half:
                continue
            rows.append(idx)
        accepted_total += n
        beta = _indices_to_bits(np.array(rows), width)
        solution = gf2_solve(beta[:, 1:], beta[:, 0])
        if solution is not None:
            stats = {
                "oracle_queries": stream.drawn,
                "acceptance_rate": accepted_total / stream.drawn,
                "independence_batches": batch_no,
            }
            return solution, stats
    raise SearchFailure(
        f"no full-rank batch found in {max_batch_retries} attempts"
    )
