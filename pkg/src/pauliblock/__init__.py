"""Pauli-basis block-encoding toolkit.

Pure states live as {I, X}-string coefficients in the upper-right block of
a density matrix; block-diagonal Kraus channels act on them, a Lindbladian
drives imaginary-time flows, and a channel oracle powers a linear-query
search protocol.  Everything is verified against independent dense
brute-force computations at desk scale.
"""

from .channels import (
    KrausPairChannel,
    apply_channel,
    cbe_operator,
    channel_from_dict,
    channel_to_dict,
    compose,
    embed_channel,
    gate_channel,
    gate_target_unitary,
    pauli_channel,
    verify_po,
)
from .compiler import (
    Circuit,
    CompiledProgram,
    compile_circuit,
    parse_circuit,
    predicted_signal_factor,
    run_program,
)
from .encoding import (
    NdmeState,
    block_coefficients,
    decode_state,
    encode_state_optimal,
    gamma_upper_bound,
    hadamard_transform,
    ndme_block,
    pqc_decode,
    s_from_amplitudes,
    sector_matrix,
    validate_ndme,
)
from .errors import (
    ChannelError,
    DimensionError,
    EncodingError,
    IntegratorError,
    ParseError,
    SearchFailure,
)
from .lindblad import (
    JumpSet,
    PauliHamiltonian,
    Trajectory,
    build_jumps,
    coherence_steadiness,
    evolve,
    ite_reference,
    lindblad_rhs,
    parse_hamiltonian,
    validate_jumps,
)
from .measure import (
    MeasurementRecord,
    amplitude_via_pauli,
    expectation_via_swap,
    hle_identity_check,
    pauli_expectation,
    pauli_pair_expectation,
    sample_pauli,
)
from .paulis import (
    PauliString,
    bell_frame,
    embed_operator,
    kraus_block_identity,
    matrixize,
    pauli_decompose,
    pauli_matrix,
    vectorize,
)
from .search import (
    SampleBatch,
    SearchOracle,
    end_to_end_search,
    extract_target,
    gf2_rank,
    gf2_solve,
    oracle_apply,
    rho_out_closed_form,
    run_protocol,
    sample_x_basis,
    scan_all_targets,
)

__version__ = "0.1.0"
