"""Encrypted cloning of an unknown qubit.

One unitary spreads a qubit's state over ``n`` signal qubits, each of which is
locally maximally mixed; the entangled noise halves of the Bell pairs used in
the encoding act as a consumable key that decrypts exactly one clone.  The
package simulates the protocol exactly on statevectors, audits the
information-theoretic claims, and compiles both unitaries to one- and
two-qubit gates with verified counts.
"""
from .analysis import (
    AnalysisError,
    AuditClaim,
    AuditReport,
    LambdaSpectrum,
    SweepRow,
    coherent_information_formula,
    coherent_information_simulated,
    default_time_grid,
    encryption_audit,
    rows_to_csv,
    sweep_coherent_information,
)
from .circuits import (
    CircuitError,
    CircuitExportError,
    EquivalenceResult,
    Gate,
    GateCircuit,
    GateKind,
    apply_circuit,
    circuit_to_unitary,
    equivalence_up_to_global_phase,
    export_circuit,
    parse_circuit_text,
)
from .compiler import (
    CompileError,
    GateCountReport,
    basis_change_V_tilde,
    compile_ccu,
    compile_decoding,
    compile_encoding,
    gate_count_report,
    principal_sqrt_2x2,
)
from .paulis import PauliError, PauliString
from .protocol import (
    AlphaCoefficients,
    AngleError,
    DecryptionOutcome,
    IteratedCloningPlan,
    KeyMaterialError,
    OddCloneCountError,
    ProtocolConfig,
    ProtocolError,
    Variant,
    append_fresh_pair,
    bell_pair_vector,
    decoding_unitary,
    decrypt,
    decrypt_clone,
    decrypt_from_A,
    decrypt_with_substitution,
    encode,
    encoding_unitary,
    execute_iterated_cloning,
    expansion_coefficients,
    is_accepted_decrypt_angle,
    named_state,
    plan_iterated_cloning,
    prepare_initial,
    reverse_encoding_recovery,
    run_channel,
)
from .registers import (
    RegisterError,
    RegisterLayout,
    RegisterOverflowError,
    max_register_qubits,
    set_max_register_qubits,
)
from .states import (
    DensityOperator,
    StateValidationError,
    StateVector,
    apply_unitary,
    basis_state,
    fidelity_pure,
    haar_random_qubit,
    kron_states,
    partial_trace,
    purity,
    single_qubit,
    trace_distance,
    von_neumann_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaCoefficients",
    "AnalysisError",
    "AngleError",
    "AuditClaim",
    "AuditReport",
    "CircuitError",
    "CircuitExportError",
    "CompileError",
    "DecryptionOutcome",
    "DensityOperator",
    "EquivalenceResult",
    "Gate",
    "GateCircuit",
    "GateCountReport",
    "GateKind",
    "IteratedCloningPlan",
    "KeyMaterialError",
    "LambdaSpectrum",
    "OddCloneCountError",
    "PauliError",
    "PauliString",
    "ProtocolConfig",
    "ProtocolError",
    "RegisterError",
    "RegisterLayout",
    "RegisterOverflowError",
    "StateValidationError",
    "StateVector",
    "SweepRow",
    "Variant",
    "append_fresh_pair",
    "apply_circuit",
    "apply_unitary",
    "basis_change_V_tilde",
    "basis_state",
    "bell_pair_vector",
    "circuit_to_unitary",
    "coherent_information_formula",
    "coherent_information_simulated",
    "compile_ccu",
    "compile_decoding",
    "compile_encoding",
    "decoding_unitary",
    "decrypt",
    "decrypt_clone",
    "decrypt_from_A",
    "decrypt_with_substitution",
    "default_time_grid",
    "encode",
    "encoding_unitary",
    "encryption_audit",
    "equivalence_up_to_global_phase",
    "execute_iterated_cloning",
    "expansion_coefficients",
    "export_circuit",
    "fidelity_pure",
    "gate_count_report",
    "haar_random_qubit",
    "is_accepted_decrypt_angle",
    "kron_states",
    "max_register_qubits",
    "named_state",
    "parse_circuit_text",
    "partial_trace",
    "plan_iterated_cloning",
    "prepare_initial",
    "principal_sqrt_2x2",
    "purity",
    "reverse_encoding_recovery",
    "rows_to_csv",
    "run_channel",
    "set_max_register_qubits",
    "single_qubit",
    "sweep_coherent_information",
    "trace_distance",
    "von_neumann_entropy",
]
