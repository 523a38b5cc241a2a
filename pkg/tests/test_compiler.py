"""Compiled encoder/decoder circuits against their dense references."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_unitary
from qclone.circuits import (
    GateCircuit,
    circuit_to_unitary,
    equivalence_up_to_global_phase,
)
from qclone.compiler import (
    CCU_EQUIV_ATOL,
    CompileError,
    GateCountReport,
    basis_change_V_tilde,
    _v_tilde_inverse_gates,
    compile_ccu,
    compile_decoding,
    compile_encoding,
    gate_count_report,
    principal_sqrt_2x2,
)
from qclone.protocol import (
    AlphaCoefficients,
    ProtocolConfig,
    Variant,
    bell_pair_vector,
    decoding_unitary,
    encoding_unitary,
    prepare_initial,
)
from qclone.states import (
    StateValidationError,
    embed_operator,
    fidelity_pure,
    haar_random_qubit,
    partial_trace,
)
from qclone.circuits import apply_circuit


# ---------------------------------------------------------------------------
# square roots


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_principal_sqrt_squares_back(seed):
    rng = np.random.default_rng(seed)
    u = random_unitary(rng, 2)
    v = principal_sqrt_2x2(u)
    assert np.allclose(v @ v, u, atol=1e-12)
    assert np.allclose(v @ v.conj().T, np.eye(2), atol=1e-12)


@pytest.mark.parametrize("phase", [0.0, math.pi / 2, math.pi, -math.pi / 2, 2.5])
def test_principal_sqrt_of_scalar_matrices(phase):
    # Scalar multiples of the identity have no Bloch axis; they take the
    # dedicated branch.  -I in particular shows up as a decoder block phase.
    u = np.exp(1j * phase) * np.eye(2)
    v = principal_sqrt_2x2(u)
    assert np.allclose(v @ v, u, atol=1e-12)


def test_principal_sqrt_input_validation():
    with pytest.raises(CompileError):
        principal_sqrt_2x2(np.eye(4))
    with pytest.raises(StateValidationError):
        principal_sqrt_2x2(np.array([[1.0, 0.0], [0.0, 2.0]]))


# ---------------------------------------------------------------------------
# encoder


@pytest.mark.parametrize("variant", [Variant.STANDARD, Variant.ROTATED_X2])
@pytest.mark.parametrize("t", [0.0, math.pi / 8, math.pi / 4])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_encoder_matches_dense_reference(n, t, variant):
    circuit = compile_encoding(n, t, variant)
    assert circuit.num_qubits == n + 1
    result = equivalence_up_to_global_phase(
        circuit_to_unitary(circuit), encoding_unitary(n, t, variant)
    )
    assert result.equivalent
    assert result.max_entry_deviation < 1e-10


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_encoder_gate_counts(n):
    standard = compile_encoding(n, 0.3)
    assert standard.two_qubit_count == 4 * n
    assert standard.one_qubit_count == 2 * n + 4
    rotated = compile_encoding(n, 0.3, Variant.ROTATED_X2)
    # the Y-axis rotation costs an extra S.H basis change on each wire
    assert rotated.two_qubit_count == 4 * n
    assert rotated.one_qubit_count == (2 * n + 4) + 4 * (n + 1)


def test_encoder_with_reference_variant_uses_standard_axes():
    a = circuit_to_unitary(compile_encoding(2, 0.37, Variant.WITH_REFERENCE))
    b = circuit_to_unitary(compile_encoding(2, 0.37, Variant.STANDARD))
    assert np.allclose(a, b, atol=1e-14)


def test_encoder_rejects_bad_n():
    with pytest.raises(CompileError):
        compile_encoding(0, 0.5)


# ---------------------------------------------------------------------------
# doubly-controlled units


def _dense_ccu(pattern, u, c1, c2, target, width):
    """Reference: apply u on target iff (c1, c2) carry the pattern bits."""
    dim = 2**width
    total = np.zeros((dim, dim), dtype=np.complex128)
    for b1 in (0, 1):
        for b2 in (0, 1):
            proj = embed_operator(
                np.diag([1 - b1, b1]), [c1], width
            ) @ embed_operator(np.diag([1 - b2, b2]), [c2], width)
            block = u if (b1, b2) == tuple(pattern) else np.eye(2)
            total += proj @ embed_operator(block, [target], width)
    return total


@pytest.mark.parametrize("pattern", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_ccu_all_patterns(rng, pattern):
    u = random_unitary(rng, 2)
    circuit = compile_ccu(pattern, u, (0, 1), 2)
    dense = circuit_to_unitary(circuit)
    assert np.abs(dense - _dense_ccu(pattern, u, 0, 1, 2, 3)).max() < CCU_EQUIV_ATOL
    assert circuit.two_qubit_count == 5
    assert circuit.one_qubit_count == 2 * sum(1 for b in pattern if b == 0)


def test_ccu_accepts_string_patterns(rng):
    u = random_unitary(rng, 2)
    a = circuit_to_unitary(compile_ccu("10", u, (0, 1), 2))
    b = circuit_to_unitary(compile_ccu((1, 0), u, (0, 1), 2))
    assert np.allclose(a, b, atol=1e-15)


def test_ccu_on_scattered_wires(rng):
    u = random_unitary(rng, 2)
    circuit = compile_ccu("11", u, (3, 0), 2)
    assert circuit.num_qubits == 4
    dense = circuit_to_unitary(circuit)
    assert np.abs(dense - _dense_ccu((1, 1), u, 3, 0, 2, 4)).max() < CCU_EQUIV_ATOL


def test_toffoli_is_exact(rng):
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    dense = circuit_to_unitary(compile_ccu("11", x, (0, 1), 2))
    assert np.abs(dense - _dense_ccu((1, 1), x, 0, 1, 2, 3)).max() < 1e-12


def test_ccu_input_validation(rng):
    u = random_unitary(rng, 2)
    with pytest.raises(CompileError):
        compile_ccu("22", u, (0, 1), 2)
    with pytest.raises(CompileError):
        compile_ccu("111", u, (0, 1), 2)
    with pytest.raises(CompileError):
        compile_ccu("11", u, (0, 1), 1)  # target collides with a control
    with pytest.raises(CompileError):
        compile_ccu("11", random_unitary(rng, 4), (0, 1), 2)


# ---------------------------------------------------------------------------
# Bell unscrambler


def test_v_tilde_maps_bell_states_to_computational_basis():
    v = circuit_to_unitary(basis_change_V_tilde())
    # mu -> little-endian index with the bits of mu swapped, phase exactly +1
    for mu, idx in enumerate((0, 2, 1, 3)):
        image = v @ bell_pair_vector(mu)
        expected = np.zeros(4)
        expected[idx] = 1.0
        assert np.allclose(image, expected, atol=1e-12)


def test_v_tilde_inverse_gates_are_the_exact_adjoint():
    v = circuit_to_unitary(basis_change_V_tilde())
    vinv = circuit_to_unitary(GateCircuit(_v_tilde_inverse_gates(), 2))
    assert np.abs(vinv - v.conj().T).max() < 1e-14


# ---------------------------------------------------------------------------
# decoder


@pytest.mark.parametrize(
    "n,alphas_of",
    [
        (2, AlphaCoefficients.standard),
        (3, AlphaCoefficients.standard),
        (2, AlphaCoefficients.rotated_x2),
        (3, AlphaCoefficients.rotated_x2),  # alpha_3 = -1 takes the scalar sqrt
    ],
)
def test_decoder_matches_dense_reference(n, alphas_of):
    alphas = alphas_of(n)
    circuit = compile_decoding(n, alphas)
    result = equivalence_up_to_global_phase(
        circuit_to_unitary(circuit), decoding_unitary(n, alphas, target=1)
    )
    assert result.equivalent
    assert result.max_entry_deviation < 1e-10
    assert result.global_phase == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_decoder_two_qubit_count_formula(n):
    circuit = compile_decoding(n, AlphaCoefficients.standard(n))
    assert circuit.two_qubit_count == 15 * n + 7
    # bookkeeping around the blocks: two Hadamards and four X flips
    assert circuit.one_qubit_count == 6
    assert circuit.num_qubits == n + 1


def test_decoder_rejects_single_pair():
    with pytest.raises(CompileError):
        compile_decoding(1, AlphaCoefficients.standard(1))


# ---------------------------------------------------------------------------
# accounting


@pytest.mark.parametrize(
    "n,enc,dec,budget",
    [(2, 8, 37, 53), (3, 12, 52, 74), (5, 20, 82, 116)],
)
def test_gate_count_report_values(n, enc, dec, budget):
    report = gate_count_report(n)
    assert report == GateCountReport(
        n=n, enc_2q=enc, dec_2q=dec, total_2q=budget, measured_total=enc + dec
    )
    d = report.to_dict()
    assert d["enc_formula_4n"] == enc
    assert d["dec_formula_15n_plus_7"] == dec
    assert d["within_budget"] is True
    assert d["measured_total"] == 19 * n + 7


def test_gate_count_report_rejects_small_n():
    with pytest.raises(CompileError):
        gate_count_report(1)


# ---------------------------------------------------------------------------
# full compiled cycle


@pytest.mark.parametrize("n,target", [(2, 1), (2, 2), (3, 2)])
def test_compiled_cycle_recovers_the_input(rng, n, target):
    psi = haar_random_qubit(rng)
    cfg = ProtocolConfig(n=n, t=math.pi / 4)
    state = prepare_initial(cfg, psi)
    layout = state.layout

    enc_wires = [layout.data] + [layout.signal(i) for i in range(1, n + 1)]
    state = apply_circuit(state, compile_encoding(n, cfg.t), wire_map=enc_wires)

    # the compiled decoder pairs its carrier with wire 1, so the paired noise
    # qubit goes there and the remaining noise qubits fill the higher wires
    dec_wires = [layout.signal(target), layout.noise(target)] + [
        layout.noise(i) for i in range(1, n + 1) if i != target
    ]
    decoder = compile_decoding(n, AlphaCoefficients.standard(n))
    state = apply_circuit(state, decoder, wire_map=dec_wires)

    recovered = partial_trace(state, [layout.signal(target)])
    assert fidelity_pure(recovered, psi) >= 1.0 - 1e-8
