import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qclone.registers import RegisterLayout
from qclone.states import (
    DensityOperator,
    StateValidationError,
    StateVector,
    apply_unitary,
    basis_state,
    dominant_eigenvector,
    embed_operator,
    fidelity_pure,
    haar_random_qubit,
    kron_states,
    partial_trace,
    purity,
    single_qubit,
    trace_distance,
    von_neumann_entropy,
)

from conftest import random_unitary


def bell_vector() -> np.ndarray:
    return np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)


# ---------------------------------------------------------------------------
# construction and validation


def test_basis_state_is_normalized_and_typed():
    state = basis_state(RegisterLayout.generic(3), index=5)
    assert state.num_qubits == 3
    assert state.amplitudes[5] == 1.0
    assert np.count_nonzero(state.amplitudes) == 1


def test_single_qubit_normalizes():
    state = single_qubit(3.0, 4.0j)
    assert np.allclose(np.abs(state.amplitudes), [0.6, 0.8])
    with pytest.raises(StateValidationError):
        single_qubit(0.0, 0.0)


def test_statevector_rejects_bad_norm_and_shape():
    layout = RegisterLayout.generic(1)
    with pytest.raises(StateValidationError):
        StateVector(np.array([1.0, 1.0]), layout)
    with pytest.raises(StateValidationError):
        StateVector(np.array([1.0, 0.0, 0.0]), layout)


def test_statevector_amplitudes_are_read_only():
    state = basis_state(RegisterLayout.generic(1))
    with pytest.raises(ValueError):
        state.amplitudes[0] = 0.0


def test_density_operator_validation():
    layout = RegisterLayout.generic(1)
    with pytest.raises(StateValidationError):
        DensityOperator(np.array([[0.5, 0.5j], [0.5j, 0.5]]), layout)  # not Hermitian
    with pytest.raises(StateValidationError):
        DensityOperator(np.eye(2), layout)  # trace 2
    with pytest.raises(StateValidationError):
        DensityOperator(np.diag([1.5, -0.5]), layout)  # negative eigenvalue


def test_kron_states_puts_first_group_on_low_qubits():
    layout = RegisterLayout.generic(3)
    state = kron_states([[0, 1], bell_vector()], layout)
    # qubit 0 is |1>, qubits 1-2 hold the Bell pair
    expect = np.kron(bell_vector(), [0, 1])
    assert np.allclose(state.amplitudes, expect)


# ---------------------------------------------------------------------------
# unitary application: the dense bit-arithmetic embedding is the oracle


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    num_qubits=st.integers(1, 5),
    data=st.data(),
)
def test_apply_unitary_matches_dense_embedding(seed, num_qubits, data):
    """Contracting a k-qubit gate equals multiplying by its dense embedding."""
    rng = np.random.default_rng(seed)
    k = data.draw(st.integers(1, min(3, num_qubits)))
    targets = data.draw(
        st.lists(
            st.integers(0, num_qubits - 1), min_size=k, max_size=k, unique=True
        )
    )
    u = random_unitary(rng, 2**k)
    raw = rng.normal(size=2**num_qubits) + 1j * rng.normal(size=2**num_qubits)
    raw /= np.linalg.norm(raw)
    layout = RegisterLayout.generic(num_qubits)
    state = StateVector(raw, layout)

    fast = apply_unitary(state, u, targets)
    dense = embed_operator(u, targets, num_qubits) @ raw
    assert np.allclose(fast.amplitudes, dense, atol=1e-12)
    assert np.isclose(np.linalg.norm(fast.amplitudes), 1.0, atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_apply_unitary_on_density_matches_sandwich(seed):
    rng = np.random.default_rng(seed)
    layout = RegisterLayout.generic(2)
    raw = rng.normal(size=4) + 1j * rng.normal(size=4)
    raw /= np.linalg.norm(raw)
    rho = DensityOperator(np.outer(raw, raw.conj()), layout)
    u = random_unitary(rng, 2)
    out = apply_unitary(rho, u, [1])
    big = embed_operator(u, [1], 2)
    assert np.allclose(out.matrix, big @ rho.matrix @ big.conj().T, atol=1e-12)


def test_embed_operator_is_multiplicative(rng):
    u = random_unitary(rng, 2)
    v = random_unitary(rng, 2)
    left = embed_operator(u @ v, [1], 3)
    right = embed_operator(u, [1], 3) @ embed_operator(v, [1], 3)
    assert np.allclose(left, right, atol=1e-12)


def test_target_order_transposes_the_gate(rng):
    """Listing targets in swapped order must swap the gate's wire roles."""
    u = random_unitary(rng, 4)
    swap = np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    )
    a = embed_operator(u, [0, 2], 3)
    b = embed_operator(swap @ u @ swap, [2, 0], 3)
    assert np.allclose(a, b, atol=1e-12)


# ---------------------------------------------------------------------------
# partial trace and entropy


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), data=st.data())
def test_partial_trace_pure_and_density_paths_agree(seed, data):
    rng = np.random.default_rng(seed)
    n = data.draw(st.integers(2, 5))
    keep_size = data.draw(st.integers(1, n - 1))
    keep = data.draw(
        st.lists(st.integers(0, n - 1), min_size=keep_size, max_size=keep_size, unique=True)
    )
    raw = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    raw /= np.linalg.norm(raw)
    layout = RegisterLayout.generic(n)
    state = StateVector(raw, layout)
    rho_full = DensityOperator(np.outer(raw, raw.conj()), layout)

    from_pure = partial_trace(state, keep)
    from_density = partial_trace(rho_full, keep)
    assert np.allclose(from_pure.matrix, from_density.matrix, atol=1e-12)
    assert np.isclose(np.trace(from_pure.matrix).real, 1.0, atol=1e-12)


def test_partial_trace_two_steps_equals_one(rng):
    raw = rng.normal(size=16) + 1j * rng.normal(size=16)
    raw /= np.linalg.norm(raw)
    state = StateVector(raw, RegisterLayout.generic(4))
    direct = partial_trace(state, [1])
    staged = partial_trace(partial_trace(state, [1, 3]), [0])
    assert np.allclose(direct.matrix, staged.matrix, atol=1e-12)


def test_partial_trace_of_product_state_is_clean():
    psi = single_qubit(0.6, 0.8)
    state = kron_states(
        [psi.amplitudes, bell_vector()], RegisterLayout.generic(3)
    )
    solo = partial_trace(state, [0])
    assert np.allclose(
        solo.matrix, np.outer(psi.amplitudes, psi.amplitudes.conj()), atol=1e-12
    )
    pair_half = partial_trace(state, [1])
    assert np.allclose(pair_half.matrix, np.eye(2) / 2, atol=1e-12)


def test_entropy_values():
    layout = RegisterLayout.generic(1)
    pure = DensityOperator(np.diag([1.0, 0.0]), layout)
    mixed = DensityOperator(np.eye(2) / 2, layout)
    assert von_neumann_entropy(pure) == pytest.approx(0.0, abs=1e-12)
    assert von_neumann_entropy(mixed) == pytest.approx(1.0, abs=1e-12)
    skew = DensityOperator(np.diag([0.25, 0.75]), layout)
    expect = -0.25 * np.log2(0.25) - 0.75 * np.log2(0.75)
    assert von_neumann_entropy(skew) == pytest.approx(expect, abs=1e-12)


def test_entropy_is_additive_over_products(rng):
    p = rng.dirichlet([1, 1])
    q = rng.dirichlet([1, 1, 1, 1])
    a = DensityOperator(np.diag(p), RegisterLayout.generic(1))
    b = DensityOperator(np.diag(q), RegisterLayout.generic(2))
    joint = DensityOperator(np.kron(np.diag(q), np.diag(p)), RegisterLayout.generic(3))
    assert von_neumann_entropy(joint) == pytest.approx(
        von_neumann_entropy(a) + von_neumann_entropy(b), abs=1e-10
    )


# ---------------------------------------------------------------------------
# metrics


def test_fidelity_and_trace_distance_extremes():
    layout = RegisterLayout.generic(1)
    zero = basis_state(layout)
    one = basis_state(layout, index=1)
    rho_zero = partial_trace(kron_states([zero.amplitudes, [1, 0]], RegisterLayout.generic(2)), [0])
    assert fidelity_pure(zero, zero) == pytest.approx(1.0)
    assert fidelity_pure(rho_zero, one) == pytest.approx(0.0, abs=1e-12)
    rho_one = DensityOperator(np.diag([0.0, 1.0]), layout)
    assert trace_distance(rho_zero, rho_one) == pytest.approx(1.0)
    assert trace_distance(rho_zero, rho_zero) == pytest.approx(0.0, abs=1e-12)


def test_purity_and_dominant_eigenvector(rng):
    psi = haar_random_qubit(rng)
    rho = DensityOperator(
        np.outer(psi.amplitudes, psi.amplitudes.conj()), RegisterLayout.generic(1)
    )
    assert purity(rho) == pytest.approx(1.0)
    value, vec = dominant_eigenvector(rho)
    assert value == pytest.approx(1.0)
    assert abs(np.vdot(psi.amplitudes, vec.amplitudes)) == pytest.approx(1.0)
    mixed = DensityOperator(np.eye(2) / 2, RegisterLayout.generic(1))
    assert purity(mixed) == pytest.approx(0.5)


def test_haar_random_states_are_deterministic_per_seed():
    a = haar_random_qubit(np.random.default_rng(11))
    b = haar_random_qubit(np.random.default_rng(11))
    assert np.array_equal(a.amplitudes, b.amplitudes)
