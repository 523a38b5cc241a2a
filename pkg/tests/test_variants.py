import math

import numpy as np
import pytest

from qclone.protocol import (
    OddCloneCountError,
    ProtocolConfig,
    ProtocolError,
    Variant,
    append_fresh_pair,
    decrypt,
    decrypt_clone,
    decrypt_from_A,
    decrypt_with_substitution,
    encode,
    execute_iterated_cloning,
    named_state,
    plan_iterated_cloning,
    prepare_initial,
)
from qclone.states import haar_random_qubit, partial_trace, trace_distance


def encoded(config: ProtocolConfig, psi):
    return encode(prepare_initial(config, psi), config)


# ---------------------------------------------------------------------------
# substitution: signal qubits can stand in for lost noise qubits


@pytest.mark.parametrize("n,lost", [(2, (2,)), (3, (2,)), (3, (2, 3))])
def test_substitution_recovers_with_lost_noise(n, lost, rng):
    config = ProtocolConfig(n=n)
    psi = haar_random_qubit(rng)
    outcome = decrypt_with_substitution(
        encoded(config, psi), config, lost_noise=lost, target=1, reference=psi
    )
    assert outcome.fidelity >= 1 - 1e-12


def test_substitution_validates_the_lost_set(rng):
    config = ProtocolConfig(n=2)
    state = encoded(config, haar_random_qubit(rng))
    with pytest.raises(ProtocolError):
        decrypt_with_substitution(state, config, lost_noise=[5], target=1)


# ---------------------------------------------------------------------------
# decrypting the data qubit with the noise register


@pytest.mark.parametrize("n", [2, 4])
def test_data_side_decryption_for_even_clone_counts(n, rng):
    config = ProtocolConfig(n=n)
    psi = haar_random_qubit(rng)
    outcome = decrypt_from_A(encoded(config, psi), config, reference=psi)
    assert outcome.fidelity >= 1 - 1e-12
    assert outcome.target_role == "A"


def test_data_side_decryption_rejects_odd_counts(rng):
    config = ProtocolConfig(n=3)
    state = encoded(config, haar_random_qubit(rng))
    with pytest.raises(OddCloneCountError):
        decrypt_from_A(state, config)


# ---------------------------------------------------------------------------
# reverse: undo the encoder on (A, S) at any angle


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("t", [0.3, math.pi / 4, 2.0])
def test_reverse_encoding_recovery_at_any_angle(n, t, rng):
    from qclone.protocol import reverse_encoding_recovery

    config = ProtocolConfig(n=n, t=t)
    psi = haar_random_qubit(rng)
    outcome = reverse_encoding_recovery(encoded(config, psi), config, reference=psi)
    assert outcome.fidelity >= 1 - 1e-12


# ---------------------------------------------------------------------------
# rotated second axis


@pytest.mark.parametrize("n", [2, 3])
def test_rotated_variant_round_trip(n, rng):
    config = ProtocolConfig(n=n, variant=Variant.ROTATED_X2)
    psi = haar_random_qubit(rng)
    state = encoded(config, psi)
    for target in range(1, n + 1):
        outcome = decrypt(state, config, target=target, reference=psi)
        assert outcome.fidelity >= 1 - 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_rotated_variant_still_encrypts(n):
    config = ProtocolConfig(n=n, variant=Variant.ROTATED_X2)
    for name in ("0", "+", "+i"):
        state = encoded(config, named_state(name))
        layout = state.layout
        for i in range(1, n + 1):
            rho = partial_trace(state, [layout.signal(i)])
            assert np.max(np.abs(rho.matrix - np.eye(2) / 2)) < 1e-10


# ---------------------------------------------------------------------------
# iterated cloning: 3^k clones from a tree of n=2 encodings


@pytest.mark.parametrize("depth", [1, 2])
def test_plan_shape(depth):
    plan = plan_iterated_cloning(depth)
    assert len(plan.clones) == 3**depth
    assert plan.num_qubits == 2 * 3**depth - 1
    for clone in plan.clones:
        assert len(plan.key_qubits(clone)) == 2 * depth


def test_plan_rejects_depth_zero():
    with pytest.raises(ProtocolError):
        plan_iterated_cloning(0)


@pytest.mark.parametrize("depth", [1, 2])
def test_every_clone_decrypts_with_its_ancestry_key(depth, rng):
    psi = haar_random_qubit(rng)
    plan = plan_iterated_cloning(depth)
    state = execute_iterated_cloning(plan, psi)
    for clone in plan.clones:
        outcome = decrypt_clone(plan, state, clone, reference=psi)
        assert outcome.fidelity >= 1 - 1e-9, clone


def test_iterated_clone_marginals_are_mixed(rng):
    plan = plan_iterated_cloning(1)
    state = execute_iterated_cloning(plan, haar_random_qubit(rng))
    for clone in plan.clones:
        rho = partial_trace(state, [clone])
        assert np.max(np.abs(rho.matrix - np.eye(2) / 2)) < 1e-10


def test_fresh_pair_as_key_reveals_nothing():
    """Decoding with key material outside the ancestry is input-independent."""
    plan = plan_iterated_cloning(1)
    outputs = []
    for name in ("0", "1"):
        state = execute_iterated_cloning(plan, named_state(name))
        enlarged, pair = append_fresh_pair(state)
        outcome = decrypt_clone(
            plan, enlarged, plan.clones[0], key_override={1: pair}
        )
        outputs.append(outcome.recovered)
    assert trace_distance(outputs[0], outputs[1]) < 1e-9


def test_foreign_subtree_key_reveals_nothing_at_depth_two():
    """A noise pair from a different branch of the tree is equally useless."""
    plan = plan_iterated_cloning(2)
    target = plan.clones[0]
    # any level-2 step not on the target's ancestry path
    ancestry_steps = {id(step) for step, _ in plan.ancestry(target)}
    foreign = next(
        s for s in plan.steps if s.level == 2 and id(s) not in ancestry_steps
    )
    outputs = []
    for name in ("0", "1"):
        state = execute_iterated_cloning(plan, named_state(name))
        outcome = decrypt_clone(
            plan, state, target, key_override={2: foreign.noises}
        )
        outputs.append(outcome.recovered)
    assert trace_distance(outputs[0], outputs[1]) < 1e-9


def test_clone_of_a_clone_chains_two_decodings(rng):
    """At depth 2 a leaf needs both its own key pair and its parent's."""
    psi = haar_random_qubit(rng)
    plan = plan_iterated_cloning(2)
    state = execute_iterated_cloning(plan, psi)
    clone = plan.clones[-1]
    chain = plan.ancestry(clone)
    assert len(chain) == 2
    levels = [step.level for step, _ in chain]
    assert levels == [2, 1]
    outcome = decrypt_clone(plan, state, clone, reference=psi)
    assert outcome.fidelity >= 1 - 1e-9
