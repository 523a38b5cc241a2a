"""The encrypted-cloning protocol.

One data qubit ``A`` is encoded together with ``n`` Bell pairs ``(S_i, N_i)``
by a single unitary

    U_enc(t) = exp(-i t X_A X_S1 .. X_Sn) . exp(-i t Z_A Z_S1 .. Z_Sn),

which at t = pi/4 turns every signal qubit into an encrypted clone of the
input state while each marginal stays maximally mixed.  Expanding the
exponentials gives  U_enc(t) = sum_mu c_mu(t) sigma_mu^(A) (x) sigma_mu^(S...)
with Pauli-string weights ``c_mu``; decryption applies the
Bell-basis-controlled unitary

    U_dec = sum_mu alpha_mu |phi_mu><phi_mu|_(S1 N1) (x) sigma_mu^T (N2..Nn),

whose phases ``alpha_mu = c_0/c_mu`` undo the encoding weights, consuming the
noise qubits as a one-time key.  A rotated family (Y replacing Z in the
encoder) works identically with adjusted phases, and for even ``n`` the data
qubit itself can be decrypted against the noise register alone.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .paulis import SIGMA, PauliString
from .registers import (
    ROLE_DATA,
    RegisterError,
    RegisterLayout,
    noise_role,
    signal_role,
)
from .states import (
    DensityOperator,
    StateVector,
    apply_unitary,
    dominant_eigenvector,
    embed_operator,
    fidelity_pure,
    kron_states,
    partial_trace,
)

ANGLE_ATOL = 1e-9


class ProtocolError(ValueError):
    """Configuration or state incompatible with the requested operation."""


class AngleError(ProtocolError):
    """Decryption attempted at an interaction time the decoder cannot undo."""


class KeyMaterialError(ProtocolError):
    """Requested decryption lacks the key half it cannot do without."""


class OddCloneCountError(ProtocolError):
    """Data-side decryption is only defined for an even number of clones."""


class Variant(Enum):
    STANDARD = "standard"
    ROTATED_X2 = "rotated_x2"
    WITH_REFERENCE = "with_reference"


@dataclass(frozen=True)
class ProtocolConfig:
    """Number of clones, interaction time, encoder family, default target."""

    n: int
    t: float = math.pi / 4
    variant: Variant = Variant.STANDARD
    signal_target: int = 1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ProtocolError(f"need n >= 1 signal/noise pairs, got {self.n}")
        if not math.isfinite(self.t):
            raise ProtocolError(f"interaction time {self.t} is not finite")
        if not 1 <= self.signal_target <= self.n:
            raise ProtocolError(
                f"target {self.signal_target} outside 1..{self.n}"
            )

    @property
    def with_reference(self) -> bool:
        return self.variant is Variant.WITH_REFERENCE

    def layout(self) -> RegisterLayout:
        return RegisterLayout.standard(self.n, with_reference=self.with_reference)


# ---------------------------------------------------------------------------
# Bell pairs

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def bell_pair_vector(mu: int = 0) -> np.ndarray:
    """|phi_mu> = (sigma_mu (x) 1)|phi> on a (signal, noise) pair, signal on bit 0."""
    phi = np.array([1, 0, 0, 1], dtype=np.complex128) * _INV_SQRT2
    return np.kron(np.eye(2), SIGMA[mu]) @ phi


def bell_projector(mu: int) -> np.ndarray:
    v = bell_pair_vector(mu)
    return np.outer(v, v.conj())


# ---------------------------------------------------------------------------
# named single-qubit states

PAULI_EIGENSTATE_AMPLITUDES: dict[str, tuple[complex, complex]] = {
    "0": (1, 0),
    "1": (0, 1),
    "+": (_INV_SQRT2, _INV_SQRT2),
    "-": (_INV_SQRT2, -_INV_SQRT2),
    "+i": (_INV_SQRT2, _INV_SQRT2 * 1j),
    "-i": (_INV_SQRT2, -_INV_SQRT2 * 1j),
}


def named_state(name: str) -> StateVector:
    try:
        a0, a1 = PAULI_EIGENSTATE_AMPLITUDES[name]
    except KeyError:
        raise ProtocolError(
            f"unknown state name {name!r}; choose from"
            f" {sorted(PAULI_EIGENSTATE_AMPLITUDES)}"
        ) from None
    from .states import single_qubit

    return single_qubit(a0, a1)


def default_probe_states() -> list[StateVector]:
    """The six Pauli eigenstates — tomographically complete probe set."""
    return [named_state(k) for k in ("0", "1", "+", "-", "+i", "-i")]


# ---------------------------------------------------------------------------
# encoder


def _second_axis(variant: Variant) -> int:
    return 2 if variant is Variant.ROTATED_X2 else 3


def expansion_coefficients(n: int, t: float, variant: Variant = Variant.STANDARD):
    """Pauli-string weights c_mu(t) of the expanded encoder.

    c_0 = cos^2 t and c_1 = -i sin t cos t always; the remaining two weights
    depend on which Pauli the second exponential uses, through
    sigma_1^(x)m sigma_3^(x)m = (-i)^m sigma_2^(x)m  and
    sigma_1^(x)m sigma_2^(x)m = i^m sigma_3^(x)m  on m = n + 1 qubits.
    """
    c, s = math.cos(t), math.sin(t)
    sc = -1j * s * c
    if _second_axis(variant) == 3:
        cross = -((-1j) ** (n + 1)) * s * s
        return (c * c, sc, cross, sc)
    cross = -((1j) ** (n + 1)) * s * s
    return (c * c, sc, sc, cross)


def encoding_unitary(n: int, t: float, variant: Variant = Variant.STANDARD) -> np.ndarray:
    """Dense encoder on local qubits [A = bit 0, S_1..S_n = bits 1..n]."""
    if n < 1:
        raise ProtocolError(f"need n >= 1, got {n}")
    qubits = range(n + 1)
    dim = 2 ** (n + 1)
    eye = np.eye(dim, dtype=np.complex128)
    m1 = PauliString.uniform(1, qubits).to_matrix(n + 1)
    m2 = PauliString.uniform(_second_axis(variant), qubits).to_matrix(n + 1)
    c, s = math.cos(t), math.sin(t)
    return (c * eye - 1j * s * m1) @ (c * eye - 1j * s * m2)


# ---------------------------------------------------------------------------
# decoder


def is_accepted_decrypt_angle(t: float) -> bool:
    """Decryption works exactly at t = pi/4 + m pi/2 for integer m."""
    return abs(math.remainder(t - math.pi / 4, math.pi / 2)) < ANGLE_ATOL


@dataclass(frozen=True)
class AlphaCoefficients:
    """Unimodular decoder phases, one per Pauli index."""

    values: tuple[complex, complex, complex, complex]

    def __post_init__(self) -> None:
        vals = tuple(complex(v) for v in self.values)
        if len(vals) != 4:
            raise ProtocolError(f"need 4 phases, got {len(vals)}")
        for v in vals:
            if abs(abs(v) - 1.0) > 1e-9:
                raise ProtocolError(f"decoder phase {v} is not unimodular")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, mu: int) -> complex:
        return self.values[mu]

    @classmethod
    def standard(cls, n: int) -> "AlphaCoefficients":
        return cls((1.0, 1j, -(1j ** (n + 1)), 1j))

    @classmethod
    def rotated_x2(cls, n: int) -> "AlphaCoefficients":
        return cls((1.0, 1j, 1j, -((-1j) ** (n + 1))))

    @classmethod
    def for_angle(cls, n: int, t: float, variant: Variant = Variant.STANDARD) -> "AlphaCoefficients":
        """alpha_mu = c_0(t)/c_mu(t); unimodular exactly at the accepted angles."""
        if not is_accepted_decrypt_angle(t):
            raise AngleError(
                f"t={t} is not of the form pi/4 + m*pi/2; the phase decoder"
                " cannot undo this encoding"
            )
        c = expansion_coefficients(n, t, variant)
        return cls(tuple(c[0] / c[mu] for mu in range(4)))


def _decoder_matrix(
    n: int,
    alphas: AlphaCoefficients,
    pair_slot: int,
    plain_slots: frozenset[int] = frozenset(),
) -> np.ndarray:
    """Dense decoder on local qubits [carrier = bit 0, key slots 1..n].

    The Bell projector pairs the carrier with slot ``pair_slot``; every other
    slot gets sigma_mu^T, or plain sigma_mu for slots listed in
    ``plain_slots`` (signal qubits standing in for lost noise qubits).
    """
    dim = 2 ** (n + 1)
    total = np.zeros((dim, dim), dtype=np.complex128)
    for mu in range(4):
        term = embed_operator(bell_projector(mu), [0, pair_slot], n + 1)
        for slot in range(1, n + 1):
            if slot == pair_slot:
                continue
            sig = SIGMA[mu] if slot in plain_slots else SIGMA[mu].T
            term = term @ embed_operator(sig, [slot], n + 1)
        total += alphas[mu] * term
    return total


def decoding_unitary(n: int, alphas: AlphaCoefficients, target: int = 1) -> np.ndarray:
    """Dense decoder on local qubits [S_target = bit 0, N_1..N_n = bits 1..n]."""
    if not 1 <= target <= n:
        raise ProtocolError(f"target {target} outside 1..{n}")
    return _decoder_matrix(n, alphas, pair_slot=target)


# ---------------------------------------------------------------------------
# running the protocol


def prepare_initial(config: ProtocolConfig, psi: StateVector | None = None) -> StateVector:
    """Input state (x) n Bell pairs, or the purified version with a reference.

    With ``Variant.WITH_REFERENCE`` the data qubit enters as half of a Bell
    pair with the reference and ``psi`` must be omitted.
    """
    layout = config.layout()
    phi = np.array([1, 0, 0, 1], dtype=np.complex128) * _INV_SQRT2
    groups: list[np.ndarray] = []
    if config.with_reference:
        if psi is not None:
            raise ProtocolError("with a reference the data qubit has no free input state")
        groups.append(phi)  # (REF, A) Bell pair on qubits 0, 1
    else:
        if psi is None:
            raise ProtocolError("an input state is required without a reference")
        if psi.num_qubits != 1:
            raise ProtocolError("the input must be a single-qubit state")
        groups.append(psi.amplitudes)
    groups.extend([phi] * config.n)
    return kron_states(groups, layout)


def encode(state: StateVector, config: ProtocolConfig) -> StateVector:
    """Apply the encoder to the (A, S_1..S_n) block of a prepared register."""
    layout = state.layout
    u = encoding_unitary(config.n, config.t, config.variant)
    targets = [layout.data] + [layout.signal(i) for i in range(1, config.n + 1)]
    return apply_unitary(state, u, targets)


def run_channel(config: ProtocolConfig, psi: StateVector | None, keep_roles) -> DensityOperator:
    """Prepare, encode, and reduce onto the listed roles."""
    state = encode(prepare_initial(config, psi), config)
    keep = state.layout.indices(keep_roles)
    return partial_trace(state, keep)


# Residual density operators are only materialised for registers this small;
# beyond that the full post-decoding state is still available on the outcome.
RESIDUAL_MAX_QUBITS = 12


@dataclass(frozen=True)
class DecryptionOutcome:
    """What a decryption attempt produced."""

    target_role: str
    recovered: DensityOperator
    recovered_pure: StateVector | None
    fidelity: float | None
    residual: DensityOperator | None
    post_state: StateVector
    warnings: tuple[str, ...] = ()


def _finish_outcome(
    post: StateVector,
    carrier: int,
    reference: StateVector | None,
    warnings: tuple[str, ...] = (),
) -> DecryptionOutcome:
    layout = post.layout
    recovered = partial_trace(post, [carrier])
    weight, vec = dominant_eigenvector(recovered)
    pure = vec if weight > 1.0 - 1e-9 else None
    fidelity = None
    if reference is not None:
        fidelity = fidelity_pure(recovered, reference)
    others = [q for q in range(layout.num_qubits) if q != carrier]
    residual = None
    if len(others) <= RESIDUAL_MAX_QUBITS:
        residual = partial_trace(post, others)
    return DecryptionOutcome(
        target_role=layout.role_at(carrier),
        recovered=recovered,
        recovered_pure=pure,
        fidelity=fidelity,
        residual=residual,
        post_state=post,
        warnings=warnings,
    )


def apply_decoding(
    state: StateVector,
    config: ProtocolConfig,
    target: int | None = None,
    alphas: AlphaCoefficients | None = None,
) -> StateVector:
    """Decoder acting on (S_target, N_1..N_n) of an encoded register."""
    target = config.signal_target if target is None else target
    if not 1 <= target <= config.n:
        raise ProtocolError(f"target {target} outside 1..{config.n}")
    if alphas is None:
        alphas = AlphaCoefficients.for_angle(config.n, config.t, config.variant)
    layout = state.layout
    u = decoding_unitary(config.n, alphas, target)
    targets = [layout.signal(target)] + [layout.noise(j) for j in range(1, config.n + 1)]
    return apply_unitary(state, u, targets)


def decrypt(
    state: StateVector,
    config: ProtocolConfig,
    target: int | None = None,
    reference: StateVector | None = None,
) -> DecryptionOutcome:
    """Decrypt one clone of an encoded register, consuming all noise qubits.

    ``reference`` is the input state, if the caller knows it, used only to
    report a fidelity.
    """
    target = config.signal_target if target is None else target
    post = apply_decoding(state, config, target)
    warnings = ()
    if config.n == 1:
        warnings = ("n=1: the clone is recoverable but was never fully encrypted",)
    return _finish_outcome(post, state.layout.signal(target), reference, warnings)


def decrypt_with_substitution(
    state: StateVector,
    config: ProtocolConfig,
    lost_noise,
    target: int | None = None,
    reference: StateVector | None = None,
) -> DecryptionOutcome:
    """Decrypt although some noise qubits are gone, using their signal partners.

    For every lost ``N_j`` the decoder's transposed Pauli factor moves to
    ``S_j`` untransposed.  The target pair's own noise qubit cannot be
    substituted.
    """
    target = config.signal_target if target is None else target
    lost = frozenset(int(j) for j in lost_noise)
    if not lost <= set(range(1, config.n + 1)):
        raise ProtocolError(f"lost set {sorted(lost)} outside pairs 1..{config.n}")
    if target in lost:
        raise KeyMaterialError(
            f"noise qubit N_{target} belongs to the target pair and cannot be"
            " substituted"
        )
    alphas = AlphaCoefficients.for_angle(config.n, config.t, config.variant)
    u = _decoder_matrix(config.n, alphas, pair_slot=target, plain_slots=lost)
    layout = state.layout
    physical = [layout.signal(target)]
    for j in range(1, config.n + 1):
        physical.append(layout.signal(j) if j in lost else layout.noise(j))
    post = apply_unitary(state, u, physical)
    return _finish_outcome(post, layout.signal(target), reference)


def decrypt_from_A(
    state: StateVector,
    config: ProtocolConfig,
    reference: StateVector | None = None,
) -> DecryptionOutcome:
    """Decrypt the data qubit itself against the noise register (even n only).

    Applies the adjoint of the encoder-shaped unitary U'(t) acting on
    (A, N_1..N_n); transposing a Pauli string over an odd number of pairs
    flips a sign that only cancels when n is even.
    """
    if config.n % 2:
        raise OddCloneCountError(
            f"data-side decryption needs an even clone count, got n={config.n}"
        )
    layout = state.layout
    u = encoding_unitary(config.n, config.t, config.variant)
    targets = [layout.data] + [layout.noise(j) for j in range(1, config.n + 1)]
    post = apply_unitary(state, u.conj().T, targets)
    return _finish_outcome(post, layout.data, reference)


def reverse_encoding_recovery(
    state: StateVector,
    config: ProtocolConfig,
    reference: StateVector | None = None,
) -> DecryptionOutcome:
    """Undo the encoder outright on (A, S_1..S_n); valid at every t."""
    layout = state.layout
    u = encoding_unitary(config.n, config.t, config.variant)
    targets = [layout.data] + [layout.signal(i) for i in range(1, config.n + 1)]
    post = apply_unitary(state, u.conj().T, targets)
    return _finish_outcome(post, layout.data, reference)


# ---------------------------------------------------------------------------
# iterated cloning


@dataclass(frozen=True)
class CloningStep:
    """One n=2 encoding: ``data`` spreads over itself and two fresh signals."""

    level: int
    data: int
    signals: tuple[int, int]
    noises: tuple[int, int]


@dataclass(frozen=True)
class IteratedCloningPlan:
    """Breadth-first tree of n=2 encodings producing 3^depth clones."""

    depth: int
    layout: RegisterLayout
    steps: tuple[CloningStep, ...]
    clones: tuple[int, ...]

    @property
    def num_qubits(self) -> int:
        return self.layout.num_qubits

    @property
    def noise_qubits(self) -> tuple[int, ...]:
        out: list[int] = []
        for step in self.steps:
            out.extend(step.noises)
        return tuple(sorted(out))

    def ancestry(self, clone: int) -> tuple[tuple[CloningStep, int], ...]:
        """(step, role) pairs from the leaf level up; role 0 means the data
        slot, role i in {1, 2} the i-th signal slot."""
        if clone not in self.clones:
            raise ProtocolError(f"qubit {clone} is not a final-level clone")
        chain: list[tuple[CloningStep, int]] = []
        carrier = clone
        for level in range(self.depth, 0, -1):
            step = next(
                s
                for s in self.steps
                if s.level == level and carrier in (s.data, *s.signals)
            )
            if carrier == step.data:
                role = 0
            else:
                role = 1 + step.signals.index(carrier)
                carrier = step.data
            chain.append((step, role))
        return tuple(chain)

    def key_qubits(self, clone: int) -> tuple[int, ...]:
        """The 2*depth noise qubits consumed when decrypting this clone."""
        out: list[int] = []
        for step, _ in self.ancestry(clone):
            out.extend(step.noises)
        return tuple(out)


def plan_iterated_cloning(depth: int) -> IteratedCloningPlan:
    if depth < 1:
        raise ProtocolError(f"need depth >= 1, got {depth}")
    steps: list[CloningStep] = []
    current = [0]
    next_free = 1
    for level in range(1, depth + 1):
        produced: list[int] = []
        for data in current:
            sa, na, sb, nb = range(next_free, next_free + 4)
            next_free += 4
            steps.append(
                CloningStep(level=level, data=data, signals=(sa, sb), noises=(na, nb))
            )
            produced.extend([data, sa, sb])
        current = produced
    layout = RegisterLayout.generic(next_free)
    return IteratedCloningPlan(
        depth=depth, layout=layout, steps=tuple(steps), clones=tuple(current)
    )


def execute_iterated_cloning(plan: IteratedCloningPlan, psi: StateVector) -> StateVector:
    """Run every encoding step of the plan on psi (x) Bell pairs."""
    if psi.num_qubits != 1:
        raise ProtocolError("the input must be a single-qubit state")
    phi = np.array([1, 0, 0, 1], dtype=np.complex128) * _INV_SQRT2
    groups = [psi.amplitudes] + [phi] * ((plan.num_qubits - 1) // 2)
    state = kron_states(groups, plan.layout)
    u = encoding_unitary(2, math.pi / 4)
    for step in plan.steps:
        state = apply_unitary(state, u, [step.data, *step.signals])
    return state


def append_fresh_pair(state: StateVector) -> tuple[StateVector, tuple[int, int]]:
    """Adjoin one Bell pair uncorrelated with everything else.

    Returns the enlarged state and the new pair's positions — key material
    that is deliberately wrong for every clone.
    """
    n = state.num_qubits
    phi = np.array([1, 0, 0, 1], dtype=np.complex128) * _INV_SQRT2
    vec = np.kron(phi, state.amplitudes)
    return StateVector(vec, RegisterLayout.generic(n + 2)), (n, n + 1)


def decrypt_clone(
    plan: IteratedCloningPlan,
    state: StateVector,
    clone: int,
    reference: StateVector | None = None,
    key_override: dict[int, tuple[int, int]] | None = None,
) -> DecryptionOutcome:
    """Walk a clone's ancestry from the leaves up, consuming 2*depth key qubits.

    ``key_override`` substitutes the (noise, noise) pair used at a given level
    — deliberately handing the decoder the wrong key shows that nothing about
    the input leaks without the right one.
    """
    alphas = AlphaCoefficients.standard(2)
    u_dec = {i: decoding_unitary(2, alphas, target=i) for i in (1, 2)}
    u_from_a = encoding_unitary(2, math.pi / 4).conj().T
    carrier = clone
    for step, role in plan.ancestry(clone):
        keys = step.noises
        if key_override and step.level in key_override:
            keys = key_override[step.level]
        if role == 0:
            state = apply_unitary(state, u_from_a, [carrier, *keys])
        else:
            state = apply_unitary(state, u_dec[role], [carrier, *keys])
    return _finish_outcome(state, clone, reference)
