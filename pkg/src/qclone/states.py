"""Dense statevector and density-operator engine.

Everything is little-endian: qubit ``q`` is bit ``q`` of the basis-state
index, so ``|q1 q0> = |10>`` is index 2.  Unitaries handed to
:func:`apply_unitary` follow the same convention internally — bit ``m`` of the
operator's row/column index belongs to ``targets[m]``.

States and operators are immutable; every operation returns a fresh object.
Amplitude arrays are marked read-only on construction so accidental in-place
edits fail loudly.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import log2

import numpy as np

from .registers import RegisterLayout, check_register_size

STATE_ATOL = 1e-10
MATRIX_ATOL = 1e-9
# Eigenvalues in [-EIG_NEG_TOL, EIG_CLAMP] are treated as exact zeros when
# taking entropies; anything below -EIG_NEG_TOL means the operator is not a
# state and is rejected.
EIG_CLAMP = 1e-12
EIG_NEG_TOL = 1e-10


class StateValidationError(ValueError):
    """Array fails the checks required of a state or density operator."""


def _frozen_complex(values) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state of a qubit register."""

    amplitudes: np.ndarray
    layout: RegisterLayout

    def __post_init__(self) -> None:
        arr = _frozen_complex(self.amplitudes)
        object.__setattr__(self, "amplitudes", arr)
        n = self.layout.num_qubits
        check_register_size(n)
        if arr.shape != (2**n,):
            raise StateValidationError(
                f"amplitude vector of shape {arr.shape} does not match a {n}-qubit layout"
            )
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > STATE_ATOL:
            raise StateValidationError(f"state norm {norm} deviates from 1")

    @property
    def num_qubits(self) -> int:
        return self.layout.num_qubits

    def density(self) -> "DensityOperator":
        return DensityOperator(
            np.outer(self.amplitudes, self.amplitudes.conj()), self.layout
        )


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Mixed state of a qubit register (Hermitian, unit trace, PSD)."""

    matrix: np.ndarray
    layout: RegisterLayout

    def __post_init__(self) -> None:
        mat = _frozen_complex(self.matrix)
        object.__setattr__(self, "matrix", mat)
        n = self.layout.num_qubits
        check_register_size(n)
        dim = 2**n
        if mat.shape != (dim, dim):
            raise StateValidationError(
                f"matrix of shape {mat.shape} does not match a {n}-qubit layout"
            )
        if not np.allclose(mat, mat.conj().T, atol=STATE_ATOL):
            raise StateValidationError("density operator is not Hermitian")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > STATE_ATOL:
            raise StateValidationError(f"density operator trace {tr} deviates from 1")
        # Cheap PSD proof first: a Cholesky factorisation of the shifted
        # matrix succeeding certifies every eigenvalue is > -EIG_NEG_TOL.
        # Only on failure pay for the full spectrum to decide authoritatively.
        try:
            np.linalg.cholesky(mat + EIG_NEG_TOL * np.eye(dim))
        except np.linalg.LinAlgError:
            lo = float(np.linalg.eigvalsh(mat)[0])
            if lo < -EIG_NEG_TOL:
                raise StateValidationError(
                    f"density operator has eigenvalue {lo} < 0"
                ) from None

    @property
    def num_qubits(self) -> int:
        return self.layout.num_qubits


State = StateVector | DensityOperator


# ---------------------------------------------------------------------------
# constructors


def basis_state(layout: RegisterLayout, index: int = 0) -> StateVector:
    amps = np.zeros(2**layout.num_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps, layout)


def single_qubit(amp0: complex, amp1: complex) -> StateVector:
    """One-qubit pure state from a pair of amplitudes (normalised here)."""
    vec = np.array([amp0, amp1], dtype=np.complex128)
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise StateValidationError("zero amplitude pair")
    return StateVector(vec / norm, RegisterLayout.generic(1))


def kron_states(groups, layout: RegisterLayout) -> StateVector:
    """Tensor ascending register groups together (``groups[0]`` on the low qubits)."""
    vec = np.array([1.0], dtype=np.complex128)
    for g in groups:
        vec = np.kron(np.asarray(g, dtype=np.complex128), vec)
    return StateVector(vec, layout)


def haar_random_qubit(rng: np.random.Generator) -> StateVector:
    """Haar-random single-qubit pure state."""
    raw = rng.normal(size=2) + 1j * rng.normal(size=2)
    return single_qubit(raw[0], raw[1])


# ---------------------------------------------------------------------------
# unitary application


def check_unitary(u, atol: float = STATE_ATOL) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise StateValidationError(f"operator of shape {u.shape} is not square")
    dim = u.shape[0]
    if dim & (dim - 1):
        raise StateValidationError(f"operator dimension {dim} is not a power of two")
    if not np.allclose(u.conj().T @ u, np.eye(dim), atol=atol):
        raise StateValidationError("operator is not unitary")
    return u


def _contract(tensor: np.ndarray, u: np.ndarray, targets: tuple[int, ...], n: int) -> np.ndarray:
    """Contract a k-qubit operator into the first n qubit axes of ``tensor``.

    ``tensor`` holds axes [qubit n-1, ..., qubit 0, *batch]; any trailing batch
    axes ride along untouched.
    """
    k = len(targets)
    ut = u.reshape([2] * (2 * k))
    in_axes = list(range(k, 2 * k))
    qubit_axes = [n - 1 - targets[k - 1 - j] for j in range(k)]
    out = np.tensordot(ut, tensor, axes=(in_axes, qubit_axes))
    return np.moveaxis(out, list(range(k)), qubit_axes)


def apply_unitary(state: State, u, targets) -> State:
    """Apply a k-qubit unitary to ``targets`` (ordered, little-endian in u)."""
    targets = tuple(int(q) for q in targets)
    n = state.num_qubits
    if len(set(targets)) != len(targets):
        raise StateValidationError(f"repeated target in {targets}")
    if any(q < 0 or q >= n for q in targets):
        raise StateValidationError(f"targets {targets} out of range for {n} qubits")
    u = check_unitary(u)
    if u.shape[0] != 2 ** len(targets):
        raise StateValidationError(
            f"operator dimension {u.shape[0]} does not fit {len(targets)} targets"
        )
    if isinstance(state, StateVector):
        psi = state.amplitudes.reshape([2] * n)
        out = _contract(psi, u, targets, n)
        return StateVector(out.reshape(-1), state.layout)
    # rho -> U rho U+, one index at a time: M -> (U (U M)+)+.
    dim = 2**n
    work = state.matrix
    for _ in range(2):
        work = _contract(work.reshape([2] * n + [dim]), u, targets, n)
        work = work.reshape(dim, dim).conj().T
    return DensityOperator(work, state.layout)


def embed_operator(op, targets, num_qubits: int) -> np.ndarray:
    """Dense 2^n x 2^n embedding of a k-qubit operator (need not be unitary)."""
    targets = tuple(int(q) for q in targets)
    k = len(targets)
    op = np.asarray(op, dtype=np.complex128)
    if op.shape != (2**k, 2**k):
        raise StateValidationError(f"operator shape {op.shape} does not fit {k} targets")
    n = num_qubits
    rest = [q for q in range(n) if q not in targets]
    rest_idx = np.arange(2 ** len(rest))
    spread = np.zeros_like(rest_idx)
    for m, q in enumerate(rest):
        spread |= ((rest_idx >> m) & 1) << q
    full = np.zeros((2**n, 2**n), dtype=np.complex128)
    for r_sub in range(2**k):
        row_base = 0
        for m in range(k):
            row_base |= ((r_sub >> m) & 1) << targets[m]
        for c_sub in range(2**k):
            v = op[r_sub, c_sub]
            if v == 0:
                continue
            col_base = 0
            for m in range(k):
                col_base |= ((c_sub >> m) & 1) << targets[m]
            full[row_base + spread, col_base + spread] = v
    return full


# ---------------------------------------------------------------------------
# reductions and functionals


def partial_trace(state: State, keep) -> DensityOperator:
    """Reduced density operator on ``keep`` (qubit positions, any order).

    The surviving qubits are re-indexed in ascending physical order and keep
    their role names.
    """
    keep = tuple(sorted(int(q) for q in keep))
    n = state.num_qubits
    if len(set(keep)) != len(keep) or not keep:
        raise StateValidationError(f"keep set {keep} must be non-empty and distinct")
    if any(q < 0 or q >= n for q in keep):
        raise StateValidationError(f"keep set {keep} out of range for {n} qubits")
    traced = [q for q in range(n) if q not in keep]
    sub_layout = state.layout.restricted_to(keep)
    m = len(keep)
    dim = 2**m
    if isinstance(state, StateVector):
        psi = state.amplitudes.reshape([2] * n)
        keep_axes = [n - 1 - q for q in reversed(keep)]
        rest_axes = [n - 1 - q for q in reversed(traced)]
        mat = psi.transpose(keep_axes + rest_axes).reshape(dim, -1)
        return DensityOperator(mat @ mat.conj().T, sub_layout)
    rho = state.matrix.reshape([2] * (2 * n))
    remaining = n
    for q in sorted(traced, reverse=True):
        # Tracing from the top down keeps each lower qubit's axis position.
        ax = remaining - 1 - q
        rho = np.trace(rho, axis1=ax, axis2=ax + remaining)
        remaining -= 1
    return DensityOperator(rho.reshape(dim, dim), sub_layout)


def von_neumann_entropy(rho: DensityOperator) -> float:
    """Entropy in bits; eigenvalues inside the zero-clamp window contribute 0."""
    eigs = np.linalg.eigvalsh(rho.matrix)
    if float(eigs[0]) < -EIG_NEG_TOL:
        raise StateValidationError(f"eigenvalue {eigs[0]} below tolerance")
    total = 0.0
    for lam in eigs:
        lam = float(lam)
        if lam <= EIG_CLAMP:
            continue
        total -= lam * log2(lam)
    return total


def fidelity_pure(rho: State, psi: StateVector) -> float:
    """<psi| rho |psi> for a pure target state."""
    if rho.num_qubits != psi.num_qubits:
        raise StateValidationError("state sizes differ")
    if isinstance(rho, StateVector):
        return float(abs(np.vdot(psi.amplitudes, rho.amplitudes)) ** 2)
    val = np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes)
    return float(val.real)


def trace_distance(a: DensityOperator, b: DensityOperator) -> float:
    if a.num_qubits != b.num_qubits:
        raise StateValidationError("state sizes differ")
    eigs = np.linalg.eigvalsh(a.matrix - b.matrix)
    return float(0.5 * np.abs(eigs).sum())


def purity(rho: DensityOperator) -> float:
    return float(np.trace(rho.matrix @ rho.matrix).real)


def dominant_eigenvector(rho: DensityOperator) -> tuple[float, StateVector]:
    """Largest eigenvalue and its eigenvector (phase fixed on the largest entry)."""
    vals, vecs = np.linalg.eigh(rho.matrix)
    vec = vecs[:, -1]
    pivot = vec[np.argmax(np.abs(vec))]
    if abs(pivot) > 0:
        vec = vec * (pivot.conjugate() / abs(pivot))
    return float(vals[-1]), StateVector(vec, rho.layout)
