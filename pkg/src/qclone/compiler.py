"""Compilation of the protocol unitaries into one- and two-qubit gates.

The encoder becomes two parity ladders (CNOTs + one Rz each), the X half
conjugated by Hadamards: exactly ``4n`` two-qubit and ``2n + 4`` one-qubit
gates.  The decoder is conjugated into the computational basis by a Bell
unscrambler on (S1, N1); there it splits into three doubly-controlled blocks
(control patterns 01, 10, 11), each made of one doubly-controlled phase and
``n - 1`` doubly-controlled transposed Paulis, every one realised with five
two-qubit gates.  Together with the unscrambler pair that is ``15n + 7``
two-qubit gates, inside the overall budget of at most ``21n + 11`` for a
full encode/decode cycle.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .circuits import (
    CircuitError,
    Gate,
    GateCircuit,
    gate_cnot,
    gate_cu,
    gate_h,
    gate_phase,
    gate_rz,
    gate_x,
)
from .paulis import SIGMA
from .protocol import AlphaCoefficients, Variant
from .states import check_unitary

CCU_EQUIV_ATOL = 1e-10


class CompileError(ValueError):
    """Request outside what the compiler supports."""


# ---------------------------------------------------------------------------
# encoder


def compile_encoding(
    n: int, t: float, variant: Variant = Variant.STANDARD
) -> GateCircuit:
    """Parity-ladder circuit for the encoder on wires [A=0, S_1..S_n = 1..n].

    Each Pauli-string exponential is a CNOT ladder accumulating the parity on
    the last signal wire, an Rz(2t) there, and the reversed ladder; the X
    string is the same ladder conjugated by Hadamards on every wire, the Y
    string of the rotated variant by S.H (which maps Z to Y).
    """
    if n < 1:
        raise CompileError(f"need n >= 1, got {n}")
    wires = list(range(n + 1))
    ladder = [gate_cnot(w, w + 1) for w in wires[:-1]]

    def parity_rotation() -> list[Gate]:
        return ladder + [gate_rz(n, 2.0 * t)] + list(reversed(ladder))

    gates: list[Gate] = []
    if variant is Variant.ROTATED_X2:
        for w in wires:
            gates.append(gate_phase(w, -math.pi / 2))
            gates.append(gate_h(w))
        gates.extend(parity_rotation())
        for w in wires:
            gates.append(gate_h(w))
            gates.append(gate_phase(w, math.pi / 2))
    else:
        gates.extend(parity_rotation())  # Z...Z exponential acts first
    gates.extend(gate_h(w) for w in wires)
    gates.extend(parity_rotation())
    gates.extend(gate_h(w) for w in wires)
    return GateCircuit(tuple(gates), n + 1)


# ---------------------------------------------------------------------------
# doubly-controlled unitaries


def principal_sqrt_2x2(u) -> np.ndarray:
    """Deterministic square root of a 2x2 unitary (spectral, principal-style)."""
    u = check_unitary(u)
    if u.shape != (2, 2):
        raise CompileError(f"need a 2x2 unitary, got {u.shape}")
    if (
        abs(u[0, 1]) < 1e-14
        and abs(u[1, 0]) < 1e-14
        and abs(u[0, 0] - u[1, 1]) < 1e-14
    ):
        root = cmath.exp(0.5j * cmath.phase(u[0, 0]))
        v = root * np.eye(2, dtype=np.complex128)
    else:
        theta = cmath.phase(np.linalg.det(u)) / 2.0
        su = u * cmath.exp(-1j * theta)
        # su = cos(phi) I - i sin(phi) (n . sigma) with a real axis vector n
        cos_phi = ((su[0, 0] + su[1, 1]) / 2.0).real
        axis = np.array(
            [
                (1j * (su[0, 1] + su[1, 0]) / 2.0).real,
                ((su[1, 0] - su[0, 1]) / 2.0).real,
                (1j * (su[0, 0] - su[1, 1]) / 2.0).real,
            ]
        )
        sin_phi = float(np.linalg.norm(axis))
        phi = math.atan2(sin_phi, cos_phi)
        nhat = axis / sin_phi
        n_dot_sigma = sum(nhat[k] * SIGMA[k + 1] for k in range(3))
        v = cmath.exp(1j * theta / 2.0) * (
            math.cos(phi / 2.0) * np.eye(2) - 1j * math.sin(phi / 2.0) * n_dot_sigma
        )
    if not np.allclose(v @ v, u, atol=1e-12):
        raise CompileError("square-root construction failed to reproduce u")
    return v


def _normalize_pattern(pattern) -> tuple[int, int]:
    if isinstance(pattern, str):
        bits = tuple(int(ch) for ch in pattern)
    else:
        bits = tuple(int(b) for b in pattern)
    if len(bits) != 2 or any(b not in (0, 1) for b in bits):
        raise CompileError(f"control pattern must be two bits, got {pattern!r}")
    return bits


def compile_ccu(control_pattern, u, controls, target: int) -> GateCircuit:
    """Doubly-controlled u via controlled square roots: five two-qubit gates.

    ``control_pattern[k]`` is the value wire ``controls[k]`` must hold; zeros
    are handled by X conjugation on that wire.
    """
    bits = _normalize_pattern(control_pattern)
    c1, c2 = (int(c) for c in controls)
    target = int(target)
    if len({c1, c2, target}) != 3:
        raise CompileError(f"controls {controls} and target {target} must be distinct")
    u = check_unitary(np.asarray(u, dtype=np.complex128))
    if u.shape != (2, 2):
        raise CompileError(f"need a 2x2 unitary, got {u.shape}")
    v = principal_sqrt_2x2(u)
    flips = [gate_x(c) for c, bit in zip((c1, c2), bits) if bit == 0]
    core = [
        gate_cu(c2, target, v),
        gate_cnot(c1, c2),
        gate_cu(c2, target, v.conj().T),
        gate_cnot(c1, c2),
        gate_cu(c1, target, v),
    ]
    gates = flips + core + flips
    return GateCircuit(tuple(gates), max(c1, c2, target) + 1)


# ---------------------------------------------------------------------------
# decoder


def basis_change_V_tilde() -> GateCircuit:
    """Bell unscrambler on (S1=0, N1=1): |phi_mu> -> |mu1>|mu2>, phases exact.

    CNOT-H-CNOT alone permutes the Bell basis into computational states but
    leaves the mu=2 image as -i|10>; a controlled phase clears it.
    """
    gates = (
        gate_cnot(0, 1),
        gate_h(0),
        gate_cnot(0, 1),
        gate_cu(0, 1, np.diag([1j, 1.0])),
    )
    return GateCircuit(gates, 2)


def _v_tilde_inverse_gates() -> tuple[Gate, ...]:
    """Adjoint of the unscrambler with its phase correction split in two.

    The split keeps each emitted gate a plain controlled phase; the product
    diag(-1,1) . diag(i,1) = diag(-i,1) is exactly the adjoint correction.
    """
    return (
        gate_cu(0, 1, np.diag([-1.0, 1.0])),
        gate_cu(0, 1, np.diag([1j, 1.0])),
        gate_cnot(0, 1),
        gate_h(0),
        gate_cnot(0, 1),
    )


def compile_decoding(n: int, alphas: AlphaCoefficients) -> GateCircuit:
    """Decoder circuit on wires [S_1 = 0, N_1..N_n = 1..n]; 15n + 7 two-qubit gates.

    After the basis change, the mu-th block is selected by the computational
    pattern (mu1, mu2) on (S1, N1) — realised by X conjugation for the 01 and
    10 patterns — and applies the phase alpha_mu/alpha_0 together with
    transposed Paulis on N_2..N_n, one five-gate doubly-controlled unitary
    per factor.
    """
    if n < 2:
        raise CompileError(
            "the single-pair decoder is one two-qubit unitary; compile_decoding"
            " starts at n = 2"
        )
    gates: list[Gate] = list(basis_change_V_tilde().gates)
    for mu, flip_wire in ((1, 0), (2, 1), (3, None)):
        if flip_wire is not None:
            gates.append(gate_x(flip_wire))
        phase_u = (alphas[mu] / alphas[0]) * np.eye(2)
        gates.extend(compile_ccu("11", phase_u, (0, 1), 2).gates)
        sig_t = SIGMA[mu].T
        for wire in range(2, n + 1):
            gates.extend(compile_ccu("11", sig_t, (0, 1), wire).gates)
        if flip_wire is not None:
            gates.append(gate_x(flip_wire))
    gates.extend(_v_tilde_inverse_gates())
    return GateCircuit(tuple(gates), n + 1)


# ---------------------------------------------------------------------------
# accounting


@dataclass(frozen=True)
class GateCountReport:
    """Measured two-qubit counts next to the overall cycle budget."""

    n: int
    enc_2q: int
    dec_2q: int
    total_2q: int  # the "at most 21n + 11" budget for a full cycle
    measured_total: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "enc_2q": self.enc_2q,
            "dec_2q": self.dec_2q,
            "total_2q": self.total_2q,
            "measured_total": self.measured_total,
            "enc_formula_4n": 4 * self.n,
            "dec_formula_15n_plus_7": 15 * self.n + 7,
            "within_budget": self.measured_total <= self.total_2q,
        }


def gate_count_report(n: int) -> GateCountReport:
    """Count two-qubit gates in freshly compiled circuits for clone count n."""
    if n < 2:
        raise CompileError(f"reports start at n = 2, got {n}")
    enc = compile_encoding(n, math.pi / 4).two_qubit_count
    dec = compile_decoding(n, AlphaCoefficients.standard(n)).two_qubit_count
    return GateCountReport(
        n=n,
        enc_2q=enc,
        dec_2q=dec,
        total_2q=21 * n + 11,
        measured_total=enc + dec,
    )
