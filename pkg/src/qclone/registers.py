"""Qubit register bookkeeping.

A register is a row of qubits addressed by little-endian position (qubit 0 is
the least significant bit of a basis-state index).  Protocol code never talks
about raw positions directly; it assigns each position a *role*:

``A``            the data qubit carrying the state to be cloned
``REF``          an optional purifying reference entangled with ``A``
``S1 .. Sn``     signal qubits (the encrypted clones)
``N1 .. Nn``     noise qubits (the consumable key material)

Dense simulation is capped at :data:`DEFAULT_MAX_QUBITS` qubits; the cap can
be raised or lowered at runtime (the command line honours the
``QCLONE_MAX_QUBITS`` environment variable for the same purpose).
"""
from __future__ import annotations

from dataclasses import dataclass, field

DEFAULT_MAX_QUBITS = 24

_max_qubits = DEFAULT_MAX_QUBITS

ROLE_DATA = "A"
ROLE_REFERENCE = "REF"


class RegisterError(ValueError):
    """Malformed layout or role lookup failure."""


class RegisterOverflowError(RegisterError):
    """Requested register exceeds the configured dense-simulation cap."""


def max_register_qubits() -> int:
    return _max_qubits


def set_max_register_qubits(limit: int) -> None:
    global _max_qubits
    if int(limit) < 1:
        raise RegisterError(f"register cap must be positive, got {limit}")
    _max_qubits = int(limit)


def check_register_size(num_qubits: int) -> None:
    if num_qubits > _max_qubits:
        raise RegisterOverflowError(
            f"register of {num_qubits} qubits exceeds the cap of {_max_qubits}"
            " (see set_max_register_qubits / QCLONE_MAX_QUBITS)"
        )


def signal_role(i: int) -> str:
    return f"S{i}"


def noise_role(i: int) -> str:
    return f"N{i}"


@dataclass(frozen=True)
class RegisterLayout:
    """Bijective assignment of role names to qubit positions.

    ``roles`` is stored as a sorted tuple of ``(role, position)`` pairs so the
    layout is hashable; use :meth:`from_map` to build one from a dict.
    """

    num_qubits: int
    roles: tuple[tuple[str, int], ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index = dict(self.roles)
        positions = [pos for _, pos in self.roles]
        if len(index) != len(self.roles):
            raise RegisterError("duplicate role name in layout")
        if sorted(positions) != list(range(self.num_qubits)):
            raise RegisterError(
                f"roles must cover positions 0..{self.num_qubits - 1} exactly,"
                f" got {sorted(positions)}"
            )
        object.__setattr__(self, "_index", index)

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_map(cls, mapping: dict[str, int]) -> "RegisterLayout":
        items = tuple(sorted(mapping.items(), key=lambda kv: kv[1]))
        return cls(num_qubits=len(items), roles=items)

    @classmethod
    def standard(cls, n: int, with_reference: bool = False) -> "RegisterLayout":
        """Protocol layout: data qubit first, then interleaved (S_i, N_i) pairs.

        With a reference, ``REF`` sits at position 0 and everything shifts up
        by one.
        """
        if n < 1:
            raise RegisterError(f"need at least one signal/noise pair, got n={n}")
        offset = 1 if with_reference else 0
        mapping = {ROLE_DATA: offset}
        if with_reference:
            mapping[ROLE_REFERENCE] = 0
        for i in range(1, n + 1):
            mapping[signal_role(i)] = offset + 2 * i - 1
            mapping[noise_role(i)] = offset + 2 * i
        return cls.from_map(mapping)

    @classmethod
    def generic(cls, num_qubits: int) -> "RegisterLayout":
        """Anonymous layout ``q0 .. q{m-1}`` for states outside the protocol."""
        return cls.from_map({f"q{i}": i for i in range(num_qubits)})

    # -- lookups --------------------------------------------------------

    def index(self, role: str) -> int:
        try:
            return self._index[role]
        except KeyError:
            raise RegisterError(f"layout has no role {role!r}") from None

    def role_at(self, position: int) -> str:
        for role, pos in self.roles:
            if pos == position:
                return role
        raise RegisterError(f"no role at position {position}")

    def has_role(self, role: str) -> bool:
        return role in self._index

    @property
    def data(self) -> int:
        return self.index(ROLE_DATA)

    @property
    def reference(self) -> int:
        return self.index(ROLE_REFERENCE)

    def signal(self, i: int) -> int:
        return self.index(signal_role(i))

    def noise(self, i: int) -> int:
        return self.index(noise_role(i))

    @property
    def num_pairs(self) -> int:
        n = 0
        while self.has_role(signal_role(n + 1)):
            n += 1
        return n

    def indices(self, roles) -> tuple[int, ...]:
        return tuple(self.index(r) for r in roles)

    def restricted_to(self, keep: tuple[int, ...]) -> "RegisterLayout":
        """Layout for the sub-register ``keep`` (ascending), roles preserved."""
        kept = sorted(keep)
        mapping = {self.role_at(pos): new for new, pos in enumerate(kept)}
        return RegisterLayout.from_map(mapping)
