"""Registers, decoys and qubit ownership for one simulated quantum channel.

Registers never interact with each other, so each is kept as its own
statevector; together they are exactly the product global state.  An
eavesdropper's probe qubits are appended to whichever container they
touch.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .pauli import PauliString, apply_pauli, embed
from .statevector import QuantumState, RngLike, append_zeros, apply_gate, apply_matrix, as_generator, h, measure_qubits

DECOY_STATES = ("0", "1", "+", "-")
_DECOY_PREP = {
    "0": QuantumState.basis("0"),
    "1": QuantumState.basis("1"),
    "+": QuantumState.from_kets({"0": 1, "1": 1}),
    "-": QuantumState.from_kets({"0": 1, "1": -1}),
}


_BASIS_STATES = {"Z": (_DECOY_PREP["0"], _DECOY_PREP["1"]), "X": (_DECOY_PREP["+"], _DECOY_PREP["-"])}


def _measure_single(state: QuantumState, basis: str, gen: np.random.Generator) -> int:
    # isolated qubit: project straight onto the basis pair
    a0, a1 = state.amplitudes
    amp = a0 if basis == "Z" else (a0 + a1) / np.sqrt(2)
    return int(gen.random() >= abs(amp) ** 2)


def decoy_basis(label: str) -> str:
    return "Z" if label in ("0", "1") else "X"


def decoy_bit(label: str) -> int:
    return 0 if label in ("0", "+") else 1


@dataclass(frozen=True)
class MessageQubit:
    register: int
    qubit: int  # 0-based within the register


@dataclass(eq=False)
class DecoyQubit:
    prepared: str
    position: int = -1
    state: QuantumState = field(default=None, repr=False)

    def __post_init__(self):
        if self.prepared not in DECOY_STATES:
            raise ValueError(f"decoy must be one of {DECOY_STATES}, got {self.prepared!r}")
        if self.state is None:
            self.state = _DECOY_PREP[self.prepared]

    @property
    def basis(self) -> str:
        return decoy_basis(self.prepared)

    @property
    def bit(self) -> int:
        return decoy_bit(self.prepared)


Entry = Union[MessageQubit, DecoyQubit]


class OwnershipError(RuntimeError):
    pass


class Channel:
    """Holds every register; tracks who owns each message qubit."""

    def __init__(self, registers: list[QuantumState], system_size: int, owner: str):
        self.registers = list(registers)
        self.system_size = system_size
        self.owner = {(j, q): owner for j in range(len(registers)) for q in range(system_size)}

    # -- ownership --------------------------------------------------------
    def transfer(self, entries, new_owner: str) -> None:
        for e in entries:
            if isinstance(e, MessageQubit):
                self.owner[e.register, e.qubit] = new_owner

    def require_register(self, party: str, register: int) -> None:
        held = {self.owner[register, q] for q in range(self.system_size)}
        if held != {party}:
            raise OwnershipError(f"{party} does not hold all of register {register} (owners {sorted(held)})")

    # -- party-side operations -------------------------------------------
    def apply_pauli(self, party: str, register: int, p: PauliString) -> None:
        self.require_register(party, register)
        state = self.registers[register]
        self.registers[register] = apply_pauli(state, embed(p, state.num_qubits))

    # -- in-flight access -------------------------------------------------
    def _locate(self, entry: Entry) -> tuple[QuantumState, int]:
        if isinstance(entry, DecoyQubit):
            return entry.state, 0
        return self.registers[entry.register], entry.qubit

    def _store(self, entry: Entry, state: QuantumState) -> None:
        if isinstance(entry, DecoyQubit):
            entry.state = state
        else:
            self.registers[entry.register] = state

    def measure(self, entry: Entry, basis: str, rng: RngLike = None) -> int:
        """Measure one qubit in the Z or X basis; the qubit is left in the observed eigenstate."""
        state, q = self._locate(entry)
        if state.num_qubits == 1:
            bit = _measure_single(state, basis, as_generator(rng))
            self._store(entry, _BASIS_STATES[basis][bit])
            return bit
        if basis == "X":
            state = apply_gate(state, h(q))
        bits, state = measure_qubits(state, [q], rng)
        if basis == "X":
            state = apply_gate(state, h(q))
        self._store(entry, state)
        return int(bits)

    def couple(self, entry: Entry, unitary: np.ndarray, probe_qubits: int) -> None:
        """Attach fresh probe qubits in |0> and apply ``unitary`` on (qubit, probe)."""
        state, q = self._locate(entry)
        start = state.num_qubits
        state = append_zeros(state, probe_qubits)
        state = apply_matrix(state, unitary, [q, *range(start, start + probe_qubits)])
        self._store(entry, state)

    def apply_error(self, register: int, p: PauliString) -> None:
        state = self.registers[register]
        self.registers[register] = apply_pauli(state, embed(p, state.num_qubits))


def prepare_decoys(count: int, rng: RngLike = None) -> list[DecoyQubit]:
    gen = as_generator(rng)
    return [DecoyQubit(DECOY_STATES[int(k)]) for k in gen.integers(4, size=count)]
