"""Single-qubit Pauli noise and the five-generator stabilizer corrector.

Syndromes are taken against the conjugated generators of a *known* family
member: the raw generators' outcomes already depend on the encoded message,
so member-blind correction is ill-posed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from .cluster import OrthogonalFamily, build_family
from .errors import UncorrectableError
from .pauli import (
    PauliString,
    StabilizerSet,
    apply_pauli,
    embed,
    error_syndrome,
    syndrome_measure,
)
from .statevector import (
    GateOp,
    QuantumState,
    RngLike,
    append_zeros,
    apply_circuit,
    as_generator,
    cmx,
    cmz,
    drop_qubits,
    h,
    measure_qubits,
)

N_QUBITS = 5
GENERATOR_LABELS = ("X1X2X3", "X3X4X5", "Z1Z2", "Z2Z3Z4", "Z4Z5")
STABILIZERS = StabilizerSet.parse(GENERATOR_LABELS, N_QUBITS)
Z_REPRESENTATIVES = {"10000": "Z1", "11000": "Z3", "01000": "Z4"}


class ErrorKind(str, Enum):
    BIT_FLIP = "bit-flip"
    PHASE_FLIP = "phase-flip"
    BIT_PHASE_FLIP = "bit-phase-flip"

    @property
    def letter(self) -> str:
        return {"bit-flip": "X", "phase-flip": "Z", "bit-phase-flip": "XZ"}[self.value]


@dataclass(frozen=True)
class ErrorOp:
    letter: str  # X, Z or XZ
    qubit: int  # 1-based

    def __post_init__(self):
        if self.letter not in ("X", "Z", "XZ"):
            raise ValueError(f"error letter must be X, Z or XZ, got {self.letter!r}")
        if self.qubit < 1:
            raise ValueError("qubits are 1-based")

    @classmethod
    def parse(cls, text: str) -> "ErrorOp":
        letter = text.rstrip("0123456789")
        return cls(letter, int(text[len(letter):]))

    def pauli(self, n: int = N_QUBITS) -> PauliString:
        if self.qubit > n:
            raise ValueError(f"qubit {self.qubit} outside a {n}-qubit register")
        return PauliString.single(n, self.letter, self.qubit - 1)

    def label(self) -> str:
        return f"{self.letter}{self.qubit}"

    def __str__(self) -> str:
        return self.label()


def single_qubit_errors(n: int = N_QUBITS) -> list[ErrorOp]:
    return [ErrorOp(letter, q) for q in range(1, n + 1) for letter in ("X", "Z", "XZ")]


@dataclass(frozen=True)
class NoiseChannel:
    """With probability ``p`` one uniformly chosen qubit of ``scope`` gets the channel's Pauli."""

    p: float
    kind: ErrorKind = ErrorKind.BIT_FLIP
    scope: tuple[int, ...] = field(default=tuple(range(1, N_QUBITS + 1)))

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {self.p}")
        object.__setattr__(self, "kind", ErrorKind(self.kind))
        if not self.scope:
            raise ValueError("noise scope is empty")


def apply_noise(state: QuantumState, channel: NoiseChannel, rng: RngLike = None) -> tuple[QuantumState, ErrorOp | None]:
    gen = as_generator(rng)
    # both draws always happen so the stream does not depend on p
    hit = gen.random() < channel.p
    qubit = channel.scope[int(gen.integers(len(channel.scope)))]
    if not hit:
        return state, None
    err = ErrorOp(channel.kind.letter, qubit)
    return apply_pauli(state, err.pauli(state.num_qubits)), err


def conjugated_stabilizers(member: int, family: OrthogonalFamily | None = None) -> StabilizerSet:
    """Signed generators ``U S_i U^dagger`` stabilizing member ``member``."""
    family = family or build_family(N_QUBITS)
    return STABILIZERS.conjugated_by(family.encodings[member].pauli())


def measure_qec_syndrome(state: QuantumState, expected_member: int, rng: RngLike = None,
                         family: OrthogonalFamily | None = None) -> str:
    gen = as_generator(rng)
    bits = []
    for g in conjugated_stabilizers(expected_member, family):
        b, state = syndrome_measure(state, embed(g, state.num_qubits), gen)
        bits.append(str(b))
    return "".join(bits)


def qec_circuit() -> list[GateOp]:
    """Ancilla circuit reading the unsigned generators; ancillas are qubits 5..9."""
    gates: list[GateOp] = [h(*range(5, 10))]
    for anc, g in zip(range(5, 10), STABILIZERS):
        builder = cmx if any(g.x) else cmz
        gates.append(builder(anc, *g.support))
    gates.append(h(*range(5, 10)))
    return gates


def measure_qec_syndrome_circuit(state: QuantumState, expected_member: int, rng: RngLike = None,
                                 family: OrthogonalFamily | None = None) -> tuple[str, QuantumState]:
    """Ancilla-circuit route; raw outcomes are XORed with the member's generator signs."""
    full = apply_circuit(append_zeros(state, 5), qec_circuit())
    raw, post = measure_qubits(full, list(range(5, 10)), rng)
    signs = "".join("1" if g.sign < 0 else "0" for g in conjugated_stabilizers(expected_member, family))
    syndrome = "".join(str(int(a) ^ int(b)) for a, b in zip(raw, signs))
    return syndrome, drop_qubits(post, list(range(5, 10)), raw)


@dataclass(frozen=True)
class CorrectionPlan:
    syndrome: str
    correction: PauliString


@lru_cache(maxsize=None)
def decoder_table() -> dict[str, CorrectionPlan]:
    """Syndrome -> correction for every single-qubit error, Z-degeneracies resolved by representative."""
    table = {"00000": CorrectionPlan("00000", PauliString.identity(N_QUBITS))}
    for err in single_qubit_errors():
        syn = error_syndrome(err.pauli(), STABILIZERS)
        rep = Z_REPRESENTATIVES.get(syn) if err.letter == "Z" else None
        corr = ErrorOp.parse(rep).pauli() if rep else err.pauli()
        if syn in table and table[syn].correction != corr:
            raise AssertionError(f"ambiguous syndrome {syn}")
        table[syn] = CorrectionPlan(syn, corr)
    return table


def decode_and_correct(state: QuantumState, syndrome: str, expected_member: int | None = None) -> tuple[QuantumState, PauliString]:
    """Apply the tabulated correction for ``syndrome``.

    The correction is the same for every member: conjugating by the
    encoding Pauli flips generator signs but not anticommutation patterns.
    """
    plan = decoder_table().get(syndrome)
    if plan is None:
        raise UncorrectableError(syndrome)
    return apply_pauli(state, embed(plan.correction, state.num_qubits)), plan.correction


def correct(state: QuantumState, expected_member: int, rng: RngLike = None,
            family: OrthogonalFamily | None = None) -> tuple[QuantumState, str, PauliString]:
    """Measure the syndrome against ``expected_member`` and apply the correction."""
    gen = as_generator(rng)
    syndrome = measure_qec_syndrome(state, expected_member, gen, family)
    fixed, corr = decode_and_correct(state, syndrome, expected_member)
    return fixed, syndrome, corr


def syndrome_rows() -> list[dict]:
    rows = []
    for err in single_qubit_errors():
        syn = error_syndrome(err.pauli(), STABILIZERS)
        rows.append({"error": err.label(), "syndrome": syn,
                     "correction": decoder_table()[syn].correction.label()})
    return rows


def residual_is_stabilizer(error: PauliString, correction: PauliString, member: int = 0) -> bool:
    """True iff ``correction * error`` lies in the member's stabilizer group (sign ignored)."""
    return conjugated_stabilizers(member).contains(correction * error, ignore_sign=True)

