"""Non-destructive discrimination (NDD) of Bell states and of the |psi_n> family.

The family circuit unbinds |psi_n> into Bell pairs with CX gates, reads the
parities ``Z Z`` and ``X X`` of each pair (plus ``Z`` of a leftover last
qubit) through phase-kickback ancillas, and rebinds.  Syndrome bit order is
``(Z1Z2, X1X2, Z3Z4, X3X4, ..., Z_n)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cluster import OrthogonalFamily, build_family, check_bits, unbind_circuit
from .errors import InvalidCodewordError, NotABellStateError
from .pauli import PauliString, conjugate_by_circuit, expectation, syndrome_measure
from .statevector import (
    GateOp,
    QuantumState,
    RngLike,
    append_zeros,
    apply_circuit,
    as_generator,
    cmx,
    cmz,
    cz,
    drop_qubits,
    fidelity,
    h,
    measure_qubits,
    reduced_density,
)

REPETITIONS = 3

BELL_LABELS = ("phi+", "phi-", "psi+", "psi-")
BELL_STATES = {
    "phi+": QuantumState.from_kets({"00": 1, "11": 1}),
    "phi-": QuantumState.from_kets({"00": 1, "11": -1}),
    "psi+": QuantumState.from_kets({"01": 1, "10": 1}),
    "psi-": QuantumState.from_kets({"01": 1, "10": -1}),
}


@dataclass(frozen=True)
class NddResult:
    syndrome: str
    post_state: QuantumState
    identified_member: int | None
    system_purity: float = 1.0


def pair_observables(n: int) -> list[PauliString]:
    """Observables read by the ancillas, expressed on the unbound register."""
    obs = []
    for i in range(0, n - 1, 2):
        for letter in ("Z", "X"):
            letters = ["I"] * n
            letters[i] = letters[i + 1] = letter
            obs.append(PauliString.from_letters(letters))
    if n % 2:
        obs.append(PauliString.single(n, "Z", n - 1))
    return obs


@lru_cache(maxsize=None)
def ndd_observables(n: int) -> tuple[PauliString, ...]:
    """The same observables pulled back onto the bound |psi_n> register."""
    unbind = unbind_circuit(n)
    return tuple(conjugate_by_circuit(o, unbind) for o in pair_observables(n))


def ndd_circuit(n: int, offset: int | None = None) -> list[GateOp]:
    """Gate list on ``n`` system qubits with ``n`` ancillas starting at ``offset`` (default ``n``)."""
    offset = n if offset is None else offset
    anc = list(range(offset, offset + n))
    gates: list[GateOp] = list(unbind_circuit(n))
    gates.append(h(*anc))
    k = 0
    for i in range(0, n - 1, 2):
        gates.append(cmz(anc[k], i, i + 1))
        gates.append(cmx(anc[k + 1], i, i + 1))
        k += 2
    if n % 2:
        gates.append(cz(anc[k], n - 1))
    gates.extend(unbind_circuit(n))
    gates.append(h(*anc))
    return gates


def _run_circuit(state: QuantumState, n: int, rng: RngLike) -> tuple[str, QuantumState, float]:
    # qubits beyond the first n (e.g. an eavesdropper's probe) ride along untouched
    total = state.num_qubits
    full = apply_circuit(append_zeros(state, n), ndd_circuit(n, total))
    anc = list(range(total, total + n))
    bits, post = measure_qubits(full, anc, rng)
    purity = reduced_density(post, list(range(n))).purity()
    return bits, drop_qubits(post, anc, bits), purity


def projective_syndrome(state: QuantumState, n: int, tol: float = 1e-8) -> str:
    """Deterministic syndrome from expectation values; the state must be a family member."""
    bits = []
    for o in ndd_observables(n):
        ev = expectation(state, o)
        if abs(abs(ev) - 1.0) > tol:
            raise InvalidCodewordError(f"state is not an eigenstate of {o} (<O> = {ev:.6f})")
        bits.append("0" if ev > 0 else "1")
    return "".join(bits)


def projective_ndd(state: QuantumState, n: int, rng: RngLike = None) -> tuple[str, QuantumState]:
    """Measure the NDD observables directly, one after another."""
    gen = as_generator(rng)
    bits = []
    for o in ndd_observables(n):
        b, state = syndrome_measure(state, o, gen)
        bits.append(str(b))
    return "".join(bits), state


def ndd_general(
    state: QuantumState,
    n: int | None = None,
    rng: RngLike = None,
    family: OrthogonalFamily | None = None,
    repetitions: int = REPETITIONS,
) -> NddResult:
    """Run the ancilla circuit; disagreement across seeded repetitions flags an invalid codeword.

    Repetitions re-run the circuit on copies of the same input, which only a
    simulator can do; the returned post-state comes from the first run.
    """
    n = state.num_qubits if n is None else n
    if state.num_qubits < n:
        raise ValueError(f"expected at least {n} qubits, got {state.num_qubits}")
    gen = as_generator(rng)
    runs = [_run_circuit(state, n, gen) for _ in range(max(1, repetitions))]
    syndromes = [r[0] for r in runs]
    if len(set(syndromes)) > 1:
        raise InvalidCodewordError(f"non-deterministic syndromes {syndromes}: input outside the family", syndromes)
    syndrome, post, purity = runs[0]
    if family is None and n <= 10:
        family = build_family(n)
    member = family.index_of_syndrome(syndrome) if family is not None else None
    return NddResult(syndrome, post, member, purity)


def ndd_family(state: QuantumState, family: OrthogonalFamily, rng: RngLike = None) -> NddResult:
    return ndd_general(state, family.n, rng, family)


def decode_message(syndrome: str, family: OrthogonalFamily) -> str:
    check_bits(syndrome, family.n)
    k = family.index_of_syndrome(syndrome)
    if k is None:
        raise InvalidCodewordError(f"syndrome {syndrome} matches no family member", [syndrome])
    return family.message(k)


def bell_circuit() -> list[GateOp]:
    """Two system qubits, ancilla 2 reads Z1Z2 and ancilla 3 reads X1X2."""
    return [h(2, 3), cmz(2, 0, 1), cmx(3, 0, 1), h(2, 3)]


def bell_ndd(state: QuantumState, rng: RngLike = None) -> NddResult:
    """Discriminate a Bell state; syndrome is (Z1Z2 bit, X1X2 bit)."""
    if state.num_qubits != 2:
        raise ValueError("Bell NDD needs a two-qubit state")
    fids = [fidelity(state, BELL_STATES[k]) for k in BELL_LABELS]
    best = int(np.argmax(fids))
    if fids[best] < 1 - 1e-8:
        raise NotABellStateError(f"input is not a Bell state (best fidelity {fids[best]:.6f})")
    full = apply_circuit(append_zeros(state, 2), bell_circuit())
    bits, post = measure_qubits(full, [2, 3], rng)
    purity = reduced_density(post, [0, 1]).purity()
    return NddResult(bits, drop_qubits(post, [2, 3], bits), best, purity)
