"""Two-way dialogue over |psi_n> registers with decoy-checked, sequence-by-sequence transfer.

Alice encodes one n-bit block per register, splits the registers into n
sequences (sequence i holds qubit i of every register), pads each with
decoys and sends them in reverse order, checking decoys after each.  Bob
decodes by NDD, encodes his own blocks on the same registers and sends
them back the same way.  Alice strips her own encoding from the syndrome
she reads.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import qec
from .adversary import Adversary
from .channel import Channel, DecoyQubit, Entry, MessageQubit, OwnershipError, decoy_basis, decoy_bit, prepare_decoys
from .cluster import build_family, build_lu_equivalent, check_bits, compose, encode_message, message_of
from .errors import InvalidCodewordError, UncorrectableError
from .ndd import ndd_general
from .pauli import apply_pauli, embed
from .statevector import MAX_QUBITS, QuantumState, RngLike, as_generator, fidelity

DEFAULT_THRESHOLD = 0.25
MAX_DECOY_RETRIES = 64

STATUS_OK = "ok"
STATUS_EAVESDROP = "eavesdrop-abort"
STATUS_INVALID = "invalid-codeword"
STATUS_UNCORRECTABLE = "uncorrectable-error"


def chunk_message(bits: str, block: int = 5) -> tuple[list[str], int]:
    """Split into ``block``-bit pieces, zero-padding the last on the right."""
    check_bits(bits)
    if not bits:
        raise ValueError("empty message")
    pad = (-len(bits)) % block
    padded = bits + "0" * pad
    return [padded[i:i + block] for i in range(0, len(padded), block)], pad


def join_blocks(blocks: Sequence[str], pad: int) -> str:
    joined = "".join(blocks)
    return joined[: len(joined) - pad] if pad else joined


@dataclass
class TransmitSequence:
    label: int  # 1-based qubit position shared by every message qubit in it
    entries: list[Entry]

    @property
    def decoys(self) -> list[DecoyQubit]:
        return [e for e in self.entries if isinstance(e, DecoyQubit)]

    @property
    def message_qubits(self) -> list[MessageQubit]:
        return [e for e in self.entries if isinstance(e, MessageQubit)]

    def decoy_positions(self) -> list[int]:
        return [i for i, e in enumerate(self.entries) if isinstance(e, DecoyQubit)]

    def layout(self) -> list[str]:
        """Human-readable entries, e.g. ``['|0>', 'q1^1', 'q1^2', '|1>']``."""
        return [f"|{e.prepared}>" if isinstance(e, DecoyQubit) else f"q{e.qubit + 1}^{e.register + 1}"
                for e in self.entries]


def insert_decoys(message_qubits: Sequence[MessageQubit], rng: RngLike = None,
                  count: int | None = None, label: int = 0) -> TransmitSequence:
    """Interleave ``count`` (default: as many as message qubits) fresh decoys at random positions."""
    if not message_qubits:
        raise ValueError("a sequence needs at least one message qubit")
    gen = as_generator(rng)
    count = len(message_qubits) if count is None else count
    if count < 1:
        raise ValueError("at least one decoy per sequence")
    decoys = prepare_decoys(count, gen)
    total = len(message_qubits) + count
    slots = set(int(i) for i in gen.choice(total, size=count, replace=False))
    msg, dec = iter(message_qubits), iter(decoys)
    entries: list[Entry] = []
    for pos in range(total):
        if pos in slots:
            d = next(dec)
            d.position = pos
            entries.append(d)
        else:
            entries.append(next(msg))
    return TransmitSequence(label, entries)


@dataclass(frozen=True)
class DecoyCheck:
    matched: int
    errors: int
    error_rate: float | None
    passed: bool
    inconclusive: bool


def decoy_check(sender_records: Sequence[str], receiver_measurements: Sequence[tuple[str, int]],
                threshold: float = DEFAULT_THRESHOLD, min_comparisons: int = 1) -> DecoyCheck:
    """Compare prepared decoys against the receiver's (basis, bit) results.

    Only matched-basis pairs count.  Passing needs ``error_rate < threshold``
    over at least ``min_comparisons`` matched pairs; fewer is inconclusive.
    """
    if len(sender_records) != len(receiver_measurements):
        raise ValueError("one receiver measurement per decoy is required")
    matched = errors = 0
    for prepared, (basis, bit) in zip(sender_records, receiver_measurements):
        if decoy_basis(prepared) != basis:
            continue
        matched += 1
        errors += int(decoy_bit(prepared) != bit)
    if matched < max(1, min_comparisons):
        return DecoyCheck(matched, errors, None, False, True)
    rate = errors / matched
    return DecoyCheck(matched, errors, rate, rate < threshold, False)


def measure_decoys(channel: Channel, decoys: Sequence[DecoyQubit], rng: RngLike = None) -> list[tuple[str, int]]:
    gen = as_generator(rng)
    out = []
    for d in decoys:
        basis = "Z" if gen.random() < 0.5 else "X"
        out.append((basis, channel.measure(d, basis, gen)))
    return out


def transmit_sequence(channel: Channel, seq: TransmitSequence, adversary: Adversary, receiver: str,
                      rng: RngLike = None) -> list[dict]:
    """Put ``seq`` in flight, let the adversary act, hand the message qubits to ``receiver``."""
    channel.transfer(seq.message_qubits, "in-flight")
    events = adversary.intercept(channel, seq.entries, rng)
    for j in {m.register for m in seq.message_qubits}:
        if channel.registers[j].num_qubits > MAX_QUBITS:
            raise ValueError(f"register {j} grew past {MAX_QUBITS} qubits; use a smaller probe")
    channel.transfer(seq.message_qubits, receiver)
    return events


@dataclass
class NoiseSpec:
    """Per-transfer noise on every register, optionally corrected by the receiver.

    Correction measures the conjugated generators of the member the sender
    encoded.  That label is not available to a real receiver, so enabling
    it models an ideal corrector.
    """

    channel: qec.NoiseChannel
    correct: bool = True


@dataclass
class DialogueTranscript:
    config: dict
    seeds: dict
    directions: list[dict] = field(default_factory=list)
    syndromes: dict = field(default_factory=dict)
    decoded: dict = field(default_factory=dict)
    aborted: bool = False
    abort_reason: str | None = None
    status: str = STATUS_OK
    pads: dict = field(default_factory=dict)
    final_members: list[str] = field(default_factory=list)
    registers: list[QuantumState] = field(default_factory=list, repr=False)

    @property
    def sequences(self) -> list[dict]:
        return [s for d in self.directions for s in d["sequences"]]

    def success(self) -> bool:
        return self.status == STATUS_OK

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "seeds": self.seeds,
            "pads": self.pads,
            "directions": self.directions,
            "sequences": self.sequences,
            "syndromes": self.syndromes,
            "decoded": self.decoded,
            "aborted": self.aborted,
            "abort_reason": self.abort_reason,
            "status": self.status,
            "final_members": self.final_members,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


class _Abort(Exception):
    def __init__(self, status: str, reason: str):
        super().__init__(reason)
        self.status = status
        self.reason = reason


def _spawn(master_seed: int) -> tuple[dict[str, np.random.Generator], dict]:
    roles = ("alice", "bob", "adversary", "noise", "ndd")
    children = np.random.SeedSequence(master_seed).spawn(len(roles))
    gens = {r: np.random.default_rng(c) for r, c in zip(roles, children)}
    seeds = {"master": master_seed, "derivation": "numpy SeedSequence(master).spawn",
             "streams": {r: i for i, r in enumerate(roles)}}
    return gens, seeds


def _send_direction(channel: Channel, sender: str, receiver: str, n: int, adversary: Adversary,
                    gens: dict, sender_gen: np.random.Generator, receiver_gen: np.random.Generator,
                    decoys_per_sequence: int | None, threshold: float, min_comparisons: int,
                    record: dict) -> None:
    num_registers = len(channel.registers)
    for label in range(n, 0, -1):
        msg = [MessageQubit(j, label - 1) for j in range(num_registers)]
        for j in range(num_registers):
            if channel.owner[j, label - 1] != sender:
                raise OwnershipError(f"{sender} cannot send qubit {label} of register {j}")
        seq = insert_decoys(msg, sender_gen, decoys_per_sequence, label)
        entry = {"label": label, "sender": sender, "layout": seq.layout(),
                 "decoy_positions": seq.decoy_positions(),
                 "decoy_states": [d.prepared for d in seq.decoys],
                 "in_flight": [f"r{m.register + 1}q{m.qubit + 1}" for m in msg]}
        events = transmit_sequence(channel, seq, adversary, receiver, gens["adversary"])
        attempts = []
        decoys = seq.decoys
        while True:
            meas = measure_decoys(channel, decoys, receiver_gen)
            check = decoy_check([d.prepared for d in decoys], meas, threshold, min_comparisons)
            attempts.append({"decoy_states": [d.prepared for d in decoys],
                             "bases": [b for b, _ in meas], "outcomes": [o for _, o in meas],
                             "matched": check.matched, "errors": check.errors,
                             "error_rate": check.error_rate, "pass": check.passed,
                             "inconclusive": check.inconclusive})
            if not check.inconclusive or len(attempts) > MAX_DECOY_RETRIES:
                break
            # inconclusive: a fresh batch of decoys crosses the channel
            decoys = prepare_decoys(len(decoys), sender_gen)
            events += adversary.intercept(channel, decoys, gens["adversary"])
        last = attempts[-1]
        entry.update({"bases": last["bases"], "outcomes": last["outcomes"], "matched": last["matched"],
                      "errors": last["errors"], "error_rate": last["error_rate"], "pass": last["pass"],
                      "attempts": attempts, "adversary_events": events})
        record["sequences"].append(entry)
        if not last["pass"]:
            if last["inconclusive"]:
                why = "decoy check inconclusive after retries"
            else:
                why = f"decoy error rate {last['error_rate']:.4f} >= threshold {threshold}"
            raise _Abort(STATUS_EAVESDROP, f"{sender}->{receiver} sequence S{label}: {why}")


def _apply_noise(channel: Channel, noise: NoiseSpec | None, members: list[int], gens: dict, record: dict) -> None:
    if noise is None:
        return
    family = build_family(channel.system_size)
    for j in range(len(channel.registers)):
        state, err = qec.apply_noise(channel.registers[j], noise.channel, gens["noise"])
        channel.registers[j] = state
        event = {"register": j + 1, "error": err.label() if err else None}
        if noise.correct:
            try:
                state, syndrome, corr = qec.correct(state, members[j], gens["noise"], family)
            except UncorrectableError as exc:
                raise _Abort(STATUS_UNCORRECTABLE, f"register {j + 1}: uncorrectable syndrome {exc}") from exc
            channel.registers[j] = state
            event.update({"syndrome": syndrome, "correction": corr.label()})
        record["noise_events"].append(event)


def _ndd_decode(channel: Channel, n: int, family, gens: dict, who: str) -> list[tuple[str, int]]:
    out = []
    for j, state in enumerate(channel.registers):
        try:
            res = ndd_general(state, n, gens["ndd"], family)
        except InvalidCodewordError as exc:
            raise _Abort(STATUS_INVALID, f"{who} NDD on register {j + 1}: {exc}") from exc
        if res.identified_member is None:
            raise _Abort(STATUS_INVALID, f"{who} NDD on register {j + 1}: syndrome {res.syndrome} outside the family")
        channel.registers[j] = res.post_state
        out.append((res.syndrome, res.identified_member))
    return out


def _xor(a: str, b: str) -> str:
    return "".join("1" if x != y else "0" for x, y in zip(a, b))


def run_dialogue(alice_bits: str, bob_bits: str, adversary: Adversary | None = None,
                 noise: NoiseSpec | qec.NoiseChannel | None = None, master_seed: int = 0,
                 decoys_per_sequence: int | None = None, threshold: float = DEFAULT_THRESHOLD,
                 min_comparisons: int = 1, n: int = 5,
                 registers: Sequence[QuantumState] | None = None) -> DialogueTranscript:
    """One full round: Alice -> Bob, then Bob -> Alice on the same registers.

    ``registers`` lets a later round reuse states from an earlier one; they
    must hold |psi_n> (see :func:`reset_registers`).
    """
    adversary = adversary or Adversary()
    if isinstance(noise, qec.NoiseChannel):
        noise = NoiseSpec(noise)
    if noise is not None and n != qec.N_QUBITS:
        raise ValueError("noise correction is defined for n = 5 only")
    alice_blocks, alice_pad = chunk_message(alice_bits, n)
    bob_blocks, bob_pad = chunk_message(bob_bits, n)
    if len(bob_blocks) > len(alice_blocks):
        raise ValueError("Bob's message needs more registers than Alice sent")
    extra = len(alice_blocks) - len(bob_blocks)
    bob_blocks += ["0" * n] * extra
    bob_pad += extra * n

    family = build_family(n)
    gens, seeds = _spawn(master_seed)
    num_registers = len(alice_blocks)
    if registers is None:
        registers = [build_lu_equivalent(n) for _ in range(num_registers)]
    elif len(registers) != num_registers:
        raise ValueError(f"need {num_registers} registers, got {len(registers)}")

    config = {"alice": alice_bits, "bob": bob_bits, "n": n, "registers": num_registers,
              "adversary": adversary.describe(), "threshold": threshold,
              "min_comparisons": min_comparisons,
              "decoys_per_sequence": num_registers if decoys_per_sequence is None else decoys_per_sequence,
              "noise": None if noise is None else {"p": noise.channel.p, "kind": noise.channel.kind.value,
                                                   "correct": noise.correct},
              "master_seed": master_seed}
    tr = DialogueTranscript(config, seeds, pads={"alice": alice_pad, "bob": bob_pad})
    channel = Channel(list(registers), n, "alice")
    alice_ops = [encode_message(b, n) for b in alice_blocks]
    try:
        for j, op in enumerate(alice_ops):
            channel.apply_pauli("alice", j, op.pauli())
        fwd = {"sender": "alice", "receiver": "bob", "sequences": [], "noise_events": []}
        tr.directions.append(fwd)
        _send_direction(channel, "alice", "bob", n, adversary, gens, gens["alice"], gens["bob"],
                        decoys_per_sequence, threshold, min_comparisons, fwd)
        _apply_noise(channel, noise, [family.index_of_message(b) for b in alice_blocks], gens, fwd)
        got = _ndd_decode(channel, n, family, gens, "bob")
        tr.syndromes["bob"] = [s for s, _ in got]
        bob_view = [family.message(k) for _, k in got]
        tr.decoded["bob"] = join_blocks(bob_view, alice_pad)

        bob_ops = [encode_message(b, n) for b in bob_blocks]
        for j, op in enumerate(bob_ops):
            channel.apply_pauli("bob", j, op.pauli())
        back = {"sender": "bob", "receiver": "alice", "sequences": [], "noise_events": []}
        tr.directions.append(back)
        _send_direction(channel, "bob", "alice", n, adversary, gens, gens["bob"], gens["alice"],
                        decoys_per_sequence, threshold, min_comparisons, back)
        # the corrector is told the joint member Bob's qubits now carry
        joint = [family.index_of_message(message_of(compose(a, b))) for a, b in zip(alice_ops, bob_ops)]
        _apply_noise(channel, noise, joint, gens, back)
        got = _ndd_decode(channel, n, family, gens, "alice")
        tr.syndromes["alice"] = [s for s, _ in got]
        tr.final_members = [family.message(k) for _, k in got]
        alice_view = [_xor(family.message(k), a) for (_, k), a in zip(got, alice_blocks)]
        tr.decoded["alice"] = join_blocks(alice_view, bob_pad)
        if noise is not None and (tr.decoded["bob"] != alice_bits or tr.decoded["alice"] != bob_bits):
            raise _Abort(STATUS_UNCORRECTABLE, "decoded messages differ from the sent ones after noise")
    except _Abort as exc:
        tr.aborted = True
        tr.status = exc.status
        tr.abort_reason = exc.reason
    tr.registers = channel.registers
    return tr


def reset_registers(transcript: DialogueTranscript) -> list[QuantumState]:
    """Undo both encodings so the registers hold |psi_n> again."""
    n = transcript.config["n"]
    out = []
    for state, member in zip(transcript.registers, transcript.final_members):
        inverse = encode_message(member, n)  # Pauli encodings are self-inverse up to phase
        out.append(apply_pauli(state, embed(inverse.pauli(), state.num_qubits)))
    return out


def run_rounds(pairs: Sequence[tuple[str, str]], master_seed: int = 0, **kwargs) -> list[DialogueTranscript]:
    """Several dialogue rounds reusing the same registers; stops after the first failed round."""
    gen = np.random.SeedSequence(master_seed)
    seeds = [int(s.generate_state(1)[0]) for s in gen.spawn(len(pairs))]
    out: list[DialogueTranscript] = []
    registers = None
    for (a, b), seed in zip(pairs, seeds):
        tr = run_dialogue(a, b, master_seed=seed, registers=registers, **kwargs)
        out.append(tr)
        if not tr.success():
            break
        registers = reset_registers(tr)
    return out


def register_fidelities(transcript: DialogueTranscript) -> list[float]:
    """Fidelity of each final register with the family member its syndrome named."""
    n = transcript.config["n"]
    family = build_family(n)
    return [fidelity(state, family.member_for_message(m)) for state, m in
            zip(transcript.registers, transcript.final_members)
            if state.num_qubits == n]
