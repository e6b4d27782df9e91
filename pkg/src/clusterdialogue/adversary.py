"""Eavesdroppers acting on qubits while they are in flight."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .channel import Channel, DecoyQubit, Entry, MessageQubit
from .statevector import RngLike, as_generator


class Adversary:
    """No eavesdropper."""

    kind = "none"

    def intercept(self, channel: Channel, entries: Sequence[Entry], rng: RngLike = None) -> list[dict]:
        return []

    def describe(self) -> dict:
        return {"kind": self.kind}


class InterceptResend(Adversary):
    """Measure every in-flight qubit in a random Z/X basis and forward the observed eigenstate."""

    kind = "intercept-resend"

    def intercept(self, channel, entries, rng=None):
        gen = as_generator(rng)
        events = []
        for e in entries:
            basis = "Z" if gen.random() < 0.5 else "X"
            bit = channel.measure(e, basis, gen)
            events.append({"target": _name(e), "basis": basis, "outcome": bit})
        return events


class CustomProbe(Adversary):
    """Couple a fresh probe register to every in-flight qubit through ``unitary``.

    ``unitary`` acts on (in-flight qubit) x (probe), the qubit being the
    most significant factor; ``probe_dim`` must be a power of two.
    """

    kind = "custom-probe"

    def __init__(self, unitary: np.ndarray, probe_dim: int = 2):
        if probe_dim < 2 or probe_dim & (probe_dim - 1):
            raise ValueError("probe_dim must be a power of two >= 2")
        unitary = np.asarray(unitary, dtype=complex)
        d = 2 * probe_dim
        if unitary.shape != (d, d):
            raise ValueError(f"probe unitary must be {d}x{d}")
        if not np.allclose(unitary.conj().T @ unitary, np.eye(d), atol=1e-8):
            raise ValueError("probe operator is not unitary")
        self.unitary = unitary
        self.probe_dim = probe_dim
        self.probe_qubits = probe_dim.bit_length() - 1

    def intercept(self, channel, entries, rng=None):
        for e in entries:
            channel.couple(e, self.unitary, self.probe_qubits)
        return [{"target": _name(e), "probe_qubits": self.probe_qubits} for e in entries]

    def describe(self):
        return {"kind": self.kind, "probe_dim": self.probe_dim}


def _name(e: Entry) -> str:
    if isinstance(e, DecoyQubit):
        return f"decoy@{e.position}"
    assert isinstance(e, MessageQubit)
    return f"r{e.register}q{e.qubit + 1}"


def make_adversary(kind: str, **params) -> Adversary:
    if kind == "none":
        return Adversary()
    if kind == "intercept-resend":
        return InterceptResend()
    if kind == "custom-probe":
        return CustomProbe(**params)
    raise ValueError(f"unknown adversary kind {kind!r}")
