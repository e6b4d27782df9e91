"""Security and efficiency figures: passive entropy, decoy statistics, probe attacks, eta."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Sequence

import numpy as np
from scipy.stats import unitary_group

from .adversary import InterceptResend
from .channel import Channel, prepare_decoys
from .cluster import OrthogonalFamily, build_family, build_lu_equivalent
from .pauli import embed
from .protocol import decoy_check, measure_decoys
from .qec import STABILIZERS
from .statevector import (
    DensityMatrix,
    QuantumState,
    RngLike,
    append_zeros,
    apply_matrix,
    as_generator,
    reduced_density,
    von_neumann_entropy,
)

MAX_PROBE_DIM = 8


# -- efficiency --------------------------------------------------------------

def efficiency(c: int, q: int, b: int = 0) -> Fraction:
    """eta = c / (q + b) as an exact rational."""
    if q + b <= 0:
        raise ZeroDivisionError("q + b must be positive")
    if min(c, q, b) < 0:
        raise ValueError("resource counts are non-negative")
    return Fraction(c, q + b)


@dataclass(frozen=True)
class Resources:
    c: int  # message bits exchanged
    q: int  # qubits consumed
    b: int  # extra classical bits for decoding

    @property
    def eta(self) -> Fraction:
        return efficiency(self.c, self.q, self.b)


def dialogue_resources(rounds: int = 1, secure_channel: bool = True, n: int = 5, blocks: int = 1) -> Resources:
    """Count for ``rounds`` two-way exchanges on ``blocks`` reused registers.

    Each direction spends n NDD ancillas per register; an insecure channel
    also spends n decoys per register per direction.
    """
    if rounds < 1 or blocks < 1:
        raise ValueError("rounds and blocks must be positive")
    per_round = 2 * n * blocks
    q = n * blocks + rounds * per_round
    if not secure_channel:
        q += rounds * per_round
    return Resources(rounds * per_round, q, 0)


def dialogue_efficiency(rounds: int = 1, secure_channel: bool = True, n: int = 5) -> Fraction:
    return dialogue_resources(rounds, secure_channel, n).eta


# -- passive attack ------------------------------------------------------------

def _members(source: OrthogonalFamily | Sequence[QuantumState]) -> list[QuantumState]:
    return list(source.members) if isinstance(source, OrthogonalFamily) else list(source)


def passive_attack_entropy(source: OrthogonalFamily | Sequence[QuantumState]) -> float:
    """Entropy in bits of the uniform mixture over all members."""
    members = _members(source)
    if not members:
        raise ValueError("no states given")
    return von_neumann_entropy(DensityMatrix.mixture(members))


def subset_entropy(source: OrthogonalFamily | Sequence[QuantumState], qubits: Sequence[int]) -> float:
    """Entropy of the uniform mixture reduced to ``qubits`` (0-based)."""
    members = _members(source)
    rho = sum(reduced_density(m, qubits).entries for m in members) / len(members)
    return von_neumann_entropy(DensityMatrix(rho))


def disclosure_entropies(source: OrthogonalFamily | Sequence[QuantumState]) -> dict[str, float]:
    """Entropy of what an eavesdropper holds after each sequence of a reverse-order send.

    Keys name the 1-based qubits held, e.g. ``"5"``, ``"4,5"``, ... ``"1,2,3,4,5"``.
    """
    members = _members(source)
    n = members[0].num_qubits
    order = list(range(n - 1, -1, -1))
    out = {}
    for held in accumulate([[q] for q in order]):
        key = ",".join(str(q + 1) for q in sorted(held))
        out[key] = subset_entropy(members, sorted(held))
    return out


# -- intercept-resend on decoys -----------------------------------------------

@dataclass(frozen=True)
class DecoyTrial:
    matched: int
    errors: int
    decoys_sent: int

    @property
    def detected(self) -> bool:
        return self.errors > 0

    @property
    def error_rate(self) -> float:
        return self.errors / self.matched if self.matched else float("nan")


def intercept_resend_trial(matched_target: int, rng: RngLike = None, batch: int = 8) -> DecoyTrial:
    """Send decoys through an intercept-resend Eve until ``matched_target`` bases match."""
    gen = as_generator(rng)
    eve = InterceptResend()
    channel = Channel([], 0, "alice")
    matched = errors = sent = 0
    while matched < matched_target:
        decoys = prepare_decoys(batch, gen)
        eve.intercept(channel, decoys, gen)
        meas = measure_decoys(channel, decoys, gen)
        sent += batch
        for d, (basis, bit) in zip(decoys, meas):
            if matched == matched_target:
                break
            check = decoy_check([d.prepared], [(basis, bit)])
            if check.inconclusive:
                continue
            matched += 1
            errors += check.errors
    return DecoyTrial(matched, errors, sent)


def intercept_resend_error_rate(comparisons: int = 10_000, rng: RngLike = None) -> float:
    """Pooled error fraction over ``comparisons`` matched-basis decoys."""
    trial = intercept_resend_trial(comparisons, rng, batch=256)
    return trial.error_rate


def intercept_resend_detection(k: int, trials: int = 10_000, rng: RngLike = None) -> float:
    """Fraction of trials in which at least one of ``k`` matched decoys shows an error."""
    gen = as_generator(rng)
    hits = sum(intercept_resend_trial(k, gen, batch=2 * k).detected for _ in range(trials))
    return hits / trials


def detection_model(k: int) -> float:
    return 1.0 - 0.75 ** k


# -- entangling probe ----------------------------------------------------------

@dataclass(frozen=True)
class ProbeReport:
    detection_probability: float
    eve_information: float
    pass_probability: float


def _check_probe(unitary: np.ndarray, probe_dim: int, targets: int) -> np.ndarray:
    if probe_dim < 2 or probe_dim > MAX_PROBE_DIM or probe_dim & (probe_dim - 1):
        raise ValueError(f"probe_dim must be a power of two in [2, {MAX_PROBE_DIM}]")
    u = np.asarray(unitary, dtype=complex)
    d = 2 ** targets * probe_dim
    if u.shape != (d, d):
        raise ValueError(f"probe unitary must be {d}x{d}")
    if not np.allclose(u.conj().T @ u, np.eye(d), atol=1e-8):
        raise ValueError("probe operator is not unitary")
    return u


def probe_attack_analysis(probe_unitary: np.ndarray, probe_dim: int = 2, targets: Sequence[int] = (1, 3),
                          eve_holds: Sequence[int] = ()) -> ProbeReport:
    """Detection and Holevo information for a probe coupled to system qubits ``targets`` (0-based).

    Detection is one minus the weight of the attacked state inside the joint
    +1 eigenspace of the five generators.  Information is the Holevo
    quantity of Eve's reduced states (probe plus any system qubits in
    ``eve_holds``) over the uniform message ensemble, each state conditioned
    on passing that check.
    """
    targets = list(targets)
    u = _check_probe(probe_unitary, probe_dim, len(targets))
    k = probe_dim.bit_length() - 1
    n = 5
    family = build_family(n)
    base = append_zeros(build_lu_equivalent(n), k)
    attacked = apply_matrix(base, u, [*targets, *range(n, n + k)]).amplitudes
    projected = attacked
    for g in STABILIZERS:
        gm = embed(g, n + k).to_matrix()
        projected = (projected + gm @ projected) / 2
    pass_prob = float(np.vdot(projected, projected).real)
    detection = max(0.0, 1.0 - pass_prob)
    if pass_prob < 1e-12:
        return ProbeReport(1.0, 0.0, 0.0)

    kept = QuantumState(projected / np.sqrt(pass_prob), n + k)
    keep = sorted({*eve_holds, *range(n, n + k)})
    reduced = []
    for enc in family.encodings:
        p = embed(enc.pauli(), n + k)
        state = QuantumState(p.to_matrix() @ kept.amplitudes, n + k)
        reduced.append(reduced_density(state, keep).entries)
    avg = DensityMatrix(sum(reduced) / len(reduced))
    info = von_neumann_entropy(avg) - float(np.mean([von_neumann_entropy(DensityMatrix(r)) for r in reduced]))
    return ProbeReport(detection, max(0.0, info), pass_prob)


def trivial_probe(v: np.ndarray, targets: int = 2) -> np.ndarray:
    """Identity on the attacked qubits, ``v`` on the probe: never entangles."""
    v = np.asarray(v, dtype=complex)
    return np.kron(np.eye(2 ** targets), v)


def cx_probe() -> np.ndarray:
    """CX from the first attacked qubit onto a one-qubit probe, identity on the second."""
    cx = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    # order (q_a, q_b, probe): permute CX(q_a -> probe) past q_b
    full = np.kron(cx, np.eye(2)).reshape([2] * 6)
    # kron(cx, I) acts on (q_a, probe, q_b); swap the last two factors on both sides
    full = full.transpose(0, 2, 1, 3, 5, 4).reshape(8, 8)
    return full


def random_probe(probe_dim: int = 2, targets: int = 2, rng: RngLike = None) -> np.ndarray:
    """Haar-random unitary on (attacked qubits) x probe."""
    gen = as_generator(rng)
    return unitary_group.rvs(2 ** targets * probe_dim, random_state=gen)
