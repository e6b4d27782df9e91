"""Linear cluster states, their LU-equivalent |psi_n>, and the message encoder.

Qubit positions in public APIs that mirror the protocol description
(encoding positions, labels such as ``XZ1*Z3*I5``) are 1-based; everything
that indexes a statevector is 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import EncodingSelectionError
from .pauli import LETTERS, PauliString, apply_pauli
from .statevector import (
    MAX_QUBITS,
    GateOp,
    QuantumState,
    apply_circuit,
    cx,
    cz,
    h,
)

MAX_FAMILY_QUBITS = 10

_XZ_LETTER = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "XZ"}
_LETTER_XZ = {v: k for k, v in _XZ_LETTER.items()}


@dataclass(frozen=True)
class ClusterSpec:
    n: int

    def __post_init__(self):
        if not 2 <= self.n <= MAX_QUBITS:
            raise ValueError(f"cluster size must be in 2..{MAX_QUBITS}, got {self.n}")


def _spec(spec: ClusterSpec | int) -> ClusterSpec:
    return spec if isinstance(spec, ClusterSpec) else ClusterSpec(int(spec))


def check_bits(bits: str, length: int | None = None) -> str:
    if not isinstance(bits, str) or not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a bit string: {bits!r}")
    if length is not None and len(bits) != length:
        raise ValueError(f"expected {length} bits, got {len(bits)} ({bits!r})")
    return bits


# -- circuits ---------------------------------------------------------------

def cluster_circuit(n: int) -> list[GateOp]:
    """H on every qubit, then CZ along the chain."""
    return [h(*range(n))] + [cz(i, i + 1) for i in range(n - 1)]


def lu_circuit(n: int) -> list[GateOp]:
    """Cluster circuit followed by H on the odd (1-based) qubits."""
    return cluster_circuit(n) + [h(*range(0, n, 2))]


def unbind_circuit(n: int) -> list[GateOp]:
    """CX from each even (1-based) qubit onto its right neighbour.

    Maps |psi_n> to Bell pairs on (1,2), (3,4), ... and |0> on a leftover
    last qubit.  The gates act on disjoint qubits, so the circuit is its own
    inverse.
    """
    return [cx(i, i + 1) for i in range(1, n - 1, 2)]


def bell_pair_circuit(n: int) -> list[GateOp]:
    """Prepare |psi_n> from |0...0> through Bell pairs (the five-qubit version is H1 H3, CX12 CX34, CX23 CX45)."""
    starts = range(0, n - 1, 2)
    return [h(*starts)] + [cx(i, i + 1) for i in starts] + unbind_circuit(n)


def build_cluster(spec: ClusterSpec | int) -> QuantumState:
    n = _spec(spec).n
    return apply_circuit(QuantumState.zeros(n), cluster_circuit(n))


def build_lu_equivalent(spec: ClusterSpec | int) -> QuantumState:
    n = _spec(spec).n
    return apply_circuit(QuantumState.zeros(n), lu_circuit(n))


# -- encoding ---------------------------------------------------------------

def select_encoding_qubits(n: int) -> tuple[int, tuple[int, ...]]:
    """Number of encoding qubits and their 1-based positions (1, 3, 5, ...)."""
    if n < 2:
        raise ValueError("need at least two qubits")
    m = (n + 1) // 2
    return m, tuple(range(1, 2 * m, 2))


@dataclass(frozen=True)
class EncodingOp:
    """Letters from {I, X, Z, XZ} placed on 0-based ``positions`` of an ``n``-qubit register."""

    n: int
    positions: tuple[int, ...]
    factors: tuple[str, ...]

    def __post_init__(self):
        if len(self.positions) != len(self.factors):
            raise ValueError("one factor per encoding position")
        for f in self.factors:
            if f not in LETTERS:
                raise ValueError(f"factor {f!r} is not in G = {{I, X, Z, XZ}}")
        if any(not 0 <= p < self.n for p in self.positions):
            raise ValueError("encoding position out of range")

    def pauli(self) -> PauliString:
        letters = ["I"] * self.n
        for p, f in zip(self.positions, self.factors):
            letters[p] = f
        return PauliString.from_letters(letters)

    def label(self) -> str:
        return "*".join(f"{f}{p + 1}" for p, f in zip(self.positions, self.factors))

    def is_identity(self) -> bool:
        return all(f == "I" for f in self.factors)

    def __str__(self) -> str:
        return self.label()


def _positions0(n: int, positions: Sequence[int] | None) -> tuple[int, ...]:
    if positions is None:
        positions = select_encoding_qubits(n)[1]
    pos = tuple(int(p) - 1 for p in positions)
    if len(pos) != (n + 1) // 2:
        raise ValueError(f"{n} qubits need {(n + 1) // 2} encoding positions")
    return pos


def encode_message(bits: str, n: int | None = None, positions: Sequence[int] | None = None) -> EncodingOp:
    """Map message bits to an encoding operation.

    The first ``m`` bits set X on each encoding position, the remaining
    ``n - m`` bits set Z on the first ``n - m`` positions.  For odd ``n`` the
    last position therefore only ever carries I or X.  For ``n = 5`` this is
    ``X^{m1}Z^{m4} (x) X^{m2}Z^{m5} (x) X^{m3}`` on qubits 1, 3, 5.
    """
    n = len(bits) if n is None else n
    check_bits(bits, n)
    pos = _positions0(n, positions)
    m = len(pos)
    xs = [int(b) for b in bits[:m]]
    zs = [int(b) for b in bits[m:]] + [0] * (2 * m - n)
    return EncodingOp(n, pos, tuple(_XZ_LETTER[a, b] for a, b in zip(xs, zs)))


def message_of(e: EncodingOp) -> str:
    """Inverse of :func:`encode_message`."""
    m = len(e.positions)
    bits = [_LETTER_XZ[f] for f in e.factors]
    if 2 * m > e.n and bits[-1][1]:
        raise ValueError(f"{e.label()} puts Z on the restricted last position")
    xs = "".join(str(b[0]) for b in bits)
    zs = "".join(str(b[1]) for b in bits[: e.n - m])
    return xs + zs


def apply_encoding(state: QuantumState, e: EncodingOp) -> QuantumState:
    if state.num_qubits != e.n:
        raise ValueError(f"encoding for {e.n} qubits applied to {state.num_qubits}-qubit state")
    return apply_pauli(state, e.pauli())


def compose(a: EncodingOp, b: EncodingOp) -> EncodingOp:
    """Group product: factor-wise multiplication in G with the phase dropped."""
    if a.n != b.n or a.positions != b.positions:
        raise ValueError("encodings belong to different families")
    factors = []
    for fa, fb in zip(a.factors, b.factors):
        xa, za = _LETTER_XZ[fa]
        xb, zb = _LETTER_XZ[fb]
        factors.append(_XZ_LETTER[xa ^ xb, za ^ zb])
    return EncodingOp(a.n, a.positions, tuple(factors))


def identity_encoding(n: int) -> EncodingOp:
    return encode_message("0" * n, n)


def all_messages(n: int) -> list[str]:
    return [format(k, f"0{n}b") for k in range(2**n)]


def build_encoding_group(spec: ClusterSpec | int, positions: Sequence[int] | None = None) -> list[EncodingOp]:
    """The ``2**n`` encoding operations, indexed by message value.

    Every candidate image must be orthogonal to the images already accepted;
    since the identity comes first this also excludes stabilizers of
    |psi_n>.  Falling short of ``2**n`` accepted operations raises
    :class:`EncodingSelectionError`.
    """
    n = _spec(spec).n
    if n > MAX_FAMILY_QUBITS:
        raise ValueError(f"dense family limited to n <= {MAX_FAMILY_QUBITS}")
    base = build_lu_equivalent(n)
    ops = [encode_message(bits, n, positions) for bits in all_messages(n)]
    images = np.column_stack([apply_encoding(base, e).amplitudes for e in ops])
    gram = np.abs(images.conj().T @ images)
    np.fill_diagonal(gram, 0.0)
    accepted = 0
    for k in range(len(ops)):
        if k and gram[k, :k].max() > 1e-10:
            continue
        accepted += 1
    if accepted != len(ops):
        raise EncodingSelectionError(
            f"positions {positions or select_encoding_qubits(n)[1]} give only {accepted} of {2**n} "
            "distinct images; choose new encoding qubits"
        )
    return ops


@dataclass(frozen=True, eq=False)
class OrthogonalFamily:
    """The ``2**n`` encoded images of |psi_n>, indexed by message value."""

    n: int
    base_state: QuantumState
    encodings: tuple[EncodingOp, ...]
    members: tuple[QuantumState, ...]
    syndromes: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.syndromes)) != len(self.syndromes):
            raise ValueError("discrimination syndromes are not distinct")
        object.__setattr__(self, "_by_syndrome", {s: i for i, s in enumerate(self.syndromes)})

    def __len__(self) -> int:
        return len(self.members)

    @property
    def messages(self) -> list[str]:
        return all_messages(self.n)

    def index_of_message(self, bits: str) -> int:
        return int(check_bits(bits, self.n), 2)

    def message(self, index: int) -> str:
        return format(index, f"0{self.n}b")

    def index_of_syndrome(self, syndrome: str) -> int | None:
        return self._by_syndrome.get(syndrome)

    def member_for_message(self, bits: str) -> QuantumState:
        return self.members[self.index_of_message(bits)]

    def gram(self) -> np.ndarray:
        mat = np.column_stack([m.amplitudes for m in self.members])
        return mat.conj().T @ mat

    def identify(self, state: QuantumState, tol: float = 1e-10) -> int | None:
        """Index of the member equal to ``state`` up to global phase, if any."""
        overlaps = np.abs(np.column_stack([m.amplitudes for m in self.members]).conj().T @ state.amplitudes) ** 2
        k = int(np.argmax(overlaps))
        return k if overlaps[k] >= 1 - tol else None

    def export_rows(self) -> list[dict]:
        rows = []
        for k, (e, member, syn) in enumerate(zip(self.encodings, self.members, self.syndromes)):
            rows.append({
                "message": self.message(k),
                "encoding": e.label(),
                "kets": [[label, round(amp.real, 12)] for label, amp in member.ket_expansion()],
                "syndrome": syn,
            })
        return rows


@lru_cache(maxsize=None)
def build_family(spec: ClusterSpec | int) -> OrthogonalFamily:
    from .ndd import projective_syndrome

    n = _spec(spec).n
    if n > MAX_FAMILY_QUBITS:
        raise ValueError(f"dense family limited to n <= {MAX_FAMILY_QUBITS}")
    base = build_lu_equivalent(n)
    encodings = build_encoding_group(n)
    members = tuple(apply_encoding(base, e) for e in encodings)
    syndromes = tuple(projective_syndrome(m, n) for m in members)
    return OrthogonalFamily(n, base, tuple(encodings), members, syndromes)
