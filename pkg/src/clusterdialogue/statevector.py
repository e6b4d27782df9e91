"""Dense statevector simulation.

Qubit 0 is the most significant bit of a basis label, so ``|10000>`` has
qubit 0 set.  Every stochastic routine takes either an integer seed or a
``numpy.random.Generator``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence, Union

import numpy as np

MAX_QUBITS = 20
NORM_TOL = 1e-10

RngLike = Union[int, np.random.Generator, None]

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def as_generator(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


class QuantumState:
    """A normalized vector of ``2**num_qubits`` complex amplitudes."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, amplitudes, num_qubits: int | None = None, *, normalize: bool = False):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if num_qubits is None:
            num_qubits = int(round(np.log2(amps.size))) if amps.size else 0
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in 1..{MAX_QUBITS}, got {num_qubits}")
        if amps.size != 2**num_qubits:
            raise ValueError(f"expected {2**num_qubits} amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if normalize:
            if norm < 1e-15:
                raise ValueError("cannot normalize a zero vector")
            amps = amps / norm
        elif abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm={norm:.12f})")
        self.num_qubits = num_qubits
        self.amplitudes = amps

    @classmethod
    def basis(cls, label: str) -> "QuantumState":
        """Computational basis state from a bit string such as ``"01101"``."""
        if not label or set(label) - {"0", "1"}:
            raise ValueError(f"invalid basis label {label!r}")
        amps = np.zeros(2 ** len(label), dtype=complex)
        amps[int(label, 2)] = 1.0
        return cls(amps, len(label))

    @classmethod
    def zeros(cls, num_qubits: int) -> "QuantumState":
        return cls.basis("0" * num_qubits)

    @classmethod
    def from_kets(cls, kets: dict[str, complex]) -> "QuantumState":
        """Build a state from ``{label: amplitude}``; the result is renormalized."""
        labels = list(kets)
        n = len(labels[0])
        amps = np.zeros(2**n, dtype=complex)
        for label, amp in kets.items():
            if len(label) != n:
                raise ValueError("all basis labels must have the same length")
            amps[int(label, 2)] += amp
        return cls(amps, n, normalize=True)

    def copy(self) -> "QuantumState":
        return QuantumState(self.amplitudes.copy(), self.num_qubits)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def ket_expansion(self, tol: float = 1e-12) -> list[tuple[str, complex]]:
        """Non-zero amplitudes as ``(label, amplitude)`` pairs in label order."""
        out = []
        for idx in np.flatnonzero(np.abs(self.amplitudes) > tol):
            out.append((format(idx, f"0{self.num_qubits}b"), complex(self.amplitudes[idx])))
        return out

    def __repr__(self) -> str:
        terms = " ".join(f"{a.real:+.4f}{a.imag:+.4f}j|{k}>" for k, a in self.ket_expansion()[:8])
        return f"QuantumState(n={self.num_qubits}, {terms})"


class GateKind(str, Enum):
    H = "H"
    X = "X"
    Z = "Z"
    CZ = "CZ"
    CX = "CX"
    CMZ = "controlled-multi-Z"
    CMX = "controlled-multi-X"


_CONTROLLED = {GateKind.CZ, GateKind.CX, GateKind.CMZ, GateKind.CMX}
_Z_TYPE = {GateKind.Z, GateKind.CZ, GateKind.CMZ}
_X_TYPE = {GateKind.X, GateKind.CX, GateKind.CMX}


@dataclass(frozen=True)
class GateOp:
    kind: GateKind
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        if not self.targets:
            raise ValueError("gate needs at least one target")
        if set(self.targets) & set(self.controls):
            raise ValueError("control and target qubits overlap")
        if len(set(self.targets)) != len(self.targets) or len(set(self.controls)) != len(self.controls):
            raise ValueError("repeated qubit index in gate")
        if self.kind in _CONTROLLED and not self.controls:
            raise ValueError(f"{self.kind.value} gate requires a control qubit")
        if self.kind not in _CONTROLLED and self.controls:
            raise ValueError(f"{self.kind.value} gate takes no controls")
        if self.kind in (GateKind.CZ, GateKind.CX) and (len(self.controls) != 1 or len(self.targets) != 1):
            raise ValueError(f"{self.kind.value} acts on exactly one control and one target")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets


# Convenience constructors, used throughout the circuits.
def h(*qubits: int) -> GateOp:
    return GateOp(GateKind.H, qubits)


def x(*qubits: int) -> GateOp:
    return GateOp(GateKind.X, qubits)


def z(*qubits: int) -> GateOp:
    return GateOp(GateKind.Z, qubits)


def cz(control: int, target: int) -> GateOp:
    return GateOp(GateKind.CZ, (target,), (control,))


def cx(control: int, target: int) -> GateOp:
    return GateOp(GateKind.CX, (target,), (control,))


def cmz(control: int, *targets: int) -> GateOp:
    return GateOp(GateKind.CMZ, targets, (control,))


def cmx(control: int, *targets: int) -> GateOp:
    return GateOp(GateKind.CMX, targets, (control,))


def _check_indices(n: int, indices: Iterable[int]) -> None:
    for q in indices:
        if not 0 <= q < n:
            raise IndexError(f"qubit index {q} out of range for {n} qubits")


def apply_gate(state: QuantumState, op: GateOp) -> QuantumState:
    """Return ``op`` applied to ``state``; the input is left untouched."""
    n = state.num_qubits
    _check_indices(n, op.qubits)
    psi = state.tensor().copy()

    # Work on the view where every control qubit is 1.
    idx: list = [slice(None)] * n
    for c in op.controls:
        idx[c] = 1
    sub = psi[tuple(idx)]
    axis = {t: t - sum(c < t for c in op.controls) for t in op.targets}

    for t in op.targets:
        ax = axis[t]
        if op.kind in _Z_TYPE:
            sl = [slice(None)] * sub.ndim
            sl[ax] = 1
            sub[tuple(sl)] *= -1
        elif op.kind in _X_TYPE:
            sub[...] = np.flip(sub, axis=ax).copy()
        else:
            sub[...] = np.moveaxis(np.tensordot(_H, sub, axes=([1], [ax])), 0, ax)
    return QuantumState(psi.reshape(-1), n)


def apply_circuit(state: QuantumState, circuit: Iterable[GateOp]) -> QuantumState:
    for op in circuit:
        state = apply_gate(state, op)
    return state


def apply_matrix(state: QuantumState, matrix: np.ndarray, qubits: Sequence[int]) -> QuantumState:
    """Apply a ``2**k x 2**k`` matrix to ``qubits`` (first listed qubit is the matrix MSB)."""
    n = state.num_qubits
    k = len(qubits)
    _check_indices(n, qubits)
    if len(set(qubits)) != k:
        raise ValueError("repeated qubit index")
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (2**k, 2**k):
        raise ValueError(f"matrix shape {matrix.shape} does not match {k} qubits")
    psi = state.tensor()
    u = matrix.reshape((2,) * (2 * k))
    out = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), list(qubits)))
    out = np.moveaxis(out, list(range(k)), list(qubits))
    return QuantumState(out.reshape(-1), n, normalize=True)


def tensor_product(*states: QuantumState) -> QuantumState:
    amps = states[0].amplitudes
    for s in states[1:]:
        amps = np.kron(amps, s.amplitudes)
    return QuantumState(amps, sum(s.num_qubits for s in states))


def append_zeros(state: QuantumState, count: int) -> QuantumState:
    if count == 0:
        return state
    return tensor_product(state, QuantumState.zeros(count))


def measure_qubits(state: QuantumState, indices: Sequence[int], rng: RngLike = None) -> tuple[str, QuantumState]:
    """Projective Z-basis measurement of ``indices``.

    Returns the outcome bits (in the order of ``indices``) and the
    renormalized post-measurement state on all qubits.
    """
    indices = list(indices)
    if not indices:
        raise ValueError("nothing to measure")
    n = state.num_qubits
    _check_indices(n, indices)
    if len(set(indices)) != len(indices):
        raise ValueError("repeated qubit index")
    gen = as_generator(rng)

    probs = np.moveaxis(np.abs(state.tensor()) ** 2, indices, list(range(len(indices))))
    marginal = probs.reshape(2 ** len(indices), -1).sum(axis=1)
    marginal = marginal / marginal.sum()
    outcome = int(gen.choice(marginal.size, p=marginal))
    bits = format(outcome, f"0{len(indices)}b")

    psi = state.tensor().copy()
    mask = np.zeros((2,) * n, dtype=bool)
    sel: list = [slice(None)] * n
    for q, b in zip(indices, bits):
        sel[q] = int(b)
    mask[tuple(sel)] = True
    psi[~mask] = 0.0
    return bits, QuantumState(psi.reshape(-1), n, normalize=True)


def drop_qubits(state: QuantumState, indices: Sequence[int], bits: str) -> QuantumState:
    """Remove qubits known to sit in the basis state ``bits``.

    The caller guarantees the qubits are disentangled (e.g. just measured);
    any weight outside that slice is an error.
    """
    n = state.num_qubits
    _check_indices(n, indices)
    sel: list = [slice(None)] * n
    for q, b in zip(indices, bits):
        sel[q] = int(b)
    rest = state.tensor()[tuple(sel)].reshape(-1)
    weight = float(np.vdot(rest, rest).real)
    if abs(weight - 1.0) > 1e-8:
        raise ValueError(f"qubits {list(indices)} are not in basis state {bits} (weight {weight:.3g})")
    return QuantumState(rest, n - len(indices), normalize=True)


def inner_product(a: QuantumState, b: QuantumState) -> complex:
    """``<a|b>``."""
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: QuantumState, b: QuantumState) -> float:
    return abs(inner_product(a, b)) ** 2


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError("density matrix must be square")
        if not np.allclose(rho, rho.conj().T, atol=1e-10):
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > 1e-10:
            raise ValueError(f"density matrix trace {np.trace(rho).real:.12f} != 1")
        if np.linalg.eigvalsh(rho).min() < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_state(cls, state: QuantumState) -> "DensityMatrix":
        return cls(np.outer(state.amplitudes, state.amplitudes.conj()))

    @classmethod
    def mixture(cls, states: Sequence[QuantumState], weights: Sequence[float] | None = None) -> "DensityMatrix":
        if weights is None:
            weights = np.full(len(states), 1.0 / len(states))
        mat = np.zeros((states[0].amplitudes.size,) * 2, dtype=complex)
        for w, s in zip(weights, states):
            mat += w * np.outer(s.amplitudes, s.amplitudes.conj())
        return cls(mat)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)


def reduced_density(state: QuantumState, keep: Sequence[int]) -> DensityMatrix:
    """Partial trace of ``|state><state|`` over every qubit not in ``keep``."""
    keep = list(keep)
    if not keep:
        raise ValueError("keep_indices must be non-empty")
    n = state.num_qubits
    _check_indices(n, keep)
    if len(set(keep)) != len(keep):
        raise ValueError("repeated qubit index")
    psi = np.moveaxis(state.tensor(), keep, list(range(len(keep))))
    m = psi.reshape(2 ** len(keep), -1)
    rho = m @ m.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in bits."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    evals = rho.eigenvalues()
    evals = evals[evals > 1e-12]
    return float(-np.sum(evals * np.log2(evals)))
