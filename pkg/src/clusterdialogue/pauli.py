"""Signed Pauli strings over the letters {I, X, Z, XZ}.

A string is stored as ``sign * prod_q X_q^{x_q} Z_q^{z_q}``.  The letter
``XZ`` is the matrix product ``X @ Z`` (``= -iY``), so every product and
every Clifford conjugation stays within real signs +1/-1.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .statevector import GateKind, GateOp, QuantumState, RngLike, as_generator

LETTERS = ("I", "X", "Z", "XZ")
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "XZ": (1, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}
_TOKEN = re.compile(r"(XZ|X|Z|I)(\d+)")

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class NonCliffordError(ValueError):
    pass


@dataclass(frozen=True)
class PauliString:
    x: tuple[int, ...]
    z: tuple[int, ...]
    sign: int = 1

    def __post_init__(self):
        if len(self.x) != len(self.z):
            raise ValueError("x and z parts differ in length")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        object.__setattr__(self, "x", tuple(int(b) & 1 for b in self.x))
        object.__setattr__(self, "z", tuple(int(b) & 1 for b in self.z))

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls((0,) * n, (0,) * n)

    @classmethod
    def from_letters(cls, letters: Sequence[str], sign: int = 1) -> "PauliString":
        try:
            bits = [_LETTER_BITS[l] for l in letters]
        except KeyError as exc:
            raise ValueError(f"unknown Pauli letter {exc.args[0]!r}; use I, X, Z or XZ") from None
        return cls(tuple(b[0] for b in bits), tuple(b[1] for b in bits), sign)

    @classmethod
    def single(cls, n: int, letter: str, qubit: int) -> "PauliString":
        """``letter`` on 0-based ``qubit``, identity elsewhere."""
        letters = ["I"] * n
        letters[qubit] = letter
        return cls.from_letters(letters)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "PauliString":
        """Parse sparse 1-based notation, e.g. ``"XZ1*Z3*I5"``, ``"X1X2X3"`` or ``"-Z1Z2"``."""
        s = text.strip().replace(" ", "").replace("⊗", "*")
        sign = 1
        if s[:1] in "+-":
            sign = -1 if s[0] == "-" else 1
            s = s[1:]
        body = s.replace("*", "")
        tokens = _TOKEN.findall(body)
        if not tokens or "".join(l + q for l, q in tokens) != body:
            raise ValueError(f"cannot parse Pauli string {text!r}")
        positions = [int(q) for _, q in tokens]
        if min(positions) < 1:
            raise ValueError("qubit positions are 1-based")
        size = max(positions) if n is None else n
        if max(positions) > size:
            raise ValueError(f"qubit {max(positions)} exceeds {size} qubits")
        p = cls.identity(size)
        for letter, q in tokens:
            p = p * cls.single(size, letter, int(q) - 1)
        return p if sign == 1 else -p

    @property
    def num_qubits(self) -> int:
        return len(self.x)

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(_BITS_LETTER[(a, b)] for a, b in zip(self.x, self.z))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, l in enumerate(self.letters) if l != "I")

    def is_identity(self) -> bool:
        return not any(self.x) and not any(self.z)

    def unsigned(self) -> "PauliString":
        return PauliString(self.x, self.z, 1)

    def label(self) -> str:
        """Sparse 1-based label, e.g. ``XZ1Z3`` or ``-Z1Z2``; identity is ``I``."""
        body = "".join(f"{l}{i + 1}" for i, l in enumerate(self.letters) if l != "I") or "I"
        return ("-" if self.sign < 0 else "") + body

    def __str__(self) -> str:
        return self.label()

    def __neg__(self) -> "PauliString":
        return PauliString(self.x, self.z, -self.sign)

    def __mul__(self, other: "PauliString") -> "PauliString":
        """Exact operator product, sign tracked."""
        _same_size(self, other)
        # X^a Z^b X^c Z^d = (-1)^{b c} X^{a+c} Z^{b+d}
        flips = sum(zb & xc for zb, xc in zip(self.z, other.x))
        sign = self.sign * other.sign * (-1) ** flips
        return PauliString(
            tuple(a ^ c for a, c in zip(self.x, other.x)),
            tuple(b ^ d for b, d in zip(self.z, other.z)),
            sign,
        )

    def to_matrix(self) -> np.ndarray:
        mats = [np.linalg.matrix_power(_X, a) @ np.linalg.matrix_power(_Z, b) for a, b in zip(self.x, self.z)]
        return self.sign * reduce(np.kron, mats)


def _same_size(p: PauliString, q: PauliString) -> None:
    if p.num_qubits != q.num_qubits:
        raise ValueError(f"length mismatch: {p.num_qubits} vs {q.num_qubits} qubits")


def commutes(p: PauliString, q: PauliString) -> bool:
    _same_size(p, q)
    anti = sum((a & d) ^ (b & c) for a, b, c, d in zip(p.x, p.z, q.x, q.z))
    return anti % 2 == 0


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Letter-wise product with the global phase discarded."""
    return (p * q).unsigned()


def embed(p: PauliString, total: int) -> PauliString:
    """Pad ``p`` with identities on trailing qubits up to ``total``."""
    pad = total - p.num_qubits
    if pad < 0:
        raise ValueError(f"cannot embed {p.num_qubits} qubits into {total}")
    if pad == 0:
        return p
    return PauliString(p.x + (0,) * pad, p.z + (0,) * pad, p.sign)


def conjugate_by_pauli(p: PauliString, u: PauliString) -> PauliString:
    """``u p u^dagger``: ``p`` picks up a minus sign iff it anticommutes with ``u``."""
    return p if commutes(p, u) else -p


def _images(op: GateOp, n: int) -> dict[tuple[str, int], PauliString]:
    """Images of the single-qubit X_q / Z_q touched by ``op`` under conjugation."""
    def P(spec: dict[int, str], sign: int = 1) -> PauliString:
        letters = ["I"] * n
        for q, l in spec.items():
            letters[q] = l
        return PauliString.from_letters(letters, sign)

    img: dict[tuple[str, int], PauliString] = {}
    kind = op.kind
    if len(op.controls) > 1:
        raise NonCliffordError(f"{kind.value} with {len(op.controls)} controls is not Clifford")
    if kind is GateKind.H:
        for t in op.targets:
            img["X", t], img["Z", t] = P({t: "Z"}), P({t: "X"})
    elif kind is GateKind.X:
        for t in op.targets:
            img["Z", t] = P({t: "Z"}, -1)
    elif kind is GateKind.Z:
        for t in op.targets:
            img["X", t] = P({t: "X"}, -1)
    elif kind in (GateKind.CZ, GateKind.CMZ):
        (c,) = op.controls
        img["X", c] = P({c: "X", **{t: "Z" for t in op.targets}})
        for t in op.targets:
            img["X", t] = P({c: "Z", t: "X"})
    elif kind in (GateKind.CX, GateKind.CMX):
        (c,) = op.controls
        img["X", c] = P({c: "X", **{t: "X" for t in op.targets}})
        for t in op.targets:
            img["Z", t] = P({c: "Z", t: "Z"})
    else:  # pragma: no cover - GateKind is closed
        raise NonCliffordError(kind)
    return img


def conjugate_by_circuit(p: PauliString, circuit: Iterable[GateOp]) -> PauliString:
    """``U p U^dagger`` for the circuit ``U`` (first gate applied first), with sign."""
    n = p.num_qubits
    for op in circuit:
        if not isinstance(op, GateOp):
            raise NonCliffordError(f"cannot conjugate through {op!r}")
        if max(op.qubits) >= n:
            raise IndexError(f"gate {op} out of range for {n} qubits")
        img = _images(op, n)
        out = PauliString((0,) * n, (0,) * n, p.sign)
        for q in range(n):
            if p.x[q]:
                out = out * img.get(("X", q), PauliString.single(n, "X", q))
            if p.z[q]:
                out = out * img.get(("Z", q), PauliString.single(n, "Z", q))
        p = out
    return p


def apply_pauli(state: QuantumState, p: PauliString) -> QuantumState:
    if p.num_qubits != state.num_qubits:
        raise ValueError(f"length mismatch: {p.num_qubits} vs {state.num_qubits} qubits")
    psi = state.tensor().copy()
    n = state.num_qubits
    for q in range(n):
        if p.z[q]:
            sl: list = [slice(None)] * n
            sl[q] = 1
            psi[tuple(sl)] *= -1
    for q in range(n):
        if p.x[q]:
            psi = np.flip(psi, axis=q)
    return QuantumState(p.sign * psi.reshape(-1), n)


def expectation(state: QuantumState, p: PauliString) -> float:
    return float(np.vdot(state.amplitudes, apply_pauli(state, p).amplitudes).real)


def syndrome_measure(state: QuantumState, observable: PauliString, rng: RngLike = None) -> tuple[int, QuantumState]:
    """Measure the +-1 eigenvalue of ``observable``: bit 0 for +1, bit 1 for -1."""
    if observable.num_qubits != state.num_qubits:
        raise ValueError(f"length mismatch: {observable.num_qubits} vs {state.num_qubits} qubits")
    flipped = apply_pauli(state, observable).amplitudes
    plus = (state.amplitudes + flipped) / 2
    minus = (state.amplitudes - flipped) / 2
    p_plus = float(np.vdot(plus, plus).real)
    p_plus = min(max(p_plus, 0.0), 1.0)
    bit = int(as_generator(rng).random() >= p_plus)
    branch = minus if bit else plus
    norm = np.linalg.norm(branch)
    if norm < 1e-12:
        raise ArithmeticError("zero-norm projection in syndrome measurement")
    return bit, QuantumState(branch / norm, state.num_qubits)


@dataclass(frozen=True)
class StabilizerSet:
    generators: tuple[PauliString, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if len({g.num_qubits for g in gens}) > 1:
            raise ValueError("generators differ in length")
        for a, b in itertools.combinations(gens, 2):
            if not commutes(a, b):
                raise ValueError(f"generators {a} and {b} do not commute")

    @classmethod
    def parse(cls, labels: Sequence[str], n: int) -> "StabilizerSet":
        return cls(tuple(PauliString.parse(s, n) for s in labels))

    @property
    def num_qubits(self) -> int:
        return self.generators[0].num_qubits

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def labels(self) -> list[str]:
        return [g.label() for g in self.generators]

    def conjugated_by(self, u: PauliString) -> "StabilizerSet":
        return StabilizerSet(tuple(conjugate_by_pauli(g, u) for g in self.generators))

    def group_elements(self) -> list[PauliString]:
        """All ``2**k`` signed products of the generators."""
        n = self.num_qubits
        out = []
        for mask in itertools.product((0, 1), repeat=len(self.generators)):
            p = PauliString.identity(n)
            for bit, g in zip(mask, self.generators):
                if bit:
                    p = p * g
            out.append(p)
        return out

    def contains(self, p: PauliString, *, ignore_sign: bool = False) -> bool:
        if ignore_sign:
            return any(g.unsigned() == p.unsigned() for g in self.group_elements())
        return p in self.group_elements()

    def stabilizes(self, state: QuantumState, tol: float = 1e-10) -> bool:
        return all(abs(expectation(state, g) - 1.0) <= tol for g in self.generators)


def error_syndrome(error: PauliString, stabilizers: StabilizerSet) -> str:
    """Bit i is 1 iff ``error`` anticommutes with generator i."""
    return "".join("0" if commutes(error, g) else "1" for g in stabilizers)
