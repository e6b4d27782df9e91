import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clusterdialogue.pauli import (
    NonCliffordError,
    PauliString,
    StabilizerSet,
    apply_pauli,
    commutes,
    conjugate_by_circuit,
    embed,
    error_syndrome,
    expectation,
    multiply,
    syndrome_measure,
)
from clusterdialogue.statevector import GateOp, GateKind, QuantumState, apply_circuit, cmz, cx, cz, h, x, z

letters = st.sampled_from(["I", "X", "Z", "XZ"])


def paulis(n):
    return st.tuples(st.lists(letters, min_size=n, max_size=n), st.sampled_from([1, -1])).map(
        lambda t: PauliString.from_letters(t[0], t[1]))


def random_state(n, seed):
    g = np.random.default_rng(seed)
    v = g.normal(size=2 ** n) + 1j * g.normal(size=2 ** n)
    return QuantumState(v, n, normalize=True)


def test_parse_sparse_labels():
    p = PauliString.parse("XZ1*Z3*I5")
    assert p.letters == ("XZ", "I", "Z", "I", "I")
    assert p.label() == "XZ1Z3"
    assert PauliString.parse("-Z1Z2", 3).sign == -1
    assert PauliString.parse("X1X2X3").support == (0, 1, 2)


def test_parse_rejects_y():
    with pytest.raises(ValueError):
        PauliString.from_letters(["Y"])


def test_xz_is_matrix_product():
    X = np.array([[0, 1], [1, 0]])
    Z = np.diag([1, -1])
    assert np.allclose(PauliString.from_letters(["XZ"]).to_matrix(), X @ Z)


@given(paulis(3), paulis(3))
@settings(max_examples=60, deadline=None)
def test_product_matches_matrices(p, q):
    assert np.allclose((p * q).to_matrix(), p.to_matrix() @ q.to_matrix())


@given(paulis(3), paulis(3))
@settings(max_examples=60, deadline=None)
def test_commutation_matches_matrices(p, q):
    a, b = p.to_matrix(), q.to_matrix()
    assert commutes(p, q) == np.allclose(a @ b, b @ a)


def test_multiply_drops_phase():
    p, q = PauliString.parse("Z1", 1), PauliString.parse("X1", 1)
    assert multiply(p, q).sign == 1


def test_length_mismatch_raises():
    with pytest.raises(ValueError):
        commutes(PauliString.identity(2), PauliString.identity(3))


@given(paulis(3), st.integers(0, 1000))
@settings(max_examples=40, deadline=None)
def test_conjugation_through_clifford_circuit(p, seed):
    circuit = [h(0), cz(0, 1), cx(1, 2), x(2), z(0), cmz(2, 0, 1)]
    s = random_state(3, seed)
    # U P |s> == P' U |s>
    lhs = apply_circuit(apply_pauli(s, p), circuit)
    rhs = apply_pauli(apply_circuit(s, circuit), conjugate_by_circuit(p, circuit))
    assert np.allclose(lhs.amplitudes, rhs.amplitudes)


def test_non_clifford_rejected():
    with pytest.raises(NonCliffordError):
        conjugate_by_circuit(PauliString.identity(3), [GateOp(GateKind.CMX, (1, 2), (0,))] + ["T"])


def test_expectation_and_syndrome():
    plus = QuantumState.from_kets({"0": 1, "1": 1})
    xop = PauliString.parse("X1", 1)
    assert np.isclose(expectation(plus, xop), 1)
    bit, post = syndrome_measure(plus, xop, 0)
    assert bit == 0 and np.allclose(post.amplitudes, plus.amplitudes)


def test_stabilizer_set_requires_commuting():
    with pytest.raises(ValueError):
        StabilizerSet.parse(["X1", "Z1"], 1)


def test_group_elements_and_contains():
    s = StabilizerSet.parse(["Z1Z2", "X1X2"], 2)
    assert len(s.group_elements()) == 4
    # Z1Z2 * X1X2 = (ZX)(ZX) = (-XZ)(-XZ)
    assert s.contains(PauliString.parse("XZ1XZ2", 2))
    assert not s.contains(PauliString.parse("-XZ1XZ2", 2))
    assert s.contains(PauliString.parse("-XZ1XZ2", 2), ignore_sign=True)


def test_error_syndrome():
    s = StabilizerSet.parse(["Z1Z2", "Z2Z3"], 3)
    assert error_syndrome(PauliString.parse("X2", 3), s) == "11"


def test_embed_pads_identity():
    p = embed(PauliString.parse("-X1", 1), 3)
    assert p.letters == ("X", "I", "I") and p.sign == -1
    with pytest.raises(ValueError):
        embed(PauliString.identity(3), 2)
