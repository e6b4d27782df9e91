import numpy as np
import pytest

from clusterdialogue.cluster import build_family
from clusterdialogue.errors import InvalidCodewordError, NotABellStateError
from clusterdialogue.ndd import (
    BELL_LABELS,
    BELL_STATES,
    bell_ndd,
    decode_message,
    ndd_family,
    ndd_general,
    projective_ndd,
    projective_syndrome,
)
from clusterdialogue.published_tables import BELL_TABLE, ENCODING_TABLE
from clusterdialogue.statevector import QuantumState, fidelity, tensor_product


@pytest.mark.parametrize("label", BELL_LABELS)
def test_bell_table(label):
    for seed in range(3):
        res = bell_ndd(BELL_STATES[label], seed)
        assert res.syndrome == BELL_TABLE[label]
        assert res.identified_member == BELL_LABELS.index(label)
        assert fidelity(res.post_state, BELL_STATES[label]) > 1 - 1e-12


def test_bell_rejects_product_state():
    with pytest.raises(NotABellStateError):
        bell_ndd(QuantumState.basis("01"))


@pytest.mark.parametrize("message,syndrome", [("10011", "10010"), ("11000", "10100"), ("11101", "11111"),
                                              ("10000", "10000"), ("00010", "01000")])
def test_known_syndromes(family5, message, syndrome):
    assert ndd_family(family5.member_for_message(message), family5, 0).syndrome == syndrome


def test_published_ancilla_column(family5):
    for message, *_, syndrome in ENCODING_TABLE:
        res = ndd_family(family5.member_for_message(message), family5, 1)
        assert res.syndrome == syndrome
        assert decode_message(res.syndrome, family5) == message


def test_non_destructive_and_reusable(family5):
    g = np.random.default_rng(5)
    for member in family5.members:
        first = ndd_family(member, family5, g)
        assert fidelity(first.post_state, member) > 1 - 1e-10
        assert first.system_purity > 1 - 1e-9
        second = ndd_family(first.post_state, family5, g)
        assert second.syndrome == first.syndrome


def test_projective_and_circuit_agree(family5):
    for member, syn in zip(family5.members, family5.syndromes):
        assert projective_syndrome(member, 5) == syn
        bits, post = projective_ndd(member, 5, 0)
        assert bits == syn and fidelity(post, member) > 1 - 1e-10


def test_superposition_is_invalid(family5):
    mixed = QuantumState(family5.members[3].amplitudes + family5.members[17].amplitudes, normalize=True)
    with pytest.raises(InvalidCodewordError):
        ndd_general(mixed, 5, 0, family5, repetitions=12)
    with pytest.raises(InvalidCodewordError):
        projective_syndrome(mixed, 5)


def test_unknown_syndrome_rejected(family5):
    with pytest.raises(ValueError):
        decode_message("1001", family5)


def test_extra_qubits_ride_along(family5):
    member = family5.member_for_message("01101")
    with_probe = tensor_product(member, QuantumState.from_kets({"0": 1, "1": 1}))
    res = ndd_general(with_probe, 5, 0, family5)
    assert res.syndrome == family5.syndromes[family5.index_of_message("01101")]
    assert fidelity(res.post_state, with_probe) > 1 - 1e-10


@pytest.mark.parametrize("n", [4, 6])
def test_generalized_ndd(n):
    fam = build_family(n)
    g = np.random.default_rng(n)
    seen = set()
    for member, syn in zip(fam.members, fam.syndromes):
        res = ndd_family(member, fam, g)
        assert res.syndrome == syn
        assert fidelity(res.post_state, member) > 1 - 1e-10
        seen.add(res.syndrome)
    assert len(seen) == 2 ** n
