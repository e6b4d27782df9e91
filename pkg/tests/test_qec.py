import numpy as np
import pytest

from clusterdialogue.errors import UncorrectableError
from clusterdialogue.published_tables import SYNDROME_TABLE, Z_DECODER_TABLE
from clusterdialogue.pauli import PauliString, apply_pauli
from clusterdialogue.qec import (
    ErrorKind,
    ErrorOp,
    NoiseChannel,
    apply_noise,
    conjugated_stabilizers,
    correct,
    decode_and_correct,
    decoder_table,
    measure_qec_syndrome,
    measure_qec_syndrome_circuit,
    residual_is_stabilizer,
    single_qubit_errors,
    syndrome_rows,
)
from clusterdialogue.statevector import fidelity


def test_syndrome_table_matches_published():
    assert {r["error"]: r["syndrome"] for r in syndrome_rows()} == SYNDROME_TABLE


def test_z_representatives():
    corrections = {r["error"]: r["correction"] for r in syndrome_rows()}
    for err, action in Z_DECODER_TABLE.items():
        assert corrections[err] == action


def test_conjugated_generators_stabilize_members(family5):
    for k, member in enumerate(family5.members):
        assert conjugated_stabilizers(k, family5).stabilizes(member)


def test_all_single_errors_corrected(family5):
    g = np.random.default_rng(0)
    for k, member in enumerate(family5.members):
        for err in single_qubit_errors():
            noisy = apply_pauli(member, err.pauli())
            fixed, syndrome, corr = correct(noisy, k, g, family5)
            assert syndrome == SYNDROME_TABLE[err.label()]
            assert fidelity(fixed, member) > 1 - 1e-10
            assert residual_is_stabilizer(err.pauli(), corr, k)


def test_circuit_route_agrees(family5):
    g = np.random.default_rng(1)
    for k in (0, 10, 31):
        for err in single_qubit_errors():
            noisy = apply_pauli(family5.members[k], err.pauli())
            syn, post = measure_qec_syndrome_circuit(noisy, k, g, family5)
            assert syn == measure_qec_syndrome(noisy, k, g, family5)
            assert fidelity(post, noisy) > 1 - 1e-10


def test_forced_x2_on_member_zero(family5):
    noisy = apply_pauli(family5.members[0], ErrorOp.parse("X2").pauli())
    _, syndrome, corr = correct(noisy, 0, 0, family5)
    assert (syndrome, corr.label()) == ("00110", "X2")


def test_unknown_syndrome_is_uncorrectable(family5):
    unused = next(f"{i:05b}" for i in range(32) if f"{i:05b}" not in decoder_table())
    with pytest.raises(UncorrectableError):
        decode_and_correct(family5.members[0], unused)


def test_noise_channel_validation():
    with pytest.raises(ValueError):
        NoiseChannel(1.5)
    with pytest.raises(ValueError):
        ErrorOp("Y", 1)


def test_noise_p_zero_and_one(family5):
    s = family5.members[4]
    assert apply_noise(s, NoiseChannel(0.0), 0) == (s, None)
    _, err = apply_noise(s, NoiseChannel(1.0, ErrorKind.PHASE_FLIP), 0)
    assert err.letter == "Z"


def test_noise_stream_independent_of_p(family5):
    g1, g2 = np.random.default_rng(3), np.random.default_rng(3)
    apply_noise(family5.members[0], NoiseChannel(0.0), g1)
    apply_noise(family5.members[0], NoiseChannel(1.0), g2)
    assert g1.random() == g2.random()


def test_errorop_parse_and_bounds():
    assert ErrorOp.parse("XZ4") == ErrorOp("XZ", 4)
    with pytest.raises(ValueError):
        ErrorOp("X", 6).pauli()
    assert PauliString.parse("XZ4", 5) == ErrorOp.parse("XZ4").pauli()
