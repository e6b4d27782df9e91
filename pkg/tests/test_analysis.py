from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import unitary_group

from clusterdialogue.analysis import (
    cx_probe,
    detection_model,
    dialogue_efficiency,
    dialogue_resources,
    disclosure_entropies,
    efficiency,
    intercept_resend_detection,
    intercept_resend_error_rate,
    intercept_resend_trial,
    passive_attack_entropy,
    probe_attack_analysis,
    random_probe,
    subset_entropy,
    trivial_probe,
)
from clusterdialogue.cluster import build_family


def test_efficiency_values():
    assert efficiency(10, 15) == Fraction(2, 3)
    assert efficiency(10, 25) == Fraction(2, 5)
    assert efficiency(20, 45) == Fraction(4, 9)
    assert round(float(efficiency(10, 15)), 4) == 0.6667
    with pytest.raises(ZeroDivisionError):
        efficiency(1, 0, 0)


def test_dialogue_resource_counts():
    assert dialogue_resources(1).__dict__ == {"c": 10, "q": 15, "b": 0}
    assert dialogue_efficiency(1, secure_channel=False) == Fraction(10, 25)
    assert dialogue_efficiency(2) == Fraction(20, 25)
    assert dialogue_efficiency(2, secure_channel=False) == Fraction(20, 45)


def test_passive_entropy(family5):
    assert abs(passive_attack_entropy(family5) - 5.0) < 1e-9
    assert abs(passive_attack_entropy(build_family(4)) - 4.0) < 1e-9
    assert abs(passive_attack_entropy([family5.members[7]])) < 1e-9


def test_disclosure_entropies_grow_one_bit_per_sequence(family5):
    ent = disclosure_entropies(family5)
    assert list(ent) == ["5", "4,5", "3,4,5", "2,3,4,5", "1,2,3,4,5"]
    assert np.allclose(list(ent.values()), [1, 2, 3, 4, 5], atol=1e-9)
    assert abs(subset_entropy(family5, [0, 2]) - 2.0) < 1e-9


def test_intercept_resend_error_rate():
    assert abs(intercept_resend_error_rate(10_000, 7) - 0.25) < 0.02


def test_intercept_resend_trial_counts():
    t = intercept_resend_trial(6, 0)
    assert t.matched == 6 and t.decoys_sent >= 6


@pytest.mark.parametrize("k", [1, 4])
def test_detection_model(k):
    assert abs(intercept_resend_detection(k, 3000, k) - detection_model(k)) < 0.03


def test_identity_probe_is_harmless():
    rep = probe_attack_analysis(np.eye(8))
    assert rep.detection_probability == pytest.approx(0, abs=1e-12)
    assert rep.eve_information == pytest.approx(0, abs=1e-9)


@pytest.mark.parametrize("dim", [2, 4, 8])
def test_trivial_family_is_harmless(dim):
    g = np.random.default_rng(dim)
    rep = probe_attack_analysis(trivial_probe(unitary_group.rvs(dim, random_state=g)), dim)
    assert rep.detection_probability < 1e-12 and rep.eve_information < 1e-9


def test_cx_probe_is_detected():
    assert probe_attack_analysis(cx_probe()).detection_probability > 0.1


def test_random_probes_are_detected():
    g = np.random.default_rng(11)
    assert all(probe_attack_analysis(random_probe(2, rng=g)).detection_probability > 0 for _ in range(5))


def test_full_register_reveals_everything():
    # holding every system qubit, the probe-free ensemble is 32 orthogonal states
    rep = probe_attack_analysis(np.eye(8), eve_holds=range(5))
    assert rep.eve_information == pytest.approx(5.0, abs=1e-9)


def test_probe_validation():
    with pytest.raises(ValueError):
        probe_attack_analysis(np.ones((8, 8)))
    with pytest.raises(ValueError):
        probe_attack_analysis(np.eye(64), probe_dim=16)
