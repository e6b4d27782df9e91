"""Quantum dialogue over |psi_n> cluster-state families.

Dense Pauli encoding, non-destructive discrimination, single-qubit
stabilizer correction, decoy-checked transfer and attack analyses, all on
a small dense statevector simulator.
"""
from .adversary import Adversary, CustomProbe, InterceptResend
from .analysis import (
    dialogue_efficiency,
    dialogue_resources,
    efficiency,
    intercept_resend_detection,
    intercept_resend_error_rate,
    passive_attack_entropy,
    probe_attack_analysis,
)
from .cluster import (
    ClusterSpec,
    EncodingOp,
    OrthogonalFamily,
    build_cluster,
    build_encoding_group,
    build_family,
    build_lu_equivalent,
    compose,
    encode_message,
    message_of,
)
from .errors import EncodingSelectionError, InvalidCodewordError, NotABellStateError, UncorrectableError
from .ndd import bell_ndd, decode_message, ndd_family, ndd_general
from .pauli import PauliString, StabilizerSet
from .protocol import DialogueTranscript, chunk_message, decoy_check, insert_decoys, run_dialogue, run_rounds
from .qec import ErrorOp, NoiseChannel, apply_noise, correct, decode_and_correct, measure_qec_syndrome
from .statevector import DensityMatrix, QuantumState

__version__ = "0.1.0"
