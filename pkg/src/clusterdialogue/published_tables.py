"""Transcriptions of the published tables, kept only for diffing.

The simulation is authoritative: these rows are compared against computed
values and any disagreement is reported, never used as a result.
"""
from __future__ import annotations

from .cluster import OrthogonalFamily

# (message, encoding, published member index, signed kets, NDD ancilla outcome)
ENCODING_TABLE = [
    ("00000", "I1*I3*I5", 0, "+00000 +00111 +11100 +11011", "00000"),
    ("00010", "Z1*I3*I5", 1, "+00000 +00111 -11100 -11011", "01000"),
    ("10000", "X1*I3*I5", 2, "+10000 +01100 +01011 +10111", "10000"),
    ("00011", "Z1*Z3*I5", 3, "+00000 +11100 -00111 -11011", "00010"),
    ("01000", "I1*X3*I5", 4, "+11000 +00100 +00011 +11111", "00100"),
    # printed without its closing delimiter; the four kets are complete
    ("00100", "I1*I3*X5", 5, "+00001 +00110 +11010 +11101", "00001"),
    ("10010", "XZ1*I3*I5", 6, "+01100 +01011 -10111 -10000", "11000"),
    ("00001", "I1*Z3*I5", 7, "+00000 -00111 -11100 +11011", "01010"),
    ("01010", "Z1*X3*I5", 8, "+00100 +00011 -11000 -11111", "01100"),
    ("00110", "Z1*I3*X5", 9, "+00001 +00110 -11101 -11010", "01001"),
    ("10011", "XZ1*Z3*I5", 10, "+10000 +01100 -01011 -10111", "10010"),
    ("11000", "X1*X3*I5", 11, "+01000 +10100 +10011 +01111", "10100"),
    ("10100", "X1*I3*X5", 12, "+01010 +10110 +10001 +01101", "10001"),
    ("01011", "Z1*XZ3*I5", 13, "+00011 -11000 -00100 +11111", "00110"),
    ("00111", "Z1*Z3*X5", 14, "+00001 +11101 -00110 -11010", "00011"),
    ("01100", "I1*X3*X5", 15, "+00010 +11110 +11001 +00101", "00101"),
    ("10001", "X1*Z3*I5", 16, "+01100 +10111 -01011 -10000", "11010"),
    ("11010", "XZ1*X3*I5", 17, "+01000 +01111 -10011 -10100", "11100"),
    ("10110", "XZ1*I3*X5", 18, "+01010 -10110 -10001 +01101", "11001"),
    ("01001", "I1*XZ3*I5", 19, "+11000 -00100 +00011 -11111", "01110"),
    ("00101", "I1*Z3*X5", 20, "+11010 -00110 +00001 -11101", "01011"),
    ("01110", "Z1*X3*X5", 21, "+00010 -11110 -11001 +00101", "01101"),
    ("11011", "XZ1*XZ3*I5", 22, "+01111 +10011 -10100 -01000", "10110"),
    ("10111", "XZ1*Z3*X5", 23, "+10001 +01101 -10110 -01010", "10011"),
    ("11100", "X1*X3*X5", 24, "+10010 +01110 +01001 +10101", "10101"),
    ("01111", "Z1*XZ3*X5", 25, "+00010 +11110 -11001 -00101", "00111"),
    ("11001", "X1*XZ3*I5", 26, "+10100 -10011 +01111 -01000", "11110"),
    ("10101", "X1*Z3*X5", 27, "+10110 +01101 -10001 -01010", "11011"),
    ("11110", "XZ1*X3*X5", 28, "+01001 +01110 -10101 -10010", "11101"),
    ("01101", "I1*XZ3*X5", 29, "+00010 -11110 +11001 -00101", "01111"),
    ("11111", "XZ1*XZ3*X5", 30, "+10010 +01110 -01001 -10101", "10111"),
    ("11101", "X1*XZ3*X5", 31, "+01110 +10101 -01001 -10010", "11111"),
]

# Bell state -> (ancilla 1, ancilla 2)
BELL_TABLE = {"phi+": "00", "phi-": "01", "psi+": "10", "psi-": "11"}

# Single-qubit error -> syndrome over (X1X2X3, X3X4X5, Z1Z2, Z2Z3Z4, Z4Z5)
SYNDROME_TABLE = {
    "X1": "00100", "Z1": "10000", "XZ1": "10100",
    "X2": "00110", "Z2": "10000", "XZ2": "10110",
    "X3": "00010", "Z3": "11000", "XZ3": "11010",
    "X4": "00011", "Z4": "01000", "XZ4": "01011",
    "X5": "00001", "Z5": "01000", "XZ5": "01001",
}

# Phase-flip error -> decoder action
Z_DECODER_TABLE = {"Z1": "Z1", "Z2": "Z1", "Z3": "Z3", "Z4": "Z4", "Z5": "Z4"}


def published_index(message: str) -> int:
    for row in ENCODING_TABLE:
        if row[0] == message:
            return row[2]
    raise KeyError(message)


def message_for_published_index(index: int) -> str:
    for row in ENCODING_TABLE:
        if row[2] == index:
            return row[0]
    raise KeyError(index)


def _parse_kets(text: str) -> dict[str, int]:
    return {tok[1:]: (1 if tok[0] == "+" else -1) for tok in text.split()}


def diff_encoding_table(family: OrthogonalFamily) -> list[dict]:
    """Rows where the published table disagrees with the simulation.

    Ket expansions are compared up to a global sign.
    """
    if family.n != 5:
        raise ValueError("the published table covers n = 5 only")
    problems = []
    for message, encoding, index, kets, syndrome in ENCODING_TABLE:
        k = family.index_of_message(message)
        member = family.members[k]
        computed = {label: (1 if amp.real > 0 else -1) for label, amp in member.ket_expansion()}
        printed = _parse_kets(kets)
        same = set(computed) == set(printed) and (
            all(computed[l] == printed[l] for l in printed) or all(computed[l] == -printed[l] for l in printed)
        )
        fields = {
            "encoding": (encoding, family.encodings[k].label()),
            "kets": (kets, " ".join(f"{'+' if s > 0 else '-'}{l}" for l, s in computed.items()) if not same else kets),
            "syndrome": (syndrome, family.syndromes[k]),
        }
        for name, (printed, sim) in fields.items():
            if printed != sim:
                problems.append({"message": message, "published_index": index, "field": name,
                                 "published": printed, "simulated": sim})
    return problems
