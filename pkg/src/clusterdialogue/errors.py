class EncodingSelectionError(ValueError):
    """The chosen encoding qubits do not give 2**n distinct orthogonal images."""


class InvalidCodewordError(RuntimeError):
    """A discrimination input is not a member of the orthogonal family."""

    def __init__(self, message: str, syndromes=None):
        super().__init__(message)
        self.syndromes = list(syndromes or [])


class UncorrectableError(RuntimeError):
    """A QEC syndrome outside the single-qubit lookup table."""

    def __init__(self, syndrome: str):
        super().__init__(f"syndrome {syndrome} is not produced by any single-qubit error")
        self.syndrome = syndrome


class NotABellStateError(ValueError):
    pass
