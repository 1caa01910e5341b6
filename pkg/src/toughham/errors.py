"""Exception types shared by every module.

Failures that carry a certificate keep it on the exception so callers can
re-verify the reason without re-running the computation.
"""


class ToughHamError(Exception):
    """Base class for all library errors."""


class MalformedInput(ToughHamError):
    """Input violates a precondition (bad file, non-cutset, failed freeness)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InstanceTooLarge(ToughHamError):
    """Exhaustive enumeration would exceed the configured cap."""

    def __init__(self, message, size=None, cap=None):
        super().__init__(message)
        self.size = size
        self.cap = cap


class SearchExhausted(ToughHamError):
    """A bounded search ran out of its node budget before deciding."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class Infeasible(ToughHamError):
    """The requested object provably does not exist; `certificate` says why."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class HypothesisViolation(ToughHamError):
    """A lemma hypothesis failed.

    kind is one of KINDS; `witness` is a dict that re-validates against the
    graph (cutset plus ratio, vertex pair, independent set, ...).
    """

    KINDS = (
        "toughness",
        "toughness-wrt",
        "missing-adjacency",
        "degree-threshold",
        "search-exhausted",
        "scattering-structure",
    )

    def __init__(self, kind, message, witness=None, claim=None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown violation kind {kind!r}")
        super().__init__(f"[{kind}] {message}")
        self.kind = kind
        self.witness = witness or {}
        self.claim = claim
