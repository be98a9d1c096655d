"""Exception types shared across the package."""


class HeapError(Exception):
    """Base class for all errors raised by this package."""


class DeadHandleError(HeapError):
    """A handle whose slot has been freed or recycled was used."""


class KeyOrderError(HeapError):
    """decrease_key was called with a key that is not strictly smaller."""


class ContractError(HeapError):
    """An internal precondition was violated by the caller."""


class AuditFailure(HeapError):
    """A runtime audit (boundary or paranoid) detected an inconsistency."""


class TraceFormatError(HeapError):
    """A trace file could not be parsed.

    Carries the 1-based line number of the offending line.
    """

    def __init__(self, lineno, reason):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason
