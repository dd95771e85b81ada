"""
Exception hierarchy for zqforcing.

Every error raised on purpose by the library derives from ZqForcingError so
callers (the CLI in particular) can map failures to exit codes.
"""

from typing import List, Optional, Sequence


class ZqForcingError(Exception):
    """Base class for all library errors."""


class ContractViolation(ZqForcingError, ValueError):
    """An operation was called with arguments violating its precondition."""


class GraphValidationError(ContractViolation):
    """Graph data is not a simple undirected graph on 0..n-1."""


class GraphFormatError(ZqForcingError, ValueError):
    """Malformed graph6 / edgelist input."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class ResourceLimitExceeded(ZqForcingError, RuntimeError):
    """A configured search cap was hit; the answer is unknown, never wrong."""

    def __init__(self, what: str, limit: int, actual: Optional[int] = None):
        detail = f"{what} exceeds limit {limit}"
        if actual is not None:
            detail += f" (got {actual})"
        super().__init__(detail)
        self.what = what
        self.limit = limit
        self.actual = actual


class ConfigError(ZqForcingError, ValueError):
    """Invalid configuration file or flag combination."""


class VerificationFailed(ZqForcingError):
    """One or more cross-validation checks found a mismatch."""

    def __init__(self, mismatches: Sequence[object]):
        self.mismatches: List[object] = list(mismatches)
        super().__init__(f"{len(self.mismatches)} verification mismatch(es)")
