"""Exception types shared across the package."""


class CacheModelError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CacheModelError):
    """A parameter, count, or configuration field violates its invariants.

    The message always names the offending field (dotted path for file-based
    configuration, plain field name for in-memory objects).
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class MissingCpiError(CacheModelError):
    """CPI cannot be derived (no instructions retired) and no override was given."""


class InconsistentCountsError(CacheModelError):
    """Count totals contradict each other (e.g. fewer cycles than instruction reads imply)."""


class TraceFormatError(CacheModelError):
    """A trace stream is malformed. Carries the line number (text) or byte offset (binary)."""

    def __init__(self, message: str, *, line: int | None = None, offset: int | None = None):
        self.line = line
        self.offset = offset
        if line is not None:
            message = f"line {line}: {message}"
        elif offset is not None:
            message = f"byte offset {offset}: {message}"
        super().__init__(message)


class TraceRecordError(CacheModelError):
    """A trace record is invalid for the simulated hierarchy (e.g. core index out of range)."""

    def __init__(self, index: int, message: str):
        self.index = index
        super().__init__(f"record {index}: {message}")
