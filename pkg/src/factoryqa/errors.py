"""Exception types shared across the package."""

from __future__ import annotations


class FactoryQAError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(FactoryQAError):
    """Bad input: empty fields, out-of-range values, unsupported formats."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class EmptyDocumentError(ValidationError):
    """Document text is empty after normalization."""


class DecodeError(ValidationError):
    """Raw bytes are not valid UTF-8."""


class DimensionMismatchError(FactoryQAError):
    """Vector dimension differs from the index's fixed dimension."""


class UndefinedSimilarityError(FactoryQAError):
    """Cosine similarity requested against a zero vector."""


class IndexFormatError(FactoryQAError):
    """Persisted index file is malformed; carries the offending line number."""

    def __init__(self, message: str, line_no: int | None = None):
        super().__init__(message)
        self.line_no = line_no


class TransportError(FactoryQAError):
    """Network-level failure after exhausting retries."""

    def __init__(self, message: str, attempts: int = 1):
        super().__init__(message)
        self.attempts = attempts


class AuthError(FactoryQAError):
    """HTTP 401/403 from a remote endpoint."""


class RateLimitError(FactoryQAError):
    """HTTP 429; retry_after in seconds when the server provided one."""

    def __init__(self, message: str, retry_after: float | None = None):
        super().__init__(message)
        self.retry_after = retry_after


class NoKnowledgeError(FactoryQAError):
    """Both knowledge sources are empty; nothing to retrieve from."""


class TagStateError(FactoryQAError):
    """Yellow-tag state transition that skips or repeats a lifecycle step."""


class CheckFormatError(FactoryQAError):
    """Logical-check model reply could not be parsed into a verdict."""


class JudgmentError(FactoryQAError):
    """Judgment record violates the scoring protocol."""


class IncompleteJudgmentsError(JudgmentError):
    """Judgment cells missing for some (question, endpoint) pairs."""

    def __init__(self, missing: list[tuple[str, str]]):
        super().__init__(f"missing judgments for {len(missing)} cells: {missing[:5]}")
        self.missing = missing
