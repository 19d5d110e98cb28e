"""Engine error types.

Every error carries a stable machine-readable ``code`` plus an optional
``path`` into the offending document, so the CLI and the HTTP service can
emit a uniform ``{code, message, path?}`` envelope.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine failures."""

    def __init__(self, code: str, message: str, path: str | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.path = path
        self.revision: int | None = None  # session revision, set by the query layer

    def envelope(self) -> dict:
        payload = {"code": self.code, "message": self.message}
        if self.path is not None:
            payload["path"] = self.path
        return payload

    def __repr__(self) -> str:  # pragma: no cover
        return f"{type(self).__name__}(code={self.code!r}, message={self.message!r}, path={self.path!r})"


class ParseError(EngineError):
    """Model document could not be parsed (syntax, unknown key, bad type)."""


class ValidationFailed(EngineError):
    """A document failed structural validation; carries the full report."""

    def __init__(self, report):
        first = report.issues[0] if report.issues else None
        code = first.code if first else "VALIDATION_FAILED"
        message = first.message if first else "document failed validation"
        super().__init__(code, message, first.path if first else None)
        self.report = report


class QueryError(EngineError):
    """A diagnostic query could not be answered (bad target, bad evidence, guard hit)."""
