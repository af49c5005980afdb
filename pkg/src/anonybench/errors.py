"""Exception types shared across the workbench."""

from __future__ import annotations


class AnonybenchError(Exception):
    """Base class for all workbench errors."""


class IngestionError(AnonybenchError):
    """A corpus directory or file could not be ingested."""


class SchemaError(AnonybenchError):
    """A serialized artifact (report, model) does not match its schema."""


class LexError(AnonybenchError):
    """Source text could not be tokenized."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ParseError(AnonybenchError):
    """Token stream is not a program in the supported C subset."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedConstructError(ParseError):
    """A recognized C construct that is deliberately outside the subset."""


class ParameterError(AnonybenchError):
    """An operation was configured with invalid parameters."""


class TrainingError(AnonybenchError):
    """Model fitting failed on degenerate input."""


class TransformerError(AnonybenchError):
    """An anonymization transformer failed to produce usable output."""


class ExplainerError(AnonybenchError):
    """An explanation was requested for an unsupported model or input."""


class NormalizeError(AnonybenchError):
    """Internal error: normalization failed to reach a fixed point."""
