"""Exception types raised by the toolkit.

Everything the CLI maps to exit status 2 derives from :class:`CmxError`.
"""


class CmxError(Exception):
    """Base class for data and model errors."""


class CorpusFormatError(CmxError, ValueError):
    """Malformed corpus input or an unrepresentable corpus on output."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ModelFormatError(CmxError, ValueError):
    """Model container that cannot be decoded."""


class TrainingError(CmxError, ValueError):
    pass


class AlignmentError(CmxError, ValueError):
    """Gold and predicted corpora do not line up token by token."""
