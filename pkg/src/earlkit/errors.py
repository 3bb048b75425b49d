"""Exception types shared across the toolkit.

Every raised error carries a stable ``code`` string so callers (and the
CLI) can branch on the failure kind without parsing messages.
"""

from __future__ import annotations


class EarlError(Exception):
    """Base error with a machine-readable code."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


class ParseError(EarlError):
    """Raised for unreadable EARL XML input."""


class ScopeError(EarlError):
    """Raised when a scope cannot be resolved against a corpus."""


class LexiconError(EarlError):
    """Raised for malformed lexicon files."""


class MarkerError(EarlError):
    """Raised for labels outside the marker knowledge base."""


class FusionError(EarlError):
    """Raised for unusable evidence or empty fusion results."""


class PolicyError(EarlError):
    """Raised for malformed policy files."""
