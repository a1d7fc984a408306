"""
Errors

This module defines the exception hierarchy shared by the simulator,
the experiment harness and the command-line interface.
"""

from typing import Optional


class MobileGossipError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(MobileGossipError, ValueError):
    """A caller passed a value outside an operation's domain."""


class ConfigError(MobileGossipError, ValueError):
    """
    A configuration file or flag set could not be parsed or validated.

    Attributes:
        field: Name of the offending config key, if known
        line: 1-based line number in the config file, if known
    """

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        parts = [message]
        if field:
            parts.append(f"field: {field}")
        if line is not None:
            parts.append(f"line: {line}")
        super().__init__(" | ".join(parts))


class NumericalFailureError(MobileGossipError, ArithmeticError):
    """Quadrature or another numerical routine returned a non-finite value."""


class ResultWriteError(MobileGossipError, OSError):
    """Result or manifest file could not be written."""
