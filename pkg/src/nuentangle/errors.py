"""Exception types shared across the package."""


class NuEntangleError(Exception):
    """Base class for all package errors."""


class DomainError(NuEntangleError, ValueError):
    """A parameter lies outside its physical range (negative energy, tau > 1, ...)."""


class StructureError(NuEntangleError, ValueError):
    """A matrix does not have the structure an operation requires."""


class ConfigError(NuEntangleError, ValueError):
    """Malformed experiment registry or sweep configuration."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class EmptyResultError(NuEntangleError):
    """An emitter was handed no rows."""
