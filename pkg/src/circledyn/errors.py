"""Exception types shared across the package."""


class CircledynError(Exception):
    """Base class for all package errors."""


class InvalidInput(CircledynError, ValueError):
    """Malformed or contract-violating input (CLI exit code 2)."""


class ResourceCap(CircledynError, RuntimeError):
    """A configured complexity cap was exceeded (CLI exit code 3)."""


class VerificationFailure(CircledynError, RuntimeError):
    """A requested certificate could not be produced (CLI exit code 1)."""
