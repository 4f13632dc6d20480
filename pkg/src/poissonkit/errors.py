"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent input (maps to CLI exit code 2)."""


class DomainError(ArithmeticError):
    """Operation undefined for the given value, e.g. inverting zero."""
