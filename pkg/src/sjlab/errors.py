"""Error and warning taxonomy used across the package."""


class SjlabError(Exception):
    """Base class for all package errors."""


class InputError(SjlabError):
    """Malformed or invariant-violating input."""


class DomainError(SjlabError):
    """Point outside (or too close to the boundary of) the model space."""


class NumericError(SjlabError):
    """Numerically impossible state; usually signals corrupted input."""


class AccuracyWarning(UserWarning):
    """Result computed outside the validated accuracy box."""
