"""Shared exception and warning types."""


class NumericError(RuntimeError):
    """A numerical routine failed to converge or left its validity domain."""


class ConfigError(ValueError):
    """A config file is malformed or inconsistent."""


class ValidityWarning(UserWarning):
    """A model was evaluated outside its stated range of validity."""
