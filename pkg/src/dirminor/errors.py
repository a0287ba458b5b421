"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when an argument violates an operation's precondition."""


class UnsupportedParameterError(InvalidInputError):
    """Raised for parameters outside the exactly-known regime (e.g. t >= 7)."""


class ContractViolationError(InvalidInputError):
    """Raised when a non-contractible arc is handed to ``contract``."""


class ParseError(InvalidInputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InternalConsistencyError(RuntimeError):
    """A situation a correct construction can never reach.

    These are bug traps: the underlying mathematical argument rules them out.
    """


_checks = {"enabled": True}


def set_checks(enabled):
    """Toggle the re-verification of internal results (``--verify-all``)."""
    _checks["enabled"] = bool(enabled)


def checks_enabled():
    return _checks["enabled"]


def ensure(condition, message):
    if not condition:
        raise InternalConsistencyError(message)
