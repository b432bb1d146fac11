"""Exception hierarchy shared by every module of the toolkit."""


class SpdpError(Exception):
    """Base class for all toolkit errors."""


class ParseError(SpdpError, ValueError):
    """Malformed polynomial, circuit, CNF or model text."""


class InvalidVariableError(SpdpError, IndexError):
    """A variable index outside ``range(n)``."""


class IncompatibleRingError(SpdpError, ValueError):
    """Operands live in different rings (mode, variable count or field)."""


class BudgetExceededError(SpdpError):
    """A construction would exceed a configured size cap."""


class NonConfluentError(SpdpError, ValueError):
    """A rewrite system has a critical pair that does not join.

    ``pair`` holds the overlap word and its two distinct normal forms.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class CircuitError(SpdpError, ValueError):
    """Invalid circuit: undefined reference, bad arity or a cycle."""


class PropertyViolation(SpdpError, AssertionError):
    """A structural property (monotonicity, invariance, ...) failed."""

    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance


class StageError(SpdpError):
    """Wraps an exception raised inside a named pipeline stage."""

    def __init__(self, stage, cause):
        super().__init__(f"pipeline stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause
