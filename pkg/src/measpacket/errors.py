"""Exception hierarchy.

Configuration problems derive from :class:`ConfigError` (a ``ValueError``);
failures during integration or verification derive from
:class:`NumericalError`. The CLI maps the two families to exit codes 2 and 3.
"""


class ConfigError(ValueError):
    """Invalid user-supplied configuration."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class ParseError(ConfigError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownKey(ConfigError):
    pass


class ValidationError(ConfigError):
    """A parsed value violates an invariant."""


class NonPositiveMass(ValidationError):
    pass


class NonPositiveHbar(ValidationError):
    pass


class NonPositiveTau(ValidationError):
    pass


class NonPositiveInitialWidth(ValidationError):
    pass


class NonFiniteParameter(ValidationError):
    pass


class InvalidSchedule(ValidationError):
    pass


class NumericalError(RuntimeError):
    """The numerics could not deliver a trustworthy result."""


class WidthUnderflow(NumericalError):
    pass


class StepSizeUnderflow(NumericalError):
    pass


class NonFiniteState(NumericalError):
    pass


class ExponentOverflow(NumericalError):
    pass


class AliasingRisk(NumericalError):
    pass


class OutOfRange(ValueError):
    """Requested time or position lies outside the available data."""


class GridTooCoarse(ValueError):
    """The spatial grid cannot resolve the packet for the requested stencil."""
