"""Exception types raised by the simulators and estimators."""


class MaxFieldError(Exception):
    """Base class for all package errors."""


class ConfigError(MaxFieldError, ValueError):
    """Invalid model, domain or run configuration.

    ``field`` names the offending configuration entry so the CLI can
    report it.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class NonFiniteConstant(MaxFieldError):
    """The normalizing constant ``c`` is infinite (no normalized representation)."""


class RegularityViolation(MaxFieldError):
    """A shift density vanishes where the envelope of the shape is positive."""


class BudgetExhausted(MaxFieldError):
    """The stopping rule did not trigger before the spectral-function cap."""


class EmptyInput(MaxFieldError, ValueError):
    """A reduction was asked to summarize no (or too few) realizations."""


class QuadratureFailure(MaxFieldError):
    """Adaptive quadrature did not reach the requested tolerance."""
