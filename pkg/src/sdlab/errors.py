"""Exception hierarchy.

Two families: :class:`ConfigError` for inputs that fail validation (CLI exit
code 2) and :class:`NumericalError` for failures inside a computation (exit
code 3).
"""


class SdlabError(Exception):
    """Base class for all errors raised by sdlab."""


class ConfigError(SdlabError, ValueError):
    """Invalid configuration or invalid input to an operation."""


class NumericalError(SdlabError, ArithmeticError):
    """A numerical routine failed (no convergence, PSD violation, ...)."""


class UnsupportedOrderError(ConfigError):
    """Oscillator eigenstate index above the supported maximum."""


class EmptySpectrumError(ConfigError):
    """No eigenvalue lies below the requested energy cutoff."""


class NoSuchStateError(ConfigError):
    """Requested (n, parity) is not an eigenstate of the model."""


class DegenerateInputError(ConfigError):
    """Inputs that make the requested construction meaningless."""


class OutOfDomainError(ConfigError):
    """Evaluation point outside the truncated domain."""


class NormalizationError(ConfigError):
    """State norm differs from one by more than the allowed tolerance."""


class ConvergenceError(NumericalError):
    """An iterative routine did not converge.

    ``bracket`` holds the last bracketing interval for root finders.
    """

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class PSDViolationError(NumericalError):
    """A density matrix has an eigenvalue below the PSD floor."""


class IncompleteBasisError(NumericalError):
    """Projection residual too large for the supplied basis."""

    def __init__(self, message, residual, suggested_emax=None):
        super().__init__(message)
        self.residual = residual
        self.suggested_emax = suggested_emax
