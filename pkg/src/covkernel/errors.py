"""Exception hierarchy.  The CLI maps each class to an exit code."""


class CovkernelError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ValidationError(CovkernelError, ValueError):
    """Inconsistent or out-of-range parameters."""

    exit_code = 2


class DomainError(ValidationError):
    """Argument outside the region where a formula is defined or valid."""


class SingularityError(DomainError):
    """Evaluation requested at a singular point."""


class PrecisionError(CovkernelError, ArithmeticError):
    """Requested accuracy not reached.

    ``estimate`` carries the best value found and ``bound`` the achieved
    error bound, when they are known.
    """

    exit_code = 3

    def __init__(self, message, estimate=None, bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.bound = bound


class ResourceError(CovkernelError, RuntimeError):
    """A configured work budget would be exceeded."""

    exit_code = 4
