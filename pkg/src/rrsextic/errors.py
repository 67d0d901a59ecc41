"""Exception types shared by all modules."""


class RRSexticError(Exception):
    """Base class for library errors."""


class DomainError(RRSexticError, ValueError):
    """Argument outside the domain where the operation is defined."""


class ConvergenceError(RRSexticError, ArithmeticError):
    """An iteration or series failed to converge; ``residual`` is what it reached."""

    def __init__(self, message: str, residual=None, profile=None):
        super().__init__(message)
        self.residual = residual
        self.profile = profile


class BranchError(RRSexticError, ArithmeticError):
    """A branch choice failed: a value that must be real came out complex, or the
    requested branch does not exist (e.g. modular path with j < 1728)."""


class VerificationError(RRSexticError):
    """One or more asserted identities exceeded tolerance."""

    def __init__(self, message: str, offenders=()):
        super().__init__(message)
        self.offenders = list(offenders)
