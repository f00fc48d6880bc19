"""Exception hierarchy shared by every module."""


class IlmfError(ValueError):
    """Base class for all errors raised by the package."""


class NonSquare(IlmfError):
    pass


class NonFinite(IlmfError):
    pass


class NonDiagonalizable(IlmfError):
    pass


class NonCommuting(IlmfError):
    pass


class NotPositiveStable(IlmfError):
    pass


class NonPositiveBase(IlmfError):
    pass


class SingularValue(IlmfError):
    """A scalar function was requested at a pole (or an invalid parameter spectrum)."""


class DomainError(IlmfError):
    pass


class GuardViolation(IlmfError):
    """Variables lie outside the series convergence guard."""


class NoConvergence(IlmfError, ArithmeticError):
    pass


class InputError(IlmfError):
    """Malformed external input (JSON payloads, CLI arguments)."""
