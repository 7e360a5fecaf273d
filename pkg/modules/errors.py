"""
Exception hierarchy for the distance toolkit
Every error carries the process exit code the CLI reports for it

VERSION HISTORY:
1.0.0 - Error types with exit codes - 18/10/26
KEY FUNCTIONS:
- CqdistError base class with exit_code
- Expression, validation, quadrature and comparison failures
"""
from typing import Optional, Tuple


class CqdistError(Exception):
    """Base class for all toolkit errors"""

    exit_code = 1


class ConfigError(CqdistError):
    """Invalid configuration value"""

    exit_code = 1


class RequestError(CqdistError):
    """Invalid command-line request (bad arguments, unknown labels)"""

    exit_code = 1


class DimensionMismatchError(CqdistError):
    """Operands of a matrix operation have different dimensions"""

    exit_code = 1


class ExprSyntaxError(CqdistError):
    """
    Expression text does not match the grammar

    Args:
        message: What went wrong
        offset: Byte offset into the source where parsing failed
    """

    exit_code = 2

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnboundParameterError(CqdistError):
    """Expression references a parameter with no value"""

    exit_code = 2

    def __init__(self, name: str):
        super().__init__(f"Unbound parameter '{name}'")
        self.name = name


class ExprDomainError(CqdistError):
    """Expression is undefined or non-finite at the requested time"""

    exit_code = 3

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} at t={t!r}")
        self.t = t


class SpecValidationError(CqdistError):
    """Trajectory or Hamiltonian spec fails its invariants"""

    exit_code = 2


class InvalidStateError(CqdistError):
    """Matrix is not a valid density matrix"""

    exit_code = 2


class QuadratureError(CqdistError):
    """
    Adaptive quadrature could not meet its tolerance

    Args:
        message: What went wrong
        interval: Worst subinterval (a, b), if known
    """

    exit_code = 3

    def __init__(self, message: str, interval: Optional[Tuple[float, float]] = None):
        if interval is not None:
            message = f"{message} on [{interval[0]!r}, {interval[1]!r}]"
        super().__init__(message)
        self.interval = interval


class ComparisonFailed(CqdistError):
    """Pure and density functionals disagree beyond tolerance"""

    exit_code = 4
