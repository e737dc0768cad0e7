"""
Error and warning types shared by every subpackage
"""
from typing import List, Optional, Sequence


class SqueezeSimError(Exception):
    pass


class DomainError(SqueezeSimError, ValueError):
    """An argument lies outside the domain of the operation"""


class AdmissibilityError(SqueezeSimError, ValueError):
    """A mode or covariance violates the Heisenberg constraint"""


class NumericError(SqueezeSimError, ArithmeticError):
    """Non-finite values or a covariance that is not positive semidefinite"""


class SamplingError(SqueezeSimError, RuntimeError):
    pass


class CorrectionError(SqueezeSimError, ValueError):
    """Darknoise reaches the measured trace at one or more frequencies"""

    def __init__(self, message: str, frequencies: Sequence[float] = ()):
        super().__init__(message)
        self.frequencies = list(frequencies)


class NetlistError(SqueezeSimError):
    """Raised when a netlist carries error diagnostics"""

    def __init__(self, diagnostics: List["object"]):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"netlist has {len(self.diagnostics)} diagnostic(s): {lines}")


class CircuitRunError(SqueezeSimError):
    """A runtime failure traced back to the netlist statement that caused it"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class LinearizationWarning(UserWarning):
    """Quadrature noise is not small against the coherent amplitude"""


class DarknoiseMarginWarning(UserWarning):
    pass


class PeriodogramAccuracyWarning(UserWarning):
    pass
