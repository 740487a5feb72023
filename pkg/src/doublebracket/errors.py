"""Exception types shared across the package."""

from __future__ import annotations


class DoubleBracketError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(DoubleBracketError):
    pass


class AntisymmetryViolation(DoubleBracketError):
    pass


class JacobiViolation(DoubleBracketError):
    def __init__(self, message: str, residual: float, indices: tuple[int, ...]):
        super().__init__(message)
        self.residual = residual
        self.indices = indices


class SingularBasisChange(DoubleBracketError):
    pass


class LinearlyDependentBasis(DoubleBracketError):
    pass


class NotClosedUnderBracket(DoubleBracketError):
    pass


class DegenerateKilling(DoubleBracketError):
    pass


class DegenerateMetric(DoubleBracketError):
    pass


class DegenerateInducedMetric(DoubleBracketError):
    """Induced leaf metric is singular; carries the offending determinant."""

    def __init__(self, message: str, det: float):
        super().__init__(message)
        self.det = det


class NonInvertibleLeafBivector(DoubleBracketError):
    """Bivector restricted to the chart is singular; carries the determinant."""

    def __init__(self, message: str, det: float):
        super().__init__(message)
        self.det = det


class NotCompact(DoubleBracketError):
    pass


class NotTangent(DoubleBracketError):
    pass


class NonFiniteState(DoubleBracketError):
    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class StepTooLarge(DoubleBracketError):
    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class ConfigError(DoubleBracketError):
    pass
