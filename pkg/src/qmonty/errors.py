"""Exception types shared across the package."""


class QmontyError(Exception):
    """Base class for all package errors."""


class DomainError(QmontyError, ValueError):
    """An argument is outside its documented domain (index, angle, range)."""


class DegenerateStateError(QmontyError, ValueError):
    """A state construction received an all-zero amplitude vector."""


class NormalizationError(QmontyError, ValueError):
    """Weights or amplitudes violate a normalization contract."""


class InvalidBasisError(QmontyError, ValueError):
    """A measurement basis is not orthonormal."""


class InvalidOperatorError(QmontyError, ValueError):
    """An operator fails a structural check (unitarity, hermiticity, PSD)."""


class ShapeError(QmontyError, ValueError):
    """Dimension mismatch between operands."""


class ProtocolViolationError(QmontyError, RuntimeError):
    """A game action is illegal in the current phase or state."""


class ResourceLimitError(QmontyError, RuntimeError):
    """A brute-force computation exceeds its configured size limit."""


class ScanFailureError(QmontyError, RuntimeError):
    """The deterministic-profile scan found an exploitability below threshold."""
