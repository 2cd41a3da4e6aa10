"""Exception hierarchy.

Every exception carries a stable ``code`` that the command line reports
when a precondition fails.
"""
from typing import Optional


class TorimultError(Exception):
    """Base class for all library errors."""
    code = 'ERROR'

    def __init__(self, message: str = '', code: Optional[str] = None, details: Optional[dict] = None):
        if code is not None:
            self.code = code
        self.message = message or self.code
        self.details = details or {}
        super().__init__(f"{self.code}: {self.message}")

    def to_dict(self) -> dict:
        return {
            'code': self.code,
            'message': self.message,
            'details': self.details,
        }


class GeometryError(TorimultError):
    """Raised by cone, polyhedron and fan operations.

    Codes: NON_POINTED, ZERO_VECTOR, NON_SIMPLICIAL, INFEASIBLE, UNBOUNDED,
    OUTSIDE_SUPPORT, BASE_MISMATCH, WRONG_DIMENSION.
    """
    code = 'GEOMETRY'


class DivisorError(TorimultError):
    """Raised by divisor, boundary and ideal preconditions.

    Codes: NOT_QCARTIER, NOT_INTEGRAL, NOT_CARTIER, SHARED_COMPONENT,
    BAD_BOUNDARY.
    """
    code = 'DIVISOR'


class ClassificationError(TorimultError):
    """Raised when a pair does not meet a classification precondition.

    Codes: NOT_LOG_TERMINAL, NOT_STRICTLY_LC, NOT_QCARTIER_BODY, NOT_STABILIZED.
    """
    code = 'CLASSIFICATION'


class ProblemParseError(TorimultError):
    """Raised when a problem document cannot be parsed."""
    code = 'PARSE_ERROR'

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(message, details={'line': line, 'column': column})

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"


class ComputationCancelled(TorimultError):
    """Raised when a cancellation token fires during a long search."""
    code = 'CANCELLED'
