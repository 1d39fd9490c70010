"""
Custom exceptions for the Kummer/Enriques verifier.
Provides specific exception types for the different failure scenarios of the toolkit.
"""

import json
from typing import Optional, Dict, Any


class BaseVerifierException(Exception):
    """Base exception class for all verifier exceptions"""

    def __init__(
        self,
        message: str,
        error_code: str = None,
        details: Dict[str, Any] = None,
        cause: Exception = None
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.details = details or {}
        self.cause = cause

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for serialization"""
        result = {
            'error': self.error_code,
            'message': self.message,
            'type': self.__class__.__name__
        }

        if self.details:
            result['details'] = self.details

        if self.cause:
            result['cause'] = str(self.cause)

        return result


# Configuration related exceptions
class ConfigurationError(BaseVerifierException):
    """Raised when there's a configuration issue"""
    pass


class RunConfigError(ConfigurationError):
    """Raised when a verification run is configured inconsistently"""
    pass


class ForbiddenParameterError(ConfigurationError):
    """Raised when construction parameters hit 0, 1 or the diagonal s = t"""
    pass


# Exact arithmetic exceptions
class FieldError(BaseVerifierException):
    """Base class for exact-field errors"""
    pass


class ZeroDenominatorError(FieldError):
    """Raised when a fraction is built over a zero denominator"""
    pass


class FieldDivisionByZeroError(FieldError):
    """Raised when dividing by the zero element"""
    pass


class PoleError(FieldError):
    """Raised when a specialization hits a zero of the denominator"""
    pass


class IndeterminatePresentError(FieldError):
    """Raised when specializing an element that still involves r"""
    pass


class ZeroInputError(FieldError):
    """Raised when an operation requires a nonzero element"""
    pass


class DegreeLimitError(FieldError):
    """Raised when a polynomial exceeds the configured degree cap"""
    pass


class ExpressionParseError(FieldError):
    """Raised when a serialized rational function cannot be parsed"""
    pass


# Elliptic curve exceptions
class CurveError(BaseVerifierException):
    """Base class for elliptic-curve errors"""
    pass


class InvalidCurveError(CurveError):
    """Raised when the Legendre parameter is 0 or 1"""
    pass


class OffCurveError(CurveError):
    """Raised when a point does not satisfy the curve equation"""
    pass


# Lattice exceptions
class LatticeError(BaseVerifierException):
    """Base class for curve-configuration errors"""
    pass


class IsometryViolationError(LatticeError):
    """Raised when a permutation does not preserve the intersection table"""
    pass


class MissingFlagError(LatticeError):
    """Raised when sigma is requested without the E = F flag"""
    pass


class UnknownCurveError(LatticeError):
    """Raised when a curve label cannot be resolved"""
    pass


# Fibration exceptions
class FibrationError(BaseVerifierException):
    """Base class for elliptic-fibration errors"""
    pass


class NonCycleError(FibrationError):
    """Raised when fiber components do not close up into a cycle"""
    pass


class NotASectionError(FibrationError):
    """Raised when a curve does not meet the fiber class once"""
    pass


class NegativeRankError(FibrationError):
    """Raised when the Shioda-Tate count comes out negative"""
    pass


class OddBranchCountError(FibrationError):
    """Raised when a double cover is given an odd branch count"""
    pass


# Torsor calculus exceptions
class TorsorError(BaseVerifierException):
    """Base class for torsor-calculus errors"""
    pass


class CalibrationInconsistencyError(TorsorError):
    """Raised when no orientation/scale choice satisfies the constraints"""
    pass


class DegenerateMapError(TorsorError):
    """Raised when a fractional-linear map has zero determinant"""
    pass


# Projective geometry exceptions
class ProjectiveError(BaseVerifierException):
    """Base class for Mukai construction errors"""
    pass


class CoplanarityError(ProjectiveError):
    """Raised when the four frame points are coplanar"""
    pass


class TemplateUnreachableError(ProjectiveError):
    """Raised when the quadric cannot be rescaled onto the template"""
    pass


class IndeterminacyError(ProjectiveError):
    """Raised when the Cremona map is evaluated on its indeterminacy locus"""
    pass


# Cohomology exceptions
class CohomologyError(BaseVerifierException):
    """Base class for group cohomology errors"""
    pass


class InvalidGroupError(CohomologyError):
    """Raised when a group table or involution fails the axioms"""
    pass


class NonInvolutiveMatrixError(CohomologyError):
    """Raised when a torus action matrix does not square to the identity"""
    pass


# Data validation exceptions
class ValidationError(BaseVerifierException):
    """Base class for data validation errors"""
    pass


# Report exceptions
class ReportError(BaseVerifierException):
    """Base class for report emission errors"""
    pass


class ReportIOError(ReportError):
    """Raised when a report cannot be written or read"""
    pass


class ReportSchemaError(ReportError):
    """Raised when a parsed report does not match the schema"""
    pass


def create_exception_from_error(
    error: Exception,
    context: str = None,
    error_code: str = None,
    details: Dict[str, Any] = None
) -> BaseVerifierException:
    """
    Create appropriate verifier exception from a generic error.

    Args:
        error: The original exception
        context: Context where the error occurred
        error_code: Custom error code
        details: Additional error details

    Returns:
        Appropriate verifier exception
    """
    if isinstance(error, BaseVerifierException):
        return error

    error_message = str(error)

    if isinstance(error, ZeroDivisionError):
        return FieldDivisionByZeroError(
            message=f"Division by zero: {error_message}",
            error_code=error_code,
            details=details,
            cause=error
        )

    elif isinstance(error, json.JSONDecodeError):
        return ValidationError(
            message=f"JSON parsing error: {error_message}",
            error_code=error_code,
            details=details,
            cause=error
        )

    elif isinstance(error, OSError):
        return ReportIOError(
            message=f"I/O error: {error_message}",
            error_code=error_code,
            details=details,
            cause=error
        )

    else:
        return BaseVerifierException(
            message=f"Verifier error in {context or 'unknown context'}: {error_message}",
            error_code=error_code or 'UNKNOWN_ERROR',
            details=details,
            cause=error
        )


class ErrorHandler:
    """Centralized error handling utilities"""

    @staticmethod
    def handle_check_error(error: Exception, check_id: str) -> BaseVerifierException:
        """Wrap an exception raised inside a suite check"""
        return create_exception_from_error(
            error,
            context=f"check {check_id}",
            details={'check': check_id}
        )

    @staticmethod
    def validate_required_field(value: Any, field_name: str) -> None:
        """Validate that a required field is present and not empty"""
        if value is None or (isinstance(value, str) and not value.strip()):
            raise ValidationError(
                message=f"Required field '{field_name}' is missing or empty",
                error_code="MISSING_REQUIRED_FIELD",
                details={'field_name': field_name}
            )

    @staticmethod
    def validate_construction_parameters(s0: Any, t0: Any, allow_diagonal: bool = False) -> None:
        """Reject s, t in {0, 1} and, unless allowed, s = t"""
        for name, value in (('s', s0), ('t', t0)):
            if value == 0 or value == 1:
                raise ForbiddenParameterError(
                    message=f"Construction parameter {name} must avoid 0 and 1, got {value}",
                    error_code="FORBIDDEN_PARAMETER",
                    details={'parameter': name, 'value': str(value)}
                )
        if not allow_diagonal and s0 == t0:
            raise ForbiddenParameterError(
                message=f"Construction parameters must satisfy s != t, got s = t = {s0}",
                error_code="FORBIDDEN_PARAMETER",
                details={'s': str(s0), 't': str(t0)}
            )

    @staticmethod
    def describe(error: Optional[BaseException]) -> Dict[str, Any]:
        """Serializable description of any exception"""
        if error is None:
            return {}
        if isinstance(error, BaseVerifierException):
            return error.to_dict()
        return {'error': 'UNKNOWN_ERROR', 'message': str(error), 'type': error.__class__.__name__}
