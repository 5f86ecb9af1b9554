# common/exceptions.py
"""
Centralized exception handling for the species engine.

Usage:
    from common.exceptions import NotFoundError, ValidationError

    # In library code:
    raise NotFoundError("generator", name)
    raise ValidationError(ErrorCodes.NON_CYCLIC, "potential must be cyclic")

    # In main.py:
    exit_code, payload = engine_exception_handler(exc, command)
"""
from typing import Any

from common.errors import ErrorCodes
from common.schemas.responses import EngineErrorResponse, ErrorDetail

EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_PRECONDITION = 2


class EngineException(Exception):
    """Base exception for all engine failures."""

    def __init__(
        self,
        code: str,
        message: str,
        exit_code: int = EXIT_INVALID_INPUT,
        details: dict[str, Any] | None = None,
    ):
        self.code = code
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(message)


class ValidationError(EngineException):
    """Input failed validation."""

    def __init__(self, code: str, message: str, path: str | None = None):
        super().__init__(
            code=code,
            message=message,
            exit_code=EXIT_INVALID_INPUT,
            details={"path": path} if path else None,
        )


class NotFoundError(EngineException):
    """A referenced label, generator or vertex does not exist."""

    def __init__(self, resource: str, identifier: str = "", path: str | None = None):
        detail = (
            f"{resource} not found"
            if not identifier
            else f"{resource} '{identifier}' not found"
        )
        super().__init__(
            code=f"{resource.lower().replace(' ', '_')}_not_found",
            message=detail,
            exit_code=EXIT_INVALID_INPUT,
            details={"path": path} if path else None,
        )


class PreconditionError(EngineException):
    """A mathematical precondition does not hold."""

    def __init__(self, code: str, message: str, details: dict[str, Any] | None = None):
        super().__init__(
            code=code, message=message, exit_code=EXIT_PRECONDITION, details=details
        )


class MutationUndefinedAtVertex(PreconditionError):
    """The bimodule has a loop or a 2-cycle through the mutation vertex."""

    def __init__(self, vertex: int, reason: str):
        super().__init__(
            code=ErrorCodes.MUTATION_UNDEFINED,
            message=f"mutation undefined at vertex {vertex}: {reason}",
            details={"vertex": vertex, "reason": reason},
        )


class NotDecomposable(PreconditionError):
    """The image of the quadratic part is not Z-freely generated."""

    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None):
        super().__init__(
            code=ErrorCodes.NOT_DECOMPOSABLE,
            message=message,
            details={"diagnostics": diagnostics or {}},
        )


class NotSplittable(PreconditionError):
    """The premutated potential cannot be split."""

    def __init__(self, vertex: int, diagnostics: dict[str, Any] | None = None):
        super().__init__(
            code=ErrorCodes.NOT_SPLITTABLE,
            message=f"premutation at vertex {vertex} is not splittable",
            details={"vertex": vertex, "diagnostics": diagnostics or {}},
        )


class NotUnitriangular(PreconditionError):
    """The linear part of a generator map is not the identity."""

    def __init__(self, message: str = "generator map is not unitriangular"):
        super().__init__(code=ErrorCodes.NOT_UNITRIANGULAR, message=message)


class NotInvertible(PreconditionError):
    """The linear part of a generator map is not an isomorphism."""

    def __init__(self, message: str = "linear part is not invertible"):
        super().__init__(code=ErrorCodes.NOT_INVERTIBLE, message=message)


class SearchExhausted(PreconditionError):
    """No trial produced a potential with every mutation step defined."""

    def __init__(self, trials: int, statistics: list[dict[str, Any]]):
        super().__init__(
            code=ErrorCodes.SEARCH_EXHAUSTED,
            message=f"no witness found in {trials} trials",
            details={"trials": trials, "statistics": statistics},
        )


class InternalError(EngineException):
    """An internal consistency check failed."""

    def __init__(
        self,
        message: str = "internal consistency check failed",
        code: str = ErrorCodes.INTERNAL_ERROR,
        diagnostics: dict[str, Any] | None = None,
    ):
        super().__init__(
            code=code,
            message=message,
            exit_code=EXIT_PRECONDITION,
            details={"diagnostics": diagnostics} if diagnostics else None,
        )


# =============================================================================
# Exception Handler
# =============================================================================


def engine_exception_handler(
    exc: EngineException, command: str | None = None
) -> tuple[int, EngineErrorResponse]:
    """
    Convert an EngineException into (exit code, error envelope).

    Used by main.py:
        code, payload = engine_exception_handler(exc, args.command)
    """
    return exc.exit_code, EngineErrorResponse(
        command=command,
        error=ErrorDetail(
            code=exc.code, message=exc.message, details=exc.details or None
        ),
    )
