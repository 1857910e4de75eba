"""Decorators for consistent tool behavior.

Tool functions raise the toolkit's exceptions; ``handle_errors`` turns them
into the status dictionaries the MCP surface returns.
"""

import functools
import inspect
from typing import Any, Callable, Optional, Tuple, Type, TypeVar

from loguru import logger

from ..bounds import DomainError
from ..config.settings import ConfigError
from ..model import EnumerationCapError
from ..quant.scalar import EmptyCellError, NoBracketError
from ..recon.constrained import ConvergenceError
from ..recon.projection import RankDeficiencyError
from ..tools.utilities import create_success_response, handle_tool_error
from ..types import ToolResponse
from .validation import ValidationError


F = TypeVar('F', bound=Callable[..., Any])

# Most specific first: EnumerationCapError is a ValidationError.
ERROR_TYPES: Tuple[Tuple[Type[Exception], str], ...] = (
    (EnumerationCapError, "enumeration_cap"),
    (ValidationError, "validation"),
    (ConfigError, "config"),
    (DomainError, "domain"),
    (RankDeficiencyError, "rank_deficiency"),
    (ConvergenceError, "convergence"),
    (EmptyCellError, "empty_cell"),
    (NoBracketError, "no_bracket"),
    (FileNotFoundError, "not_found"),
)


def classify_error(error: Exception) -> Optional[str]:
    """error_type for a toolkit exception, None for anything else."""
    for exc_type, name in ERROR_TYPES:
        if isinstance(error, exc_type):
            return name
    return None


def _error_response(op_name: str, error: Exception) -> ToolResponse:
    error_type = classify_error(error)
    if error_type is None:
        logger.exception("unexpected failure in {}", op_name)
        response = handle_tool_error(op_name, error)
        response["error_type"] = "internal"
        return response
    logger.warning("{} failed: {}", op_name, error)
    label = "Validation error" if error_type == "validation" else "Error"
    response = {
        "status": "error",
        "message": f"{label} in {op_name}: {error}",
        "error_type": error_type,
    }
    if isinstance(error, EnumerationCapError):
        response.update(n_supports=error.n_supports, cap=error.cap)
    elif isinstance(error, DomainError):
        response["inequality"] = error.inequality
    elif isinstance(error, ConvergenceError):
        response.update(iterations=error.iterations, gap=error.gap)
    return response


def _wrap_result(op_name: str, result: Any) -> ToolResponse:
    if isinstance(result, dict):
        if 'status' not in result:
            result['status'] = 'success'
        return result
    return create_success_response(f"Successfully completed {op_name}", result=result)


def handle_errors(operation_name: str = None):
    """Decorator to handle errors consistently across all tools.

    Works on both plain and async functions.

    Args:
        operation_name: Name of the operation for error messages

    Returns:
        Decorator function
    """
    def decorator(func: F) -> F:
        op_name = operation_name or func.__name__.replace('_', ' ')

        if inspect.iscoroutinefunction(func):
            @functools.wraps(func)
            async def async_wrapper(*args, **kwargs) -> ToolResponse:
                try:
                    return _wrap_result(op_name, await func(*args, **kwargs))
                except Exception as e:
                    return _error_response(op_name, e)
            return async_wrapper

        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> ToolResponse:
            try:
                return _wrap_result(op_name, func(*args, **kwargs))
            except Exception as e:
                return _error_response(op_name, e)
        return wrapper
    return decorator
