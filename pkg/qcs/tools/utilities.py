"""Utility functions for the toolkit's MCP tools.

Common response helpers and conversions between JSON payloads and arrays.
"""

import math
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..quant.scalar import ScalarQuantizer


def handle_tool_error(operation_name: str, error: Exception) -> Dict[str, str]:
    """Handle tool errors with consistent response format.

    Args:
        operation_name: Name of the operation that failed
        error: The exception that occurred

    Returns:
        Standardized error response
    """
    return {
        "status": "error",
        "message": f"Failed to {operation_name}: {str(error)}"
    }


def create_success_response(message: str, **additional_data: Any) -> Dict[str, Any]:
    """Create a success response with optional additional data.

    Args:
        message: Success message
        **additional_data: Additional fields to include in the response

    Returns:
        Standardized success response
    """
    response = {
        "status": "success",
        "message": message
    }
    response.update(additional_data)
    return response


def to_json_list(values) -> List[Optional[float]]:
    """Flat or nested float list with infinities mapped to None."""
    array = np.asarray(values, dtype=float)
    if array.ndim > 1:
        return [to_json_list(row) for row in array]
    return [float(v) if math.isfinite(v) else None for v in array]


def quantizer_payload(q: ScalarQuantizer) -> Dict[str, Any]:
    return {
        "M": q.M,
        "rate": q.rate,
        "levels": to_json_list(q.levels),
        "thresholds": to_json_list(q.finite_thresholds),
    }


def quantizer_from_payload(levels: Sequence[float], thresholds: Optional[Sequence[float]] = None) -> ScalarQuantizer:
    """Quantizer from levels and optional finite thresholds (midpoints when omitted)."""
    if thresholds is None:
        return ScalarQuantizer.from_levels(levels)
    inner = np.asarray(thresholds, dtype=float)
    return ScalarQuantizer(np.asarray(levels, dtype=float), np.concatenate(([-np.inf], inner, [np.inf])))
