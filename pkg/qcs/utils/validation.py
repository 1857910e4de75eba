"""Input validation helpers.

Every public operation checks its arguments through these functions so
that malformed inputs surface as ValidationError with a readable message.
"""

import math
from typing import Any, Optional

import numpy as np


class ValidationError(ValueError):
    """Custom exception for validation errors."""
    pass


def validate_positive_int(value: Any, name: str, minimum: int = 1) -> int:
    """Validate an integer parameter with a lower bound.

    Args:
        value: Candidate value
        name: Parameter name for the error message
        minimum: Smallest allowed value

    Returns:
        The value as a Python int

    Raises:
        ValidationError: If value is not an integer or is below minimum
    """
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def validate_positive_float(value: Any, name: str) -> float:
    """Validate a strictly positive finite real."""
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a real number, got {value!r}")
    if not math.isfinite(value) or value <= 0:
        raise ValidationError(f"{name} must be positive and finite, got {value}")
    return value


def validate_seed(seed: Any) -> int:
    """Validate a 64-bit unsigned seed."""
    seed = validate_positive_int(seed, "seed", minimum=0)
    if seed >= 2**64:
        raise ValidationError(f"seed must fit in 64 bits, got {seed}")
    return seed


def validate_finite_array(values: Any, name: str, ndim: Optional[int] = None) -> np.ndarray:
    """Convert to a float array and require finite entries."""
    array = np.asarray(values, dtype=float)
    if ndim is not None and array.ndim != ndim:
        raise ValidationError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValidationError(f"{name} must contain only finite values")
    return array


def validate_probability_vector(p: Any, tol: float = 1e-9) -> np.ndarray:
    """Validate a probability vector: nonempty, nonnegative, sums to one.

    Raises:
        ValidationError: If the vector is malformed
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValidationError("probability vector must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(p)):
        raise ValidationError("probability vector must be finite")
    if np.any(p < 0):
        raise ValidationError("probabilities must be non-negative")
    total = float(p.sum())
    if abs(total - 1.0) > tol:
        raise ValidationError(f"probabilities must sum to 1 (got {total:.12g})")
    return p


def validate_sparsity(K: Any, N: int, allow_zero: bool = False) -> int:
    """Validate a sparsity level against the ambient dimension."""
    K = validate_positive_int(K, "K", minimum=0 if allow_zero else 1)
    if K > N:
        raise ValidationError(f"K={K} exceeds N={N}")
    return K
