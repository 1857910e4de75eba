"""Utility modules for the quantized CS toolkit.

This package contains utility modules shared by every layer:
- validation: Input validation helpers and ValidationError
- rng: Counter-based random streams keyed by (seed, stream)
- logs: loguru configuration
- serialization: Plain-text matrix, signal, quantizer and code files
- decorators: Error handling for the MCP tools

serialization and decorators depend on the domain modules and are imported
from their own modules.
"""

from .validation import (
    ValidationError,
    validate_finite_array,
    validate_positive_float,
    validate_positive_int,
    validate_probability_vector,
    validate_seed,
    validate_sparsity,
)
from .rng import Stream, keyed_generator, stream_id
from .logs import configure_logging, is_configured

__all__ = [
    # Validation
    'ValidationError',
    'validate_finite_array',
    'validate_positive_float',
    'validate_positive_int',
    'validate_probability_vector',
    'validate_seed',
    'validate_sparsity',

    # Random streams
    'Stream',
    'keyed_generator',
    'stream_id',

    # Logging
    'configure_logging',
    'is_configured',
]
