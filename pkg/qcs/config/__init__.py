"""Configuration package for the quantized CS toolkit.

This package contains configuration management modules:
- settings: Environment variables, YAML settings and validation
- experiment: Monte Carlo experiment configuration
"""

from .settings import (
    Settings,
    LoggingConfig,
    SolverConfig,
    PursuitConfig,
    QuantizerConfig,
    ModelConfig,
    ConfigError,
    get_settings,
    get_seed_override,
    load_settings_from_yaml,
    reset_settings,
)
from .experiment import (
    ExperimentConfig,
    QUANTIZER_KINDS,
    ALGORITHMS,
    MATRIX_MODES,
    TRAINING_MODES,
)

__all__ = [
    'Settings',
    'LoggingConfig',
    'SolverConfig',
    'PursuitConfig',
    'QuantizerConfig',
    'ModelConfig',
    'ConfigError',
    'get_settings',
    'get_seed_override',
    'load_settings_from_yaml',
    'reset_settings',
    'ExperimentConfig',
    'QUANTIZER_KINDS',
    'ALGORITHMS',
    'MATRIX_MODES',
    'TRAINING_MODES',
]
