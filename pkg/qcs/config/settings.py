"""Configuration management for the quantized CS toolkit.

Handles environment variables, YAML settings files, and validation of the
numerical defaults shared by the design, reconstruction, and bench layers.
"""

import os
import yaml
from pathlib import Path
from typing import Optional, Dict, Any, Union
from dataclasses import dataclass, field, asdict


SEED_ENV = "QCS_SEED"
CONFIG_ENV = "QCS_CONFIG"


class ConfigError(ValueError):
    """Raised when a settings or experiment file cannot be used."""

    def __init__(self, message: str, path: Optional[Union[str, Path]] = None):
        self.path = str(path) if path is not None else None
        prefix = f"{self.path}: " if self.path else ""
        super().__init__(f"{prefix}{message}")


@dataclass
class LoggingConfig:
    """Logging configuration."""
    level: str = "INFO"
    file: Optional[str] = None
    rotation: str = "1 day"
    retention: str = "30 days"
    format: str = "{time:YYYY-MM-DD HH:mm:ss} | {level} | {name}:{function}:{line} - {message}"

    def __post_init__(self):
        """Environment overrides for the sinks."""
        self.level = os.environ.get("QCS_LOG_LEVEL", self.level).upper()
        self.file = os.environ.get("QCS_LOG_FILE", self.file)


@dataclass
class SolverConfig:
    """Operator-splitting parameters for BP and QBP."""
    rho: float = 1.0
    eps_feas: float = 1e-8
    eps_obj: float = 1e-9
    window: int = 10
    max_iter: int = 20000
    debias: bool = False
    debias_thresh: float = 1e-4
    precondition: bool = False


@dataclass
class PursuitConfig:
    """Projection and greedy pursuit parameters."""
    rank_tol: float = 1e-10
    projection_tol: float = 1e-9
    projection_max_iter: int = 10000
    sp_iter_factor: int = 3


@dataclass
class QuantizerConfig:
    """Quantizer design parameters."""
    tol: float = 1e-10
    max_iter: int = 500
    uniform_grid: int = 64


@dataclass
class ModelConfig:
    """Matrix statistic parameters."""
    rip_enumeration_cap: int = 1_000_000
    rip_sampled_trials: int = 10_000


@dataclass
class Settings:
    """Main configuration class for the toolkit.

    Supports both environment variables and YAML configuration.
    """
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    pursuit: PursuitConfig = field(default_factory=PursuitConfig)
    quantizer: QuantizerConfig = field(default_factory=QuantizerConfig)
    model: ModelConfig = field(default_factory=ModelConfig)

    # Development settings
    debug: bool = False

    @classmethod
    def from_env(cls) -> 'Settings':
        """Create settings from environment variables."""
        config_path = os.environ.get(CONFIG_ENV)
        if config_path:
            return cls.from_yaml(config_path)
        return cls()

    @classmethod
    def from_yaml(cls, config_path: Union[str, Path]) -> 'Settings':
        """Load settings from YAML file.

        Args:
            config_path: Path to YAML configuration file

        Returns:
            Settings instance

        Raises:
            FileNotFoundError: If the file does not exist
            ConfigError: If the file is malformed or has unknown keys
        """
        config_path = Path(config_path)

        if not config_path.exists():
            raise FileNotFoundError(f"Configuration file not found: {config_path}")

        try:
            with open(config_path, 'r') as f:
                config_data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid YAML configuration: {e}", config_path)

        try:
            return cls(
                logging=LoggingConfig(**config_data.get('logging', {})),
                solver=SolverConfig(**config_data.get('solver', {})),
                pursuit=PursuitConfig(**config_data.get('pursuit', {})),
                quantizer=QuantizerConfig(**config_data.get('quantizer', {})),
                model=ModelConfig(**config_data.get('model', {})),
                debug=config_data.get('debug', False),
            )
        except TypeError as e:
            raise ConfigError(f"Error loading configuration: {e}", config_path)

    def validate(self) -> Dict[str, Any]:
        """Validate configuration and return status.

        Returns:
            Dictionary with validation results
        """
        issues = []

        if self.solver.rho <= 0:
            issues.append("Solver penalty rho must be positive")
        if self.solver.eps_feas <= 0 or self.solver.eps_obj <= 0:
            issues.append("Solver tolerances must be positive")
        if self.solver.window < 1:
            issues.append("Objective window must be at least 1")
        if self.solver.max_iter < 1:
            issues.append("Solver max_iter must be positive")

        if self.pursuit.rank_tol <= 0 or self.pursuit.projection_tol <= 0:
            issues.append("Pursuit tolerances must be positive")
        if self.pursuit.projection_max_iter < 1:
            issues.append("Projection max_iter must be positive")
        if self.pursuit.sp_iter_factor < 1:
            issues.append("SP iteration factor must be at least 1")

        if self.quantizer.tol < 0:
            issues.append("Quantizer tolerance must be non-negative")
        if self.quantizer.max_iter < 1:
            issues.append("Quantizer max_iter must be positive")
        if self.quantizer.uniform_grid < 3:
            issues.append("Uniform design grid needs at least 3 points")

        if self.model.rip_enumeration_cap < 1:
            issues.append("RIP enumeration cap must be positive")
        if self.model.rip_sampled_trials < 1:
            issues.append("RIP sampled trials must be positive")

        valid_levels = ['TRACE', 'DEBUG', 'INFO', 'SUCCESS', 'WARNING', 'ERROR', 'CRITICAL']
        if self.logging.level not in valid_levels:
            issues.append(f"Invalid log level. Must be one of: {valid_levels}")

        return {
            'is_valid': len(issues) == 0,
            'issues': issues,
        }

    def to_dict(self) -> Dict[str, Any]:
        """Convert settings to dictionary."""
        return {
            'logging': asdict(self.logging),
            'solver': asdict(self.solver),
            'pursuit': asdict(self.pursuit),
            'quantizer': asdict(self.quantizer),
            'model': asdict(self.model),
            'debug': self.debug,
        }

    def create_example_yaml(self, output_path: Union[str, Path]) -> None:
        """Create an example YAML configuration file.

        Args:
            output_path: Path where to save the example configuration
        """
        example_config = """# Quantized CS toolkit configuration
# Copy this file and point QCS_CONFIG at it

logging:
  level: "INFO"             # TRACE, DEBUG, INFO, WARNING, ERROR, CRITICAL
  file: "logs/qcs.log"      # omit to log to stderr only
  rotation: "1 day"
  retention: "30 days"

solver:                     # BP / QBP operator splitting
  rho: 1.0
  eps_feas: 1.0e-8          # relative primal feasibility
  eps_obj: 1.0e-9           # relative l1 change over the window
  window: 10
  max_iter: 20000
  debias: false
  debias_thresh: 1.0e-4
  precondition: false       # scale columns to unit norm inside the solver

pursuit:
  rank_tol: 1.0e-10         # smallest/largest singular value ratio
  projection_tol: 1.0e-9
  projection_max_iter: 10000
  sp_iter_factor: 3         # SP/QSP iteration cap = factor * K

quantizer:
  tol: 1.0e-10              # relative distortion decrease
  max_iter: 500
  uniform_grid: 64          # step sizes in the uniform brute-force sweep

model:
  rip_enumeration_cap: 1000000
  rip_sampled_trials: 10000

debug: false
"""

        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)

        with open(output_path, 'w') as f:
            f.write(example_config)


def get_seed_override() -> Optional[int]:
    """Master seed override from the environment, if set."""
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw, 0)
    except ValueError:
        raise ConfigError(f"{SEED_ENV} must be an integer, got {raw!r}")


# Global settings instance (lazy loading)
_global_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get global settings instance.

    Returns:
        Settings instance (created from environment if not exists)
    """
    global _global_settings
    if _global_settings is None:
        _global_settings = Settings.from_env()
    return _global_settings


def load_settings_from_yaml(config_path: Union[str, Path]) -> Settings:
    """Load settings from YAML file and set as global.

    Args:
        config_path: Path to YAML configuration file

    Returns:
        Settings instance
    """
    global _global_settings
    _global_settings = Settings.from_yaml(config_path)
    return _global_settings


def reset_settings() -> None:
    """Reset global settings (useful for testing)."""
    global _global_settings
    _global_settings = None
