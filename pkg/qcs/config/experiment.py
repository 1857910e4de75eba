"""Experiment configuration for the Monte Carlo bench.

A flat JSON (or YAML) document whose keys are exactly the fields of
ExperimentConfig. Unknown keys are rejected.
"""

from dataclasses import dataclass, field, fields, asdict, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import yaml

from .settings import ConfigError, get_seed_override


QUANTIZER_KINDS = ("lloyd", "uniform", "entropy")
ALGORITHMS = ("sp", "bp", "qsp", "qbp")
MATRIX_MODES = ("column-normalized", "iid-scaled")
TRAINING_MODES = ("empirical", "analytic")


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of one seeded Monte Carlo run."""
    m: int = 128
    N: int = 256
    K: int = 6
    rates: Tuple[int, ...] = (2, 3, 4, 5, 6)
    trials: int = 1000
    master_seed: int = 0
    quantizers: Tuple[str, ...] = ("lloyd", "uniform")
    algorithms: Tuple[str, ...] = ALGORITHMS
    matrix_mode: str = "column-normalized"
    quantizer_training: str = "empirical"
    training_samples: int = 1_000_000
    # analytic training only; None means sqrt(K/m), the per-coordinate std of y
    training_sigma: Optional[float] = None

    def __post_init__(self):
        # JSON gives lists; keep the frozen config hashable
        object.__setattr__(self, "rates", tuple(int(r) for r in self.rates))
        object.__setattr__(self, "quantizers", tuple(self.quantizers))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))

    @property
    def measurement_sigma(self) -> float:
        """Standard deviation used for analytic quantizer training."""
        if self.training_sigma is not None:
            return float(self.training_sigma)
        return (self.K / self.m) ** 0.5

    def validate(self) -> None:
        """Check the invariants, raising ConfigError on the first violation."""
        for name in ("m", "N", "trials", "training_samples"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if not isinstance(self.K, int) or self.K < 1:
            raise ConfigError(f"K must be a positive integer, got {self.K!r}")
        if self.K > self.N:
            raise ConfigError(f"K={self.K} exceeds N={self.N}")
        if not self.rates:
            raise ConfigError("rates must be nonempty")
        if any(r < 1 for r in self.rates):
            raise ConfigError(f"every rate must be >= 1, got {list(self.rates)}")
        if not self.quantizers or not set(self.quantizers) <= set(QUANTIZER_KINDS):
            raise ConfigError(f"quantizers must be a nonempty subset of {QUANTIZER_KINDS}")
        if not self.algorithms or not set(self.algorithms) <= set(ALGORITHMS):
            raise ConfigError(f"algorithms must be a nonempty subset of {ALGORITHMS}")
        if self.matrix_mode not in MATRIX_MODES:
            raise ConfigError(f"matrix_mode must be one of {MATRIX_MODES}")
        if self.quantizer_training not in TRAINING_MODES:
            raise ConfigError(f"quantizer_training must be one of {TRAINING_MODES}")
        if self.training_sigma is not None and self.training_sigma <= 0:
            raise ConfigError("training_sigma must be positive")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must fit in 64 unsigned bits")

    @classmethod
    def from_dict(cls, data: Dict[str, Any], source: Optional[Union[str, Path]] = None) -> 'ExperimentConfig':
        """Build a config from a flat mapping, rejecting unknown keys."""
        if not isinstance(data, dict):
            raise ConfigError("experiment config must be a flat mapping", source)
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}", source)
        try:
            config = cls(**data)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid experiment config: {e}", source)
        seed = get_seed_override()
        if seed is not None:
            config = replace(config, master_seed=seed)
        try:
            config.validate()
        except ConfigError as e:
            if source is None:
                raise
            raise ConfigError(str(e), source) from e
        return config

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'ExperimentConfig':
        """Load a config file (JSON is read through the YAML loader)."""
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Experiment config not found: {path}")
        try:
            with open(path, "r") as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"unparseable config: {e}", path)
        return cls.from_dict(data, source=path)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["rates"] = list(self.rates)
        data["quantizers"] = list(self.quantizers)
        data["algorithms"] = list(self.algorithms)
        return data
