"""Measurement model: sensing matrices, sparse signals, and matrix statistics.

All generators are deterministic functions of (dimensions, seed, stream).
Values are immutable once built and safe to share between trial workers.
"""

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Tuple, Union

import numpy as np
from loguru import logger

from .config.settings import get_settings
from .quant.scalar import ScalarQuantizer
from .utils.rng import Stream, keyed_generator, stream_id
from .utils.validation import (
    ValidationError,
    validate_finite_array,
    validate_positive_int,
    validate_seed,
    validate_sparsity,
)


COLUMN_NORM_TOL = 1e-12
_EIG_BATCH = 4096


class MatrixMode(str, Enum):
    IID_SCALED = "iid-scaled"
    COLUMN_NORMALIZED = "column-normalized"


class RipMode(str, Enum):
    EXACT = "exact"
    SAMPLED = "sampled"


class EnumerationCapError(ValidationError):
    """Exact RIP evaluation would enumerate more supports than allowed."""

    def __init__(self, n_supports: int, cap: int):
        self.n_supports = n_supports
        self.cap = cap
        super().__init__(f"C(N,K) = {n_supports} supports exceeds the enumeration cap {cap}")


@dataclass(frozen=True, eq=False)
class MeasurementMatrix:
    """Dense m x N sensing operator with generation metadata.

    ``quantized`` marks a matrix whose entries went through a scalar
    quantizer; ``mode`` keeps the mode it was generated with.
    """
    entries: np.ndarray
    mode: MatrixMode
    seed: Optional[int] = None
    quantized: bool = False

    def __post_init__(self):
        entries = validate_finite_array(self.entries, "matrix entries", ndim=2).copy()
        if entries.shape[0] < 1 or entries.shape[1] < 1:
            raise ValidationError(f"matrix must be at least 1x1, got {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "mode", MatrixMode(self.mode))
        if self.mode is MatrixMode.COLUMN_NORMALIZED and not self.quantized:
            norms = np.linalg.norm(entries, axis=0)
            if np.max(np.abs(norms - 1.0)) > COLUMN_NORM_TOL:
                raise ValidationError("column-normalized matrix has a column norm away from 1")

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def N(self) -> int:
        return self.entries.shape[1]

    @property
    def label(self) -> str:
        """Mode string, e.g. ``quantized(column-normalized)``."""
        return f"quantized({self.mode.value})" if self.quantized else self.mode.value

    def columns(self, support) -> np.ndarray:
        return self.entries[:, list(support)]


@dataclass(frozen=True, eq=False)
class SparseSignal:
    """Length-N vector with an explicit sorted support."""
    values: np.ndarray
    support: Tuple[int, ...]

    def __post_init__(self):
        values = validate_finite_array(self.values, "signal values", ndim=1).copy()
        support = tuple(sorted(int(j) for j in self.support))
        if len(set(support)) != len(support):
            raise ValidationError("support has repeated indices")
        if support and (support[0] < 0 or support[-1] >= values.size):
            raise ValidationError("support index out of range")
        off = np.ones(values.size, dtype=bool)
        off[list(support)] = False
        if np.any(values[off] != 0):
            raise ValidationError("signal has nonzero entries outside its support")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "support", support)

    @property
    def N(self) -> int:
        return self.values.size

    @property
    def K(self) -> int:
        return len(self.support)

    @classmethod
    def from_dense(cls, values) -> 'SparseSignal':
        values = np.asarray(values, dtype=float)
        return cls(values, tuple(np.flatnonzero(values)))

    @classmethod
    def from_support(cls, N: int, support, coefficients) -> 'SparseSignal':
        values = np.zeros(N)
        values[list(support)] = coefficients
        return cls(values, tuple(support))


class RipEstimate(NamedTuple):
    delta: float
    is_lower_bound: bool
    n_supports: int


def gen_gaussian_matrix(
    m: int,
    N: int,
    seed: int,
    mode: Union[MatrixMode, str] = MatrixMode.COLUMN_NORMALIZED,
    stream: int = 0,
) -> MeasurementMatrix:
    """Draw a Gaussian sensing matrix.

    IID_SCALED has i.i.d. N(0, 1/m) entries. COLUMN_NORMALIZED draws
    standard Gaussian entries and scales every column to unit norm.
    """
    m = validate_positive_int(m, "m")
    N = validate_positive_int(N, "N")
    seed = validate_seed(seed)
    mode = MatrixMode(mode)

    A = keyed_generator(seed, stream).standard_normal((m, N))
    if mode is MatrixMode.IID_SCALED:
        entries = A / math.sqrt(m)
    else:
        entries = A / np.linalg.norm(A, axis=0)
    return MeasurementMatrix(entries, mode, seed=seed)


def gen_sparse_signal(N: int, K: int, seed: int, stream: int = 0) -> SparseSignal:
    """Exactly K-sparse signal: uniform support, standard Gaussian nonzeros."""
    N = validate_positive_int(N, "N")
    K = validate_sparsity(K, N, allow_zero=True)
    seed = validate_seed(seed)

    rng = keyed_generator(seed, stream)
    support = np.sort(rng.choice(N, size=K, replace=False)) if K else np.array([], dtype=int)
    values = np.zeros(N)
    values[support] = rng.standard_normal(K)
    return SparseSignal(values, tuple(support))


def measure(phi: MeasurementMatrix, x: Union[SparseSignal, np.ndarray]) -> np.ndarray:
    """y = Phi x."""
    values = x.values if isinstance(x, SparseSignal) else np.asarray(x, dtype=float)
    if values.ndim != 1 or values.size != phi.N:
        raise ValidationError(f"signal length {values.size} does not match N={phi.N}")
    return phi.entries @ values


def mu1(phi: MeasurementMatrix) -> float:
    """(1/N) * sum of squared entries."""
    return float(np.sum(phi.entries ** 2) / phi.N)


def mu2(phi: MeasurementMatrix, K: int) -> float:
    """(m/K) * max over rows of the sum of the row's K largest squared entries.

    The maximum over K-subsets separates per row, so no enumeration is needed.
    """
    K = validate_sparsity(K, phi.N)
    squared = phi.entries ** 2
    top = np.partition(squared, phi.N - K, axis=1)[:, phi.N - K:]
    return float(phi.m / K * np.max(top.sum(axis=1)))


def _support_deviation(entries: np.ndarray, supports: np.ndarray) -> float:
    """max over supports of max(1 - lambda_min, lambda_max - 1) of the Gram matrix."""
    worst = 0.0
    for start in range(0, len(supports), _EIG_BATCH):
        batch = supports[start:start + _EIG_BATCH]
        sub = entries[:, batch].transpose(1, 0, 2)  # (batch, m, K)
        gram = np.einsum("bmi,bmj->bij", sub, sub)
        eig = np.linalg.eigvalsh(gram)
        worst = max(worst, float(np.max(1.0 - eig[:, 0])), float(np.max(eig[:, -1] - 1.0)))
    return worst


def rip_delta(
    phi: MeasurementMatrix,
    K: int,
    mode: Union[RipMode, str] = RipMode.SAMPLED,
    trials: Optional[int] = None,
    seed: int = 0,
    cap: Optional[int] = None,
) -> RipEstimate:
    """Restricted isometry constant of order K.

    EXACT enumerates every K-subset (supports of size < K are covered by
    eigenvalue interlacing). SAMPLED evaluates ``trials`` random supports and
    therefore returns a lower bound on the true constant.
    """
    K = validate_sparsity(K, phi.N)
    mode = RipMode(mode)
    model_config = get_settings().model

    if mode is RipMode.EXACT:
        cap = model_config.rip_enumeration_cap if cap is None else cap
        n_supports = math.comb(phi.N, K)
        if n_supports > cap:
            raise EnumerationCapError(n_supports, cap)
        supports = np.array(list(itertools.combinations(range(phi.N), K)), dtype=np.intp)
        delta = _support_deviation(phi.entries, supports)
        return RipEstimate(delta, False, n_supports)

    trials = model_config.rip_sampled_trials if trials is None else validate_positive_int(trials, "trials")
    rng = keyed_generator(seed, stream_id(Stream.SUPPORTS))
    supports = np.array([np.sort(rng.choice(phi.N, size=K, replace=False)) for _ in range(trials)], dtype=np.intp)
    delta = _support_deviation(phi.entries, supports)
    logger.debug("sampled delta_{} = {:.6g} over {} supports", K, delta, trials)
    return RipEstimate(delta, True, trials)


def quantize_matrix(phi: MeasurementMatrix, q: ScalarQuantizer) -> MeasurementMatrix:
    """Apply q entrywise; the result is marked quantized."""
    levels, _ = q.quantize(phi.entries)
    return MeasurementMatrix(levels, phi.mode, seed=phi.seed, quantized=True)
