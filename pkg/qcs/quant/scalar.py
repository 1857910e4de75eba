"""Scalar quantizers: representation, Lloyd and optimal-uniform design, cell geometry.

Cells are indexed from 0. Cell i is the closed interval
[thresholds[i], thresholds[i + 1]], where ``thresholds`` has M + 1 entries
starting at -inf and ending at +inf. A value sitting exactly on a threshold
belongs to the lower cell.
"""

import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple, Union

import numpy as np
from loguru import logger
from scipy import integrate, optimize
from scipy.special import ndtr, ndtri
from scipy.stats import norm

from ..config.settings import get_settings
from ..utils.rng import Stream, keyed_generator, stream_id
from ..utils.validation import (
    ValidationError,
    validate_finite_array,
    validate_positive_float,
    validate_positive_int,
)
from .seeding import kmeans_pp_seeds


MIDPOINT_TOL = 1e-12
_TINY_PROB = 1e-300
# above this many levels Lloyd from quantiles needs far more than max_iter steps
COMPANDING_LEVELS = 32


class EmptyCellError(RuntimeError):
    """Lloyd design kept producing empty cells after repeated repairs."""

    def __init__(self, repairs: int, message: Optional[str] = None):
        self.repairs = repairs
        super().__init__(message or f"empty cells persisted after {repairs} consecutive repairs")


class NoBracketError(ValueError):
    """The step grid has no interior distortion minimum."""

    def __init__(self, step_min: float, step_max: float, at_edge: float):
        self.step_min = step_min
        self.step_max = step_max
        self.at_edge = at_edge
        super().__init__(
            f"distortion minimum over the step grid [{step_min:.6g}, {step_max:.6g}] "
            f"lies at the edge {at_edge:.6g}; widen the grid"
        )


# --- sources ---------------------------------------------------------------

@dataclass(frozen=True)
class GaussianSource:
    """Zero-mean Gaussian with standard deviation sigma."""
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "sigma", validate_positive_float(self.sigma, "sigma"))


@dataclass(frozen=True, eq=False)
class SampleSource:
    """Empirical distribution of a finite sample (stored sorted)."""
    samples: np.ndarray

    def __post_init__(self):
        samples = validate_finite_array(self.samples, "samples").ravel()
        if samples.size == 0:
            raise ValidationError("samples must be nonempty")
        samples = np.sort(samples)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def size(self) -> int:
        return self.samples.size

    @property
    def std(self) -> float:
        return float(np.std(self.samples))

    def n_distinct(self) -> int:
        return int(np.count_nonzero(np.diff(self.samples))) + 1


Source = Union[GaussianSource, SampleSource]


def as_source(source) -> Source:
    """Accept a source object or a raw array of samples."""
    if isinstance(source, (GaussianSource, SampleSource)):
        return source
    return SampleSource(np.asarray(source, dtype=float))


# --- Lloyd initializations ---------------------------------------------------

@dataclass(frozen=True)
class UniformSpread:
    """Initial levels at the 1/(M+1), ..., M/(M+1) quantiles of the source."""


@dataclass(frozen=True)
class KMeansPlusPlusLike:
    """Initial levels by D^2 sampling from the source (or a Gaussian pool)."""
    seed: int = 0


@dataclass(frozen=True)
class Companding:
    """Initial levels at the quantiles of the p^(1/3) point density.

    For a Gaussian source that density is again Gaussian with variance
    3 sigma^2, which puts Lloyd close to the high-rate optimum from the start.
    """


LloydInit = Union[UniformSpread, KMeansPlusPlusLike, Companding]


# --- quantizer types --------------------------------------------------------

class QuantizedVector(NamedTuple):
    levels: np.ndarray
    indices: np.ndarray


@dataclass(frozen=True, eq=False)
class ScalarQuantizer:
    """Ordered levels and the thresholds that delimit their cells."""
    levels: np.ndarray
    thresholds: np.ndarray

    def __post_init__(self):
        levels = validate_finite_array(self.levels, "levels", ndim=1).copy()
        thresholds = np.asarray(self.thresholds, dtype=float).copy()
        M = levels.size
        if M < 1:
            raise ValidationError("a quantizer needs at least one level")
        if thresholds.shape != (M + 1,):
            raise ValidationError(f"expected {M + 1} thresholds, got shape {thresholds.shape}")
        if thresholds[0] != -np.inf or thresholds[-1] != np.inf:
            raise ValidationError("outer thresholds must be -inf and +inf")
        inner = thresholds[1:-1]
        if not np.all(np.isfinite(inner)):
            raise ValidationError("inner thresholds must be finite")
        if np.any(np.diff(levels) <= 0):
            raise ValidationError("levels must be strictly increasing")
        if np.any(np.diff(thresholds) <= 0):
            raise ValidationError("thresholds must be strictly increasing")
        if np.any(levels < thresholds[:-1]) or np.any(levels > thresholds[1:]):
            raise ValidationError("every level must lie inside its own cell")
        levels.setflags(write=False)
        thresholds.setflags(write=False)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "thresholds", thresholds)

    @classmethod
    def from_levels(cls, levels) -> 'ScalarQuantizer':
        """Minimum-distance quantizer: thresholds at the level midpoints."""
        levels = np.asarray(levels, dtype=float)
        inner = (levels[:-1] + levels[1:]) / 2
        return cls(levels, np.concatenate(([-np.inf], inner, [np.inf])))

    @property
    def M(self) -> int:
        return self.levels.size

    @property
    def rate(self) -> float:
        """log2 M bits per sample."""
        return math.log2(self.M)

    @property
    def finite_thresholds(self) -> np.ndarray:
        return self.thresholds[1:-1]

    def is_nearest_level(self) -> bool:
        midpoints = (self.levels[:-1] + self.levels[1:]) / 2
        return bool(np.all(np.abs(self.finite_thresholds - midpoints) <= MIDPOINT_TOL * (1 + np.abs(midpoints))))

    def index(self, values) -> np.ndarray:
        return np.searchsorted(self.finite_thresholds, np.asarray(values, dtype=float), side="left")

    def quantize(self, values) -> QuantizedVector:
        """Vectorized apply_scalar; keeps the input shape."""
        indices = self.index(values)
        return QuantizedVector(self.levels[indices], indices)

    def __repr__(self):
        return f"ScalarQuantizer(M={self.M}, levels=[{self.levels[0]:.6g} .. {self.levels[-1]:.6g}])"


@dataclass(frozen=True, eq=False)
class BoxRegion:
    """Product of closed intervals; infinite bounds mark unbounded sides."""
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float).copy()
        upper = np.asarray(self.upper, dtype=float).copy()
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ValidationError("box bounds must be 1-d arrays of equal length")
        if np.any(np.isnan(lower)) or np.any(np.isnan(upper)):
            raise ValidationError("box bounds must not be NaN")
        if np.any(lower == np.inf) or np.any(upper == -np.inf):
            raise ValidationError("box is empty along some coordinate")
        if np.any(lower > upper):
            raise ValidationError("box has lower > upper along some coordinate")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def point(cls, y) -> 'BoxRegion':
        y = validate_finite_array(y, "point", ndim=1)
        return cls(y, y)

    @classmethod
    def unbounded(cls, m: int) -> 'BoxRegion':
        return cls(np.full(m, -np.inf), np.full(m, np.inf))

    @property
    def m(self) -> int:
        return self.lower.size

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def is_singleton(self) -> bool:
        return bool(np.all(self.lower == self.upper))

    def clip(self, y: np.ndarray) -> np.ndarray:
        return np.clip(y, self.lower, self.upper)

    def violation(self, y: np.ndarray) -> float:
        """Largest bound violation, scaled by the cell width (or 1 when unbounded or zero)."""
        excess = np.maximum(self.lower - y, 0) + np.maximum(y - self.upper, 0)
        scale = np.where(np.isfinite(self.widths) & (self.widths > 0), self.widths, 1.0)
        return float(np.max(excess / scale)) if excess.size else 0.0

    def contains(self, y: np.ndarray, tol: float = 0.0) -> bool:
        y = np.asarray(y, dtype=float)
        return bool(np.all(y >= self.lower - tol) and np.all(y <= self.upper + tol))

    def center(self) -> np.ndarray:
        """A point inside the box; finite ends stand in for unbounded sides."""
        lower = np.where(np.isfinite(self.lower), self.lower, self.upper)
        upper = np.where(np.isfinite(self.upper), self.upper, self.lower)
        center = (lower + upper) / 2
        return np.where(np.isfinite(center), center, 0.0)


# --- operations -------------------------------------------------------------

def apply_scalar(q: ScalarQuantizer, y: float) -> Tuple[float, int]:
    """Quantize one value; returns (level, index)."""
    index = int(np.searchsorted(q.finite_thresholds, float(y), side="left"))
    return float(q.levels[index]), index


def uniform_quantizer(M: int, step: float) -> ScalarQuantizer:
    """Mid-rise uniform quantizer symmetric about 0 with M levels."""
    M = validate_positive_int(M, "M")
    step = validate_positive_float(step, "step")
    levels = (np.arange(M) - (M - 1) / 2) * step
    return ScalarQuantizer.from_levels(levels)


def box_region(q: ScalarQuantizer, quantized) -> BoxRegion:
    """Preimage cell of a quantized vector (levels+indices pair or bare indices)."""
    indices = quantized.indices if isinstance(quantized, QuantizedVector) else quantized
    indices = np.asarray(indices)
    if indices.ndim != 1 or not np.issubdtype(indices.dtype, np.integer):
        raise ValidationError("quantization indices must be a 1-d integer array")
    if indices.size and (indices.min() < 0 or indices.max() >= q.M):
        raise ValidationError(f"quantization index out of range for M={q.M}")
    return BoxRegion(q.thresholds[indices], q.thresholds[indices + 1])


def _std_cell_probs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # upper tail differences taken on the survival side for accuracy
    return np.where(a > 0, ndtr(-a) - ndtr(-b), ndtr(b) - ndtr(a))


def gaussian_cell_probs(q: ScalarQuantizer, sigma: float) -> np.ndarray:
    """Probability of each cell under N(0, sigma^2).

    Uses scipy's ``ndtr`` (Cephes erf/erfc rational approximations,
    absolute error well below 1e-12 on the real line).
    """
    sigma = validate_positive_float(sigma, "sigma")
    t = q.thresholds / sigma
    return _std_cell_probs(t[:-1], t[1:])


def _gaussian_centroids(levels: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """Truncated standard-normal means of every cell."""
    a, b = thresholds[:-1], thresholds[1:]
    p = _std_cell_probs(a, b)
    with np.errstate(divide="ignore", invalid="ignore"):
        means = (norm.pdf(a) - norm.pdf(b)) / p
    # cells too far out to carry probability keep a point of the cell
    fallback = np.where(np.isfinite(a) & np.isfinite(b), (a + b) / 2, np.where(np.isfinite(a), a, b))
    return np.where(p > _TINY_PROB, means, fallback)


def _gaussian_tail_mse(edge: np.ndarray, level: np.ndarray) -> np.ndarray:
    """Integral of (y - level)^2 phi(y) over [edge, inf)."""
    m0 = ndtr(-edge)
    m1 = norm.pdf(edge)
    m2 = m0 + edge * m1
    return m2 - 2 * level * m1 + level ** 2 * m0


def _gaussian_mse(levels: np.ndarray, thresholds: np.ndarray) -> float:
    """MSE of a quantizer on N(0, 1): adaptive quadrature on finite cells, closed form on tails."""
    M = levels.size
    if M == 1:
        return float(1.0 + levels[0] ** 2)

    total = float(_gaussian_tail_mse(np.array([thresholds[-2]]), np.array([levels[-1]]))[0])
    total += float(_gaussian_tail_mse(np.array([-thresholds[1]]), np.array([-levels[0]]))[0])
    if M > 2:
        a = thresholds[1:-2]
        w = thresholds[2:-1] - a
        omega = levels[1:-1]

        def integrand(u):
            y = a + w * u
            return w * (y - omega) ** 2 * norm.pdf(y)

        cells, _ = integrate.quad_vec(integrand, 0.0, 1.0, epsabs=1e-15, epsrel=1e-10, norm="max")
        total += float(np.sum(cells))
    return total


def distortion(q: ScalarQuantizer, source) -> float:
    """Mean squared quantization error of q under the source."""
    source = as_source(source)
    if isinstance(source, GaussianSource):
        s = source.sigma
        return s ** 2 * _gaussian_mse(q.levels / s, q.thresholds / s)
    levels, _ = q.quantize(source.samples)
    return float(np.mean((source.samples - levels) ** 2))


class LloydDesign(NamedTuple):
    quantizer: ScalarQuantizer
    history: List[float]


def initial_levels(source: Source, M: int, init: LloydInit) -> np.ndarray:
    """Sorted starting levels for Lloyd iteration (also seeds one-dimensional LBG)."""
    j = np.arange(1, M + 1)
    if isinstance(init, KMeansPlusPlusLike):
        rng = keyed_generator(init.seed, stream_id(Stream.DESIGN))
        if isinstance(source, GaussianSource):
            pool = source.sigma * rng.standard_normal(max(100 * M, 10_000))
        else:
            pool = source.samples
        return np.sort(kmeans_pp_seeds(pool, M, rng).ravel())

    if isinstance(init, Companding):
        z = math.sqrt(3.0) * ndtri((j - 0.5) / M)
        if isinstance(source, GaussianSource):
            return source.sigma * z
        levels = float(np.mean(source.samples)) + source.std * z
    elif isinstance(source, GaussianSource):
        return source.sigma * ndtri(j / (M + 1))
    else:
        levels = np.quantile(source.samples, j / (M + 1))

    if M > 1 and np.any(np.diff(levels) <= 0):
        # heavy ties: fall back to evenly spaced distinct sample values
        distinct = np.unique(source.samples)
        levels = distinct[np.round(np.linspace(0, distinct.size - 1, M)).astype(int)]
    return np.asarray(levels, dtype=float)


def _repair_empty_cells(levels: np.ndarray, samples: np.ndarray, indices: np.ndarray,
                        counts: np.ndarray) -> np.ndarray:
    """Move each empty cell's level to the midpoint of the most populous cell's extremes."""
    levels = levels.copy()
    counts = counts.astype(float)
    for empty in np.flatnonzero(counts == 0):
        order = np.argsort(-counts, kind="stable")
        for donor in order:
            start = np.searchsorted(indices, donor, side="left")
            end = np.searchsorted(indices, donor, side="right") - 1
            if counts[donor] > 0 and samples[start] < samples[end]:
                break
        else:
            raise EmptyCellError(0, "no populated cell can be split to refill an empty cell")
        lo, hi = samples[start], samples[end]
        new = (lo + hi) / 2
        if np.any(levels == new):
            new = (new + hi) / 2
        levels[empty] = new
        counts[donor] /= 2
        counts[empty] = counts[donor]
    return np.sort(levels)


def lloyd_design(
    source,
    M: int,
    init: Optional[LloydInit] = None,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> LloydDesign:
    """Design a locally optimal scalar quantizer with Lloyd's algorithm.

    Alternates midpoint thresholds with centroid levels. Gaussian sources
    use closed-form truncated-normal means; sample sources use cell means.
    The history records the distortion of every accepted iterate and never
    increases: an iterate that would raise it is discarded and design stops.

    Args:
        source: GaussianSource, SampleSource, or an array of samples
        M: Number of levels
        init: UniformSpread, KMeansPlusPlusLike(seed) or Companding; by default
            UniformSpread up to COMPANDING_LEVELS levels and Companding above
        tol: Relative distortion decrease below which iteration stops
        max_iter: Iteration cap

    Returns:
        LloydDesign(quantizer, history)

    Raises:
        ValidationError: If M < 1 or a sample source has fewer than M distinct values
        EmptyCellError: If empty cells persist through M consecutive repairs
    """
    source = as_source(source)
    M = validate_positive_int(M, "M")
    config = get_settings().quantizer
    tol = config.tol if tol is None else float(tol)
    max_iter = config.max_iter if max_iter is None else validate_positive_int(max_iter, "max_iter", minimum=0)
    if init is None:
        init = UniformSpread() if M <= COMPANDING_LEVELS else Companding()

    gaussian = isinstance(source, GaussianSource)
    if not gaussian and source.n_distinct() < M:
        raise ValidationError(f"need at least {M} distinct samples, got {source.n_distinct()}")

    def evaluate(levels):
        q = ScalarQuantizer.from_levels(levels)
        return q, distortion(q, source)

    current, current_d = evaluate(initial_levels(source, M, init))
    history = [current_d]
    consecutive_repairs = 0

    for iteration in range(max_iter):
        if current_d == 0:
            break
        if gaussian:
            s = source.sigma
            new_levels = s * _gaussian_centroids(current.levels / s, current.thresholds / s)
        else:
            samples = source.samples
            indices = current.index(samples)
            counts = np.bincount(indices, minlength=M)
            sums = np.bincount(indices, weights=samples, minlength=M)
            new_levels = np.where(counts > 0, sums / np.maximum(counts, 1), current.levels)
            if np.any(counts == 0):
                consecutive_repairs += 1
                logger.warning("lloyd: {} empty cell(s) at iteration {}, repairing",
                               int(np.sum(counts == 0)), iteration)
                if consecutive_repairs >= M:
                    raise EmptyCellError(consecutive_repairs)
                new_levels = _repair_empty_cells(new_levels, samples, indices, counts)
            else:
                consecutive_repairs = 0

        if np.any(np.diff(new_levels) <= 0):
            logger.debug("lloyd: levels collapsed at iteration {}, stopping", iteration)
            break
        candidate, candidate_d = evaluate(new_levels)
        if candidate_d > current_d:
            logger.debug("lloyd: distortion rose at iteration {}, keeping previous iterate", iteration)
            break
        previous_d = current_d
        current, current_d = candidate, candidate_d
        history.append(current_d)
        if previous_d - current_d <= tol * previous_d:
            break

    logger.debug("lloyd: M={} finished after {} updates, D={:.6g}", M, len(history) - 1, current_d)
    return LloydDesign(current, history)


class UniformDesign(NamedTuple):
    quantizer: ScalarQuantizer
    step: float


def uniform_design(
    source,
    M: int,
    step_grid: Optional[Tuple[float, float, int]] = None,
) -> UniformDesign:
    """Best symmetric uniform quantizer with M levels for the source.

    Sweeps the step over a grid, then refines the bracketing interval
    around the grid minimizer by golden-section search.

    Args:
        source: GaussianSource, SampleSource, or an array of samples
        M: Number of levels (at least 2)
        step_grid: (step_min, step_max, n_grid); defaults to
            (0.5 s / M, 12 s / M, 64) with s the source standard deviation

    Raises:
        NoBracketError: If the grid minimum sits at either end of the grid
    """
    source = as_source(source)
    M = validate_positive_int(M, "M", minimum=2)
    if step_grid is None:
        scale = source.sigma if isinstance(source, GaussianSource) else source.std
        if scale <= 0:
            raise ValidationError("sample source has zero spread")
        step_grid = (0.5 * scale / M, 12.0 * scale / M, get_settings().quantizer.uniform_grid)
    step_min, step_max, n_grid = step_grid
    step_min = validate_positive_float(step_min, "step_min")
    step_max = validate_positive_float(step_max, "step_max")
    n_grid = validate_positive_int(n_grid, "n_grid", minimum=3)
    if step_max <= step_min:
        raise ValidationError("step grid must have step_max > step_min")

    def objective(step):
        return distortion(uniform_quantizer(M, float(step)), source)

    grid = np.linspace(step_min, step_max, n_grid)
    values = np.array([objective(step) for step in grid])
    k = int(np.argmin(values))
    if k == 0 or k == n_grid - 1:
        raise NoBracketError(step_min, step_max, float(grid[k]))

    best_step, best_value = float(grid[k]), float(values[k])
    try:
        result = optimize.minimize_scalar(
            objective, bracket=(grid[k - 1], grid[k], grid[k + 1]), method="golden", tol=1e-10
        )
        if result.fun < best_value:
            best_step, best_value = float(result.x), float(result.fun)
    except ValueError as e:
        # flat bracket, keep the grid point
        logger.debug("uniform_design: golden refinement skipped ({})", e)

    logger.debug("uniform_design: M={} step={:.8g} D={:.6g}", M, best_step, best_value)
    return UniformDesign(uniform_quantizer(M, best_step), best_step)
