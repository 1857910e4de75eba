"""Subspace Pursuit and its quantization-aware variant.

Both run the same greedy loop; they differ only in how a candidate support
is fitted. Standard SP uses least squares against y, QSP uses the
constrained projection of the quantization cell.
"""

from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from loguru import logger

from ..config.settings import PursuitConfig, get_settings
from ..model import SparseSignal
from ..quant.scalar import BoxRegion
from ..utils.validation import ValidationError, validate_finite_array, validate_positive_int
from .constrained import constrained_projection
from .projection import LeastSquaresProjector, matrix_entries


Fit = Callable[[Tuple[int, ...]], Tuple[np.ndarray, np.ndarray]]


class SPStep(NamedTuple):
    support: Tuple[int, ...]
    residual_norm: float


class SPResult(NamedTuple):
    signal: SparseSignal
    trace: List[SPStep]
    iterations: int
    converged: bool


def top_k(values: np.ndarray, K: int) -> Tuple[int, ...]:
    """Indices of the K largest magnitudes, ties to the lowest index, sorted."""
    order = np.argsort(-np.abs(values), kind="stable")
    return tuple(sorted(int(j) for j in order[:K]))


def _pursuit(entries: np.ndarray, target: np.ndarray, K: int, fit: Fit,
             max_iter: Optional[int], config: PursuitConfig) -> SPResult:
    """Greedy support refinement shared by SP and QSP.

    Stops as soon as a step fails to lower the residual norm, so an equal
    norm ends the loop one step earlier than a strict-increase rule would.
    """
    m, N = entries.shape
    K = validate_positive_int(K, "K")
    if K > N:
        raise ValidationError(f"K={K} exceeds N={N}")
    if 2 * K > m:
        logger.warning("subspace pursuit with 2K={} > m={}: candidate supports may be rank deficient", 2 * K, m)
    if max_iter is None:
        max_iter = config.sp_iter_factor * K
    max_iter = validate_positive_int(max_iter, "max_iter", minimum=0)

    cache: Dict[Tuple[int, ...], Tuple[np.ndarray, np.ndarray]] = {}

    def fitted(support):
        if support not in cache:
            cache[support] = fit(support)
        return cache[support]

    support = top_k(entries.T @ target, K)
    coeffs, residual = fitted(support)
    norm = float(np.linalg.norm(residual))
    trace = [SPStep(support, norm)]
    converged = norm == 0.0
    iterations = 0

    while not converged and iterations < max_iter:
        iterations += 1
        candidates = tuple(sorted(set(support) | set(top_k(entries.T @ residual, K))))
        wide, _ = fitted(candidates)
        keep = top_k(wide, K)
        new_support = tuple(candidates[i] for i in keep)
        new_coeffs, new_residual = fitted(new_support)
        new_norm = float(np.linalg.norm(new_residual))
        if new_norm >= norm:
            converged = True
            break
        support, coeffs, residual, norm = new_support, new_coeffs, new_residual, new_norm
        trace.append(SPStep(support, norm))
        converged = norm == 0.0

    signal = SparseSignal.from_support(N, support, coeffs)
    return SPResult(signal, trace, iterations, converged)


def sp_reconstruct(phi, y, K: int, max_iter: Optional[int] = None,
                   config: Optional[PursuitConfig] = None) -> SPResult:
    """Subspace Pursuit on unquantized (or quantized-as-exact) measurements.

    Args:
        phi: MeasurementMatrix or m x N array
        y: Measurements
        K: Sparsity
        max_iter: Iteration cap (default sp_iter_factor * K)
        config: Rank tolerance and iteration factor (defaults from settings)

    Returns:
        SPResult(signal, trace, iterations, converged)

    Raises:
        RankDeficiencyError: If a candidate support is rank deficient
    """
    entries = matrix_entries(phi)
    y = validate_finite_array(y, "y", ndim=1)
    if y.size != entries.shape[0]:
        raise ValidationError(f"y has length {y.size}, matrix has {entries.shape[0]} rows")
    config = config or get_settings().pursuit

    def fit(support):
        projector = LeastSquaresProjector(entries[:, list(support)], support=support, rank_tol=config.rank_tol)
        coeffs = projector.pcoeff(y)
        return coeffs, y - projector.phi_T @ coeffs

    return _pursuit(entries, y, K, fit, max_iter, config)


def qsp_reconstruct(phi, box: BoxRegion, y_hat, K: int, max_iter: Optional[int] = None,
                    tol: Optional[float] = None, projection_max_iter: Optional[int] = None,
                    config: Optional[PursuitConfig] = None) -> SPResult:
    """Subspace Pursuit with resid and pcoeff replaced by their quantized forms.

    A singleton box reproduces sp_reconstruct exactly. The result is flagged
    non-converged when any constrained projection fell back to its phase-1
    pair.
    """
    entries = matrix_entries(phi)
    y_hat = validate_finite_array(y_hat, "Y_hat", ndim=1)
    if y_hat.size != entries.shape[0] or box.m != entries.shape[0]:
        raise ValidationError("Y_hat, box and matrix rows must agree in length")
    config = config or get_settings().pursuit
    unsettled = []

    def fit(support):
        columns = entries[:, list(support)]
        projector = LeastSquaresProjector(columns, support=support, rank_tol=config.rank_tol)
        result = constrained_projection(columns, box, y_hat, tol=tol, max_iter=projection_max_iter,
                                        support=support, projector=projector, config=config)
        if not result.converged:
            unsettled.append(support)
        if result.dist == 0.0:
            return result.x, np.zeros_like(result.y)
        return result.x, result.y - columns @ result.x

    result = _pursuit(entries, y_hat, K, fit, max_iter, config)
    if unsettled:
        logger.warning("quantized subspace pursuit: {} projections fell back to phase 1", len(unsettled))
        result = result._replace(converged=False)
    return result
