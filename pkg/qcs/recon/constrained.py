"""Consistent projection of a quantization cell onto a column span.

Given a box B (the cell of the quantized measurements) and a column subset
Phi_T, find the pair (x, y) with y in B minimizing ||y - Phi_T x||, and
among all minimizers the one whose y is closest to the quantized value
Y_hat. The quantized residual and coefficients are read off that pair.
"""

from typing import NamedTuple, Optional, Sequence

import numpy as np
from loguru import logger

from ..config.settings import PursuitConfig, get_settings
from ..quant.scalar import BoxRegion
from ..utils.validation import ValidationError, validate_finite_array
from .projection import LeastSquaresProjector


FEASIBILITY_TOL = 1e-6
_STALL = 1e-12


class ConvergenceError(RuntimeError):
    """Constrained projection stopped at max_iter with a large feasibility gap."""

    def __init__(self, iterations: int, gap: float):
        self.iterations = iterations
        self.gap = gap
        super().__init__(f"constrained projection did not converge in {iterations} iterations (gap {gap:.3g})")


class ConstrainedProjection(NamedTuple):
    x: np.ndarray
    y: np.ndarray
    dist: float
    # False when phase 2 stalled and the phase-1 pair stands in
    converged: bool = True


def _alternate(projector: LeastSquaresProjector, box: BoxRegion, y_hat: np.ndarray,
               stall: float, max_iter: int):
    """Alternating minimization of ||y - Phi_T x|| over box x coefficients, from y = Y_hat."""
    y = y_hat.copy()
    for iteration in range(1, max_iter + 1):
        x = projector.pcoeff(y)
        y_new = box.clip(projector.phi_T @ x)
        step = float(np.linalg.norm(y_new - y))
        y = y_new
        if step <= stall:
            return y, iteration, True
    return y, max_iter, False


def _dykstra(projector: LeastSquaresProjector, box: BoxRegion, start: np.ndarray,
             offset: np.ndarray, stall: float, max_iter: int):
    """Projection of ``start`` onto box intersected with (span(Phi_T) + offset).

    The box projection runs last so the iterate always lies in the box.
    """
    z = start.copy()
    p = np.zeros_like(z)
    q = np.zeros_like(z)
    for iteration in range(1, max_iter + 1):
        w = z + p
        a = projector.proj(w - offset) + offset
        p = w - a
        u = a + q
        z_new = box.clip(u)
        q = u - z_new
        step = float(np.linalg.norm(z_new - z))
        z = z_new
        if step <= stall:
            return z, iteration, True
    return z, max_iter, False


def constrained_projection(
    phi_T: np.ndarray,
    box: BoxRegion,
    y_hat,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    support: Optional[Sequence[int]] = None,
    projector: Optional[LeastSquaresProjector] = None,
    strict: bool = False,
    config: Optional[PursuitConfig] = None,
) -> ConstrainedProjection:
    """Distance-minimizing pair (x, y), y in the box, closest to Y_hat among minimizers.

    Phase 1 alternates x = pcoeff(y), y = clip(Phi_T x) from Y_hat; its limit
    gives the minimal gap vector v (zero when the box meets the span,
    detected at dist <= tol * (1 + ||Y_hat||)). Phase 2 runs Dykstra's
    corrected projections from Y_hat onto box intersected with
    (span + v), which picks the minimizer nearest Y_hat.

    Args:
        phi_T: m x |T| column subset, full column rank
        box: Quantization cell
        y_hat: Quantized measurements, inside the box
        tol: Relative intersection tolerance
        max_iter: Iteration cap per phase
        support: Column indices, for error messages
        projector: Precomputed LeastSquaresProjector for phi_T
        strict: Raise instead of falling back when phase 2 does not settle
        config: Tolerances and caps (defaults from settings)

    Returns:
        ConstrainedProjection(x, y, dist, converged). When phase 2 stops at
        max_iter with a feasibility gap above 1e-6 * (1 + ||Y_hat||), the
        phase-1 pair is returned with converged=False.

    Raises:
        RankDeficiencyError: If phi_T is rank deficient
        ConvergenceError: In strict mode, instead of the phase-1 fallback
    """
    y_hat = validate_finite_array(y_hat, "Y_hat", ndim=1)
    if y_hat.size != box.m:
        raise ValidationError(f"Y_hat has length {y_hat.size}, box has {box.m} coordinates")
    if not box.contains(y_hat, tol=1e-12 * (1 + np.abs(y_hat).max(initial=0.0))):
        raise ValidationError("Y_hat must lie inside the box")
    y_hat = box.clip(y_hat)

    config = config or get_settings().pursuit
    tol = config.projection_tol if tol is None else float(tol)
    max_iter = config.projection_max_iter if max_iter is None else int(max_iter)
    projector = projector or LeastSquaresProjector(phi_T, support=support, rank_tol=config.rank_tol)

    scale = 1.0 + float(np.linalg.norm(y_hat))
    if box.is_singleton:
        x = projector.pcoeff(y_hat)
        return ConstrainedProjection(x, y_hat, float(np.linalg.norm(y_hat - projector.phi_T @ x)))

    stall = _STALL * scale
    y1, n1, settled = _alternate(projector, box, y_hat, stall, max_iter)
    if not settled:
        logger.warning("constrained projection: phase 1 still moving after {} iterations", n1)
    gap = projector.resid(y1)
    dist1 = float(np.linalg.norm(gap))
    intersecting = dist1 <= tol * scale
    offset = np.zeros_like(gap) if intersecting else gap

    y2, n2, settled = _dykstra(projector, box, y_hat, offset, stall, max_iter)
    feasibility = float(np.linalg.norm(projector.resid(y2) - offset))
    converged = True
    if not settled:
        if feasibility > FEASIBILITY_TOL * scale:
            if intersecting:
                # the phase-1 pair is feasible but not the one nearest Y_hat
                if strict:
                    raise ConvergenceError(n2, feasibility)
                converged = False
            logger.warning("constrained projection: phase 2 gap {:.3g}, keeping phase-1 pair", feasibility)
            y2 = y1
        else:
            logger.warning("constrained projection: phase 2 stopped at max_iter with gap {:.3g}", feasibility)

    x = projector.pcoeff(y2)
    dist = float(np.linalg.norm(y2 - projector.phi_T @ x))
    if dist > dist1 + FEASIBILITY_TOL * scale:
        # a drifting phase 2 never beats the phase-1 distance
        y2, x, dist = y1, projector.pcoeff(y1), dist1
    if dist <= tol * scale:
        dist = 0.0
    return ConstrainedProjection(x, y2, dist, converged)


def resid_q(y_hat, phi_T, box: BoxRegion, **kwargs) -> np.ndarray:
    """y_tilde - Phi_T x_tilde; exact zeros when the box meets the span."""
    kwargs.setdefault("strict", True)
    result = constrained_projection(phi_T, box, y_hat, **kwargs)
    if result.dist == 0.0:
        return np.zeros_like(result.y)
    return result.y - np.asarray(phi_T, dtype=float) @ result.x


def pcoeff_q(y_hat, phi_T, box: BoxRegion, **kwargs) -> np.ndarray:
    """x_tilde of the constrained projection."""
    kwargs.setdefault("strict", True)
    return constrained_projection(phi_T, box, y_hat, **kwargs).x


def reconstruction_error(x, x_hat) -> float:
    """Squared Euclidean error ||x - x_hat||^2."""
    x = np.asarray(getattr(x, "values", x), dtype=float)
    x_hat = np.asarray(getattr(x_hat, "values", x_hat), dtype=float)
    if x.shape != x_hat.shape:
        raise ValidationError(f"shape mismatch {x.shape} vs {x_hat.shape}")
    return float(np.sum((x - x_hat) ** 2))
