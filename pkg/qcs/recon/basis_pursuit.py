"""Basis Pursuit and its quantization-consistent variant by ADMM.

BP solves  min ||x||_1  s.t.  Phi x = y  by splitting x = z and alternating
an affine projection with soft thresholding. QBP solves
min ||x||_1  s.t.  Phi x in B  by splitting on the graph of Phi: the pair
(x, w = Phi x) is projected onto the graph, x is thresholded and w is
clipped into the box.

Both programs are positively homogeneous, so the iteration runs on the data
divided by its RMS level and the estimate is scaled back; with the fixed
penalty this keeps the threshold matched to the signal size. Whenever the
support (and for QBP the active rows) holds still over a window, the
iterate is polished: the active equations are solved exactly on the
support and the ADMM multipliers are repaired into a dual point. A relative
duality gap within eps_obj certifies the polished point as optimal.
"""

from typing import NamedTuple, Optional

import numpy as np
from loguru import logger
from scipy import linalg

from ..config.settings import SolverConfig, get_settings
from ..quant.scalar import BoxRegion
from ..utils.validation import ValidationError, validate_finite_array
from .projection import LeastSquaresProjector, RankDeficiencyError, matrix_entries


class BPResult(NamedTuple):
    x: np.ndarray
    converged: bool
    iterations: int
    primal_residual: float
    objective: float


def shrink(v: np.ndarray, threshold) -> np.ndarray:
    """Soft thresholding, the prox of threshold * ||.||_1."""
    return np.sign(v) * np.maximum(np.abs(v) - threshold, 0.0)


def _column_scaling(entries: np.ndarray, precondition: bool) -> np.ndarray:
    if not precondition:
        return np.ones(entries.shape[1])
    norms = np.linalg.norm(entries, axis=0)
    return np.where(norms > 0, norms, 1.0)


def _rms_level(values: np.ndarray) -> float:
    level = float(np.linalg.norm(values)) / np.sqrt(values.size)
    return level if level > 0 else 1.0


class _AffineProjector:
    """Projection onto {x : Phi x = y}; falls back to the pseudo-inverse when Phi Phi* is singular."""

    def __init__(self, entries: np.ndarray, y: np.ndarray):
        self.entries = entries
        self.y = y
        try:
            self._factor = linalg.cho_factor(entries @ entries.T)
            self._pinv = None
        except linalg.LinAlgError:
            logger.debug("basis pursuit: Phi Phi* not positive definite, using pseudo-inverse")
            self._factor = None
            self._pinv = linalg.pinv(entries)

    def __call__(self, w: np.ndarray) -> np.ndarray:
        r = self.entries @ w - self.y
        if self._factor is not None:
            return w - self.entries.T @ linalg.cho_solve(self._factor, r)
        return w - self._pinv @ r

    def multiplier(self, v: np.ndarray) -> np.ndarray:
        """nu with Phi* nu closest to v."""
        if self._factor is not None:
            return linalg.cho_solve(self._factor, self.entries @ v)
        return self._pinv.T @ v


class _Monitor:
    """Windowed objective test plus best-feasibility bookkeeping."""

    def __init__(self, config: SolverConfig):
        self.config = config
        self.objectives = []
        self.best = None
        self.best_residual = np.inf

    def update(self, x: np.ndarray, residual: float) -> bool:
        objective = float(np.sum(np.abs(x)))
        self.objectives.append(objective)
        if residual < self.best_residual:
            self.best, self.best_residual = x.copy(), residual
        window = self.config.window
        if residual > self.config.eps_feas or len(self.objectives) <= window:
            return False
        change = abs(objective - self.objectives[-1 - window])
        return change <= self.config.eps_obj * max(1.0, objective)


class _Polisher:
    """Active-set solve plus duality-gap certificate for min ||x||_1 s.t. lower <= Phi x <= upper.

    Equality rows have lower == upper. Every quantity is in the caller's
    original units.
    """

    def __init__(self, entries: np.ndarray, lower: np.ndarray, upper: np.ndarray):
        self.entries = entries
        self.lower = lower
        self.upper = upper

    def __call__(self, support: np.ndarray, rows: np.ndarray, nu_est: np.ndarray):
        """Return (x, gap) for the given support and active rows, or None when the guess is unusable."""
        if support.size == 0 or rows.size == 0 or support.size > rows.size:
            return None
        at_lower = nu_est[rows] >= 0
        target = np.where(at_lower, self.lower[rows], self.upper[rows])
        if not np.all(np.isfinite(target)):
            return None
        block = self.entries[np.ix_(rows, support)]
        coeffs = linalg.lstsq(block, target)[0]
        x = np.zeros(self.entries.shape[1])
        x[support] = coeffs

        # repair the multipliers so Phi_T* nu matches the signs on the support
        nu_rows = nu_est[rows] - linalg.lstsq(block.T, block.T @ nu_est[rows] - np.sign(coeffs))[0]
        free = self.lower[rows] < self.upper[rows]
        nu_rows = np.where(free & at_lower, np.maximum(nu_rows, 0.0), nu_rows)
        nu_rows = np.where(free & ~at_lower, np.minimum(nu_rows, 0.0), nu_rows)
        nu = np.zeros(self.entries.shape[0])
        nu[rows] = nu_rows
        return x, self.gap(x, nu)

    def gap(self, x: np.ndarray, nu: np.ndarray) -> float:
        """Relative gap between ||x||_1 and the dual value of nu, rescaled into dual feasibility."""
        nu = nu / max(1.0, float(np.max(np.abs(self.entries.T @ nu), initial=0.0)))
        lower = np.where(nu > 0, self.lower, 0.0)
        upper = np.where(nu < 0, self.upper, 0.0)
        dual = float(np.sum(nu * lower + nu * upper))
        objective = float(np.sum(np.abs(x)))
        return (objective - dual) / max(1.0, objective)


def _debias(entries: np.ndarray, y: np.ndarray, x: np.ndarray, threshold: float) -> np.ndarray:
    support = np.flatnonzero(np.abs(x) > threshold)
    if support.size == 0 or support.size > entries.shape[0]:
        return x
    try:
        coeffs = LeastSquaresProjector(entries[:, support], support=support).pcoeff(y)
    except RankDeficiencyError as e:
        logger.warning("basis pursuit: debias skipped ({})", e)
        return x
    out = np.zeros_like(x)
    out[support] = coeffs
    return out


def bp_reconstruct(phi, y, solver: Optional[SolverConfig] = None) -> BPResult:
    """Equality-constrained l1 minimization.

    Terminates when ||Phi z - y|| <= eps_feas * max(1, ||y||) and either the
    l1 objective moved by at most eps_obj * max(1, f) over the last
    ``window`` iterations or a polished iterate has relative duality gap at
    most eps_obj. At the iteration cap the most feasible iterate is returned
    with ``converged=False``.

    Args:
        phi: MeasurementMatrix or m x N array
        y: Measurements
        solver: ADMM parameters (defaults from settings)
    """
    entries = matrix_entries(phi)
    y = validate_finite_array(y, "y", ndim=1)
    if y.size != entries.shape[0]:
        raise ValidationError(f"y has length {y.size}, matrix has {entries.shape[0]} rows")
    config = solver or get_settings().solver
    m, N = entries.shape
    if not np.any(y):
        return BPResult(np.zeros(N), True, 0, 0.0, 0.0)

    level = _rms_level(y)
    weights = _column_scaling(entries, config.precondition)
    scaled = entries / weights
    thresholds = 1.0 / (config.rho * weights)
    project = _AffineProjector(scaled, y / level)
    y_norm = max(1.0, float(np.linalg.norm(y)))
    polish = _Polisher(entries, y, y)
    all_rows = np.arange(m)

    def feasibility(x):
        return float(np.linalg.norm(entries @ x - y)) / y_norm

    z = np.zeros(N)
    u = np.zeros(N)
    monitor = _Monitor(config)
    converged = False
    result = None
    pattern = None
    iteration = 0
    for iteration in range(1, config.max_iter + 1):
        x = project(z - u)
        z = shrink(x + u, thresholds)
        u += x - z
        estimate = z * level / weights
        if monitor.update(estimate, feasibility(estimate)):
            converged, result = True, estimate
            break
        if iteration % config.window:
            continue
        current = z != 0
        if pattern is not None and np.array_equal(current, pattern):
            candidate = polish(np.flatnonzero(current), all_rows, project.multiplier(config.rho * u))
            if candidate is not None:
                polished, gap = candidate
                if feasibility(polished) <= config.eps_feas and gap <= config.eps_obj:
                    converged, result = True, polished
                    break
        pattern = current

    if not converged:
        result = monitor.best
        logger.warning("basis pursuit: no convergence in {} iterations (residual {:.3g})",
                       config.max_iter, monitor.best_residual)
    if config.debias:
        result = _debias(entries, y, result, config.debias_thresh)
    return BPResult(result, converged, iteration, feasibility(result), float(np.sum(np.abs(result))))


def qbp_reconstruct(phi, box: BoxRegion, solver: Optional[SolverConfig] = None) -> BPResult:
    """l1 minimization subject to Phi x lying in the box.

    Feasibility is the largest box violation of Phi z, measured in cell
    widths (or absolutely for unbounded or degenerate cells). Termination
    mirrors bp_reconstruct with that violation in place of the residual.
    """
    entries = matrix_entries(phi)
    if box.m != entries.shape[0]:
        raise ValidationError(f"box has {box.m} coordinates, matrix has {entries.shape[0]} rows")
    config = solver or get_settings().solver
    m, N = entries.shape
    if box.contains(np.zeros(m)):
        return BPResult(np.zeros(N), True, 0, 0.0, 0.0)

    level = _rms_level(box.center())
    unit_box = BoxRegion(box.lower / level, box.upper / level)
    weights = _column_scaling(entries, config.precondition)
    scaled = entries / weights
    thresholds = 1.0 / (config.rho * weights)
    # (I + A*A)^-1 = I - A*(I + A A*)^-1 A
    factor = linalg.cho_factor(np.eye(m) + scaled @ scaled.T)
    polish = _Polisher(entries, box.lower, box.upper)

    def graph_project(c, d):
        rhs = c + scaled.T @ d
        x = rhs - scaled.T @ linalg.cho_solve(factor, scaled @ rhs)
        return x, scaled @ x

    def feasibility(x):
        return box.violation(entries @ x)

    z = np.zeros(N)
    s = unit_box.clip(unit_box.center())
    u = np.zeros(N)
    t = np.zeros(m)
    monitor = _Monitor(config)
    converged = False
    result = None
    pattern = None
    iteration = 0
    for iteration in range(1, config.max_iter + 1):
        x, w = graph_project(z - u, s - t)
        z = shrink(x + u, thresholds)
        s = unit_box.clip(w + t)
        u += x - z
        # (t + w) - s is exactly zero on rows the clip left alone
        t = t + w - s
        estimate = z * level / weights
        if monitor.update(estimate, feasibility(estimate)):
            converged, result = True, estimate
            break
        if iteration % config.window:
            continue
        # rows pressing on a face carry a nonzero multiplier -rho * t
        current = np.concatenate([z != 0, np.sign(t)])
        if pattern is not None and np.array_equal(current, pattern):
            candidate = polish(np.flatnonzero(z), np.flatnonzero(t), -config.rho * t)
            if candidate is not None:
                polished, gap = candidate
                if feasibility(polished) <= config.eps_feas and gap <= config.eps_obj:
                    converged, result = True, polished
                    break
        pattern = current

    if not converged:
        result = monitor.best
        logger.warning("modified basis pursuit: no convergence in {} iterations (violation {:.3g})",
                       config.max_iter, monitor.best_residual)
    return BPResult(result, converged, iteration, feasibility(result), float(np.sum(np.abs(result))))
