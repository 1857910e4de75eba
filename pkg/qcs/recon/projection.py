"""Least-squares projection onto the span of a column subset."""

from typing import Optional, Sequence

import numpy as np
from scipy import linalg

from ..config.settings import get_settings
from ..utils.validation import ValidationError, validate_finite_array


class RankDeficiencyError(np.linalg.LinAlgError):
    """A column subset is not numerically full column rank."""

    def __init__(self, ratio: float, support: Optional[Sequence[int]] = None):
        self.ratio = ratio
        self.support = tuple(int(j) for j in support) if support is not None else None
        where = f" on support {list(self.support)}" if self.support is not None else ""
        super().__init__(f"rank deficient{where}: smallest/largest singular value = {ratio:.3g}")


class LeastSquaresProjector:
    """Economic QR of Phi_T reused for pcoeff, proj and resid.

    Args:
        phi_T: m x |T| column subset
        support: Column indices, only used in error messages
        rank_tol: Relative singular-value floor for full column rank
    """

    def __init__(self, phi_T: np.ndarray, support: Optional[Sequence[int]] = None,
                 rank_tol: Optional[float] = None):
        phi_T = validate_finite_array(phi_T, "Phi_T", ndim=2)
        m, t = phi_T.shape
        if t > m:
            raise RankDeficiencyError(0.0, support)
        self.phi_T = phi_T
        rank_tol = get_settings().pursuit.rank_tol if rank_tol is None else rank_tol
        if t == 0:
            self._q = np.zeros((m, 0))
            self._r = np.zeros((0, 0))
            return
        self._q, self._r = linalg.qr(phi_T, mode="economic")
        sv = linalg.svdvals(self._r)
        ratio = float(sv[-1] / sv[0]) if sv[0] > 0 else 0.0
        if ratio <= rank_tol:
            raise RankDeficiencyError(ratio, support)

    @property
    def m(self) -> int:
        return self.phi_T.shape[0]

    def _check(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if y.shape != (self.m,):
            raise ValidationError(f"expected a length-{self.m} vector, got shape {y.shape}")
        return y

    def pcoeff(self, y) -> np.ndarray:
        y = self._check(y)
        if self._r.size == 0:
            return np.zeros(0)
        return linalg.solve_triangular(self._r, self._q.T @ y)

    def proj(self, y) -> np.ndarray:
        return self.phi_T @ self.pcoeff(y)

    def resid(self, y) -> np.ndarray:
        y = self._check(y)
        return y - self.phi_T @ self.pcoeff(y)


def pcoeff(y, phi_T) -> np.ndarray:
    """(Phi_T* Phi_T)^-1 Phi_T* y, via QR."""
    return LeastSquaresProjector(phi_T).pcoeff(y)


def proj(y, phi_T) -> np.ndarray:
    return LeastSquaresProjector(phi_T).proj(y)


def resid(y, phi_T) -> np.ndarray:
    return LeastSquaresProjector(phi_T).resid(y)


def matrix_entries(phi) -> np.ndarray:
    """Dense entries of a MeasurementMatrix or array-like."""
    entries = getattr(phi, "entries", phi)
    return validate_finite_array(entries, "measurement matrix", ndim=2)
