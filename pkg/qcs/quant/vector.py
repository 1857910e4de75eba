"""Vector quantization and generalized Lloyd (LBG) codebook design."""

from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np
from loguru import logger
from scipy.spatial.distance import cdist

from ..config.settings import get_settings
from ..utils.rng import Stream, keyed_generator, stream_id
from ..utils.validation import ValidationError, validate_finite_array, validate_positive_int
from .scalar import SampleSource, UniformSpread, initial_levels
from .seeding import kmeans_pp_seeds


_CHUNK = 65536
_PERTURBATION = 1e-3


@dataclass(frozen=True, eq=False)
class VectorQuantizer:
    """M distinct codewords in k dimensions."""
    codebook: np.ndarray

    def __post_init__(self):
        codebook = validate_finite_array(self.codebook, "codebook", ndim=2).copy()
        if codebook.shape[0] < 1:
            raise ValidationError("codebook must have at least one codeword")
        if len(np.unique(codebook, axis=0)) != len(codebook):
            raise ValidationError("codewords must be pairwise distinct")
        codebook.setflags(write=False)
        object.__setattr__(self, "codebook", codebook)

    @property
    def M(self) -> int:
        return self.codebook.shape[0]

    @property
    def k(self) -> int:
        return self.codebook.shape[1]

    def index(self, points) -> np.ndarray:
        """Nearest codeword per row; ties go to the lowest index."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.k:
            raise ValidationError(f"points have dimension {points.shape[1]}, codebook has {self.k}")
        out = np.empty(len(points), dtype=np.intp)
        for start in range(0, len(points), _CHUNK):
            d2 = cdist(points[start:start + _CHUNK], self.codebook, "sqeuclidean")
            out[start:start + _CHUNK] = np.argmin(d2, axis=1)
        return out

    def quantize(self, points) -> np.ndarray:
        return self.codebook[self.index(points)]

    def distortion(self, points) -> float:
        """Per-dimension MSE: total squared error / (k * n_points)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return float(np.mean((points - self.quantize(points)) ** 2))


class LbgDesign(NamedTuple):
    quantizer: VectorQuantizer
    history: List[float]


def _split_worst_cells(codebook, points, labels, empty, rng):
    codebook = codebook.copy()
    errors = np.bincount(labels, weights=np.sum((points - codebook[labels]) ** 2, axis=1),
                         minlength=len(codebook))
    for j in empty:
        worst = int(np.argmax(errors))
        members = points[labels == worst]
        scale = float(np.std(members)) if len(members) > 1 else 1.0
        scale = scale if scale > 0 else 1.0
        candidate = codebook[worst] + _PERTURBATION * scale * rng.standard_normal(codebook.shape[1])
        while np.any(np.all(codebook == candidate, axis=1)):
            candidate = candidate + _PERTURBATION * scale * rng.standard_normal(codebook.shape[1])
        codebook[j] = candidate
        errors[worst] /= 2
        errors[j] = errors[worst]
    return codebook


def lbg_design(
    samples,
    M: int,
    seed: int = 0,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    initial_codebook=None,
) -> LbgDesign:
    """Generalized Lloyd design of an M-point codebook.

    Seeds by k-means++ unless ``initial_codebook`` is given; scalar samples
    (k = 1) start from the quantile levels lloyd_design uses, so the two
    designs coincide on the same data. Then alternates
    nearest-codeword partition and centroid update. Empty cells get a
    perturbed copy of the centroid of the cell with the largest squared
    error. Distortions are per-dimension MSE and never increase.

    Raises:
        ValidationError: If there are fewer distinct samples than M
    """
    points = validate_finite_array(samples, "samples")
    if points.ndim == 1:
        points = points[:, None]
    if points.ndim != 2:
        raise ValidationError("samples must be a 2-d array of k-vectors")
    M = validate_positive_int(M, "M")
    n_distinct = len(np.unique(points, axis=0))
    if n_distinct < M:
        raise ValidationError(f"need at least {M} distinct samples, got {n_distinct}")
    config = get_settings().quantizer
    tol = config.tol if tol is None else float(tol)
    max_iter = config.max_iter if max_iter is None else validate_positive_int(max_iter, "max_iter", minimum=0)

    rng = keyed_generator(seed, stream_id(Stream.DESIGN, 1))
    if initial_codebook is None and points.shape[1] == 1:
        codebook = initial_levels(SampleSource(points[:, 0]), M, UniformSpread())[:, None]
    elif initial_codebook is None:
        codebook = kmeans_pp_seeds(points, M, rng)
    else:
        codebook = validate_finite_array(initial_codebook, "initial_codebook").reshape(M, -1)

    current = VectorQuantizer(codebook)
    labels = current.index(points)
    current_d = float(np.mean((points - current.codebook[labels]) ** 2))
    history = [current_d]

    for iteration in range(max_iter):
        if current_d == 0:
            break
        counts = np.bincount(labels, minlength=M)
        sums = np.zeros_like(current.codebook)
        np.add.at(sums, labels, points)
        new = np.where(counts[:, None] > 0, sums / np.maximum(counts, 1)[:, None], current.codebook)
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            logger.warning("lbg: {} empty cell(s) at iteration {}, splitting", empty.size, iteration)
            new = _split_worst_cells(new, points, labels, empty, rng)
        if len(np.unique(new, axis=0)) != M:
            break

        candidate = VectorQuantizer(new)
        candidate_labels = candidate.index(points)
        candidate_d = float(np.mean((points - candidate.codebook[candidate_labels]) ** 2))
        if candidate_d > current_d:
            break
        previous_d = current_d
        current, labels, current_d = candidate, candidate_labels, candidate_d
        history.append(current_d)
        if previous_d - current_d <= tol * previous_d:
            break

    logger.debug("lbg: M={} k={} finished after {} updates, D={:.6g}",
                 M, points.shape[1], len(history) - 1, current_d)
    return LbgDesign(current, history)
