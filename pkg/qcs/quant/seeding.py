"""k-means++ style codebook seeding shared by the scalar and vector designers."""

import numpy as np

from ..utils.validation import ValidationError


def kmeans_pp_seeds(points: np.ndarray, M: int, rng: np.random.Generator) -> np.ndarray:
    """Pick M distinct rows of ``points`` by D^2 sampling.

    The first seed is uniform over the distinct rows; each later seed is
    drawn with probability proportional to its squared distance to the
    nearest seed chosen so far.
    """
    points = np.unique(np.atleast_2d(points.reshape(len(points), -1)), axis=0)
    if len(points) < M:
        raise ValidationError(f"need at least {M} distinct samples, got {len(points)}")

    seeds = np.empty((M, points.shape[1]))
    seeds[0] = points[rng.integers(len(points))]
    d2 = np.sum((points - seeds[0]) ** 2, axis=1)
    for j in range(1, M):
        total = d2.sum()
        if total <= 0:
            raise ValidationError("seeding ran out of distinct samples")
        choice = rng.choice(len(points), p=d2 / total)
        seeds[j] = points[choice]
        d2 = np.minimum(d2, np.sum((points - seeds[j]) ** 2, axis=1))
    return seeds
