"""Gram matrix constructors, centering and bandwidth selection."""

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np
from scipy.spatial.distance import cdist, pdist

SYMMETRY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric n x n kernel matrix."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError(f"Gram matrix must be square, got shape {values.shape}")
        if not np.allclose(values, values.T, rtol=0.0, atol=SYMMETRY_TOLERANCE):
            raise ValueError("Gram matrix must be symmetric")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError(f"points must be a sequence of equal-length vectors, got shape {arr.shape}")
    return arr


def gaussian_gram(points: Sequence[Sequence[float]], sigma: float) -> GramMatrix:
    """K[i, j] = exp(-||x_i - x_j||^2 / (2 sigma^2))."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    try:
        x = _as_points(points)
    except ValueError as e:
        raise ValueError(f"dimension mismatch: {e}")
    sq_dists = cdist(x, x, metric='sqeuclidean')
    k = np.exp(-sq_dists / (2.0 * sigma ** 2))
    return GramMatrix(0.5 * (k + k.T))


def delta_gram(labels: Sequence[Hashable]) -> GramMatrix:
    """K[i, j] = 1 when labels i and j are equal, else 0."""
    if len(labels) == 0:
        raise ValueError("labels must be nonempty")
    _, codes = np.unique(np.asarray(labels, dtype=object).astype(str), return_inverse=True)
    return GramMatrix((codes[:, None] == codes[None, :]).astype(np.float64))


def center_gram(K: GramMatrix) -> GramMatrix:
    """H K H with H = I - 11^T / n, computed by subtracting row/column means."""
    k = K.values
    row_mean = k.mean(axis=0, keepdims=True)
    col_mean = k.mean(axis=1, keepdims=True)
    centered = k - row_mean - col_mean + k.mean()
    return GramMatrix(0.5 * (centered + centered.T))


def median_heuristic(points: Sequence[Sequence[float]]) -> float:
    """Median pairwise Euclidean distance; 1.0 when that median is zero."""
    x = _as_points(points)
    if x.shape[0] < 2:
        raise ValueError("median heuristic needs at least 2 points")
    median = float(np.median(pdist(x, metric='euclidean')))
    return median if median > 0.0 else 1.0
