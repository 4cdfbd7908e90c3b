"""Pairwise distances under the seven supported metrics.

Scalar distances back the lazy symmetric cache used by the faithful
aggregation loop; ``pairwise_matrix`` is the vectorized (SciPy) route used
by the NumPy backend. Both obey the same edge conventions:

* cosine: 1 - x.y/(|x||y|); exactly one zero vector -> 1, both zero -> 0.
  Values below 1e-12 snap to exactly 0 so that duplicate points are
  detected identically regardless of summation order.
* jaccard: on nonzero supports, both supports empty -> 0
* hamming: fraction of coordinates that differ exactly
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .data import Dataset
from .errors import InputError, NumericError

METRICS = ("euclidean", "cosine", "chebyshev", "hamming", "jaccard",
           "mahalanobis", "minkowski")

# Integer codes shared with the compiled kernel.
METRIC_CODES = {name: i for i, name in enumerate(METRICS)}

# Cosine distances at or below this snap to exactly zero (see module doc).
COSINE_SNAP = 1e-12


@dataclass(frozen=True)
class MetricSpec:
    """A distance metric plus its parameters.

    ``p`` is the Minkowski order (only used by that metric; default 3 so it
    stays distinct from euclidean). Mahalanobis requires a precomputed
    inverse covariance, see :func:`mahalanobis_precompute`.
    """

    kind: str = "euclidean"
    p: float = 3.0
    inv_cov: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in METRICS:
            raise InputError(f"unknown metric {self.kind!r}")
        if self.p < 1:
            raise InputError(f"minkowski order p={self.p} must be >= 1")
        if self.inv_cov is not None:
            ic = np.asarray(self.inv_cov, dtype=np.float64)
            if ic.ndim != 2 or ic.shape[0] != ic.shape[1]:
                raise InputError("inv_cov must be a square matrix")
            if not np.allclose(ic, ic.T, rtol=1e-8, atol=1e-12):
                raise InputError("inv_cov must be symmetric")
            try:
                np.linalg.cholesky(ic)
            except np.linalg.LinAlgError:
                raise InputError("inv_cov must be positive-definite") from None
            object.__setattr__(self, "inv_cov", ic)


def distance(spec: MetricSpec, x, y) -> float:
    """Distance between two dense feature vectors (non-negative scalar)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise InputError(f"dimension mismatch: {x.shape} vs {y.shape}")
    kind = spec.kind
    if kind == "euclidean":
        return float(np.sqrt(np.sum((x - y) ** 2)))
    if kind == "cosine":
        nx = float(np.sqrt(np.dot(x, x)))
        ny = float(np.sqrt(np.dot(y, y)))
        if nx == 0.0 and ny == 0.0:
            return 0.0
        if nx == 0.0 or ny == 0.0:
            return 1.0
        d = float(1.0 - np.dot(x, y) / (nx * ny))
        return d if d > COSINE_SNAP else 0.0
    if kind == "chebyshev":
        return float(np.max(np.abs(x - y))) if len(x) else 0.0
    if kind == "hamming":
        if len(x) == 0:
            return 0.0
        return float(np.mean(x != y))
    if kind == "jaccard":
        sx = x != 0
        sy = y != 0
        union = int(np.sum(sx | sy))
        if union == 0:
            return 0.0
        return float(1.0 - np.sum(sx & sy) / union)
    if kind == "mahalanobis":
        if spec.inv_cov is None:
            raise InputError("mahalanobis needs a precomputed inv_cov")
        d = x - y
        quad = float(d @ spec.inv_cov @ d)
        return math.sqrt(quad) if quad > 0.0 else 0.0
    if kind == "minkowski":
        return float(np.sum(np.abs(x - y) ** spec.p) ** (1.0 / spec.p))
    raise InputError(f"unknown metric {kind!r}")


def pairwise_matrix(spec: MetricSpec, X: np.ndarray, out=None) -> np.ndarray:
    """Full k x k distance matrix (the vectorized backend's cache)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    kind = spec.kind
    if kind == "cosine":
        norms = np.sqrt((X * X).sum(axis=1))
        with np.errstate(divide="ignore", invalid="ignore"):
            sim = (X @ X.T) / np.outer(norms, norms)
        D = 1.0 - sim
        zero = norms == 0.0
        if zero.any():
            D[zero, :] = 1.0
            D[:, zero] = 1.0
            D[np.ix_(zero, zero)] = 0.0
        D[D <= COSINE_SNAP] = 0.0
        np.fill_diagonal(D, 0.0)
        return D
    if kind == "jaccard":
        support = (X != 0).astype(np.float64)
        D = cdist(support, support, "jaccard")
        return D
    if kind == "mahalanobis":
        if spec.inv_cov is None:
            raise InputError("mahalanobis needs a precomputed inv_cov")
        return cdist(X, X, "mahalanobis", VI=spec.inv_cov)
    if kind == "minkowski":
        return cdist(X, X, "minkowski", p=spec.p)
    if kind in ("euclidean", "chebyshev", "hamming"):
        return cdist(X, X, kind)
    raise InputError(f"unknown metric {kind!r}")


def mahalanobis_precompute(d: Dataset | np.ndarray, ridge: float = 1e-6) -> np.ndarray:
    """Inverse of (sample covariance + ridge * I), symmetrized.

    Requires more points than features; raises NumericError (with a
    condition estimate) if the ridged covariance is still not invertible.
    """
    X = d.X if isinstance(d, Dataset) else np.asarray(d, dtype=np.float64)
    k, n = X.shape
    if k <= n:
        raise InputError(f"mahalanobis needs k > n (got k={k}, n={n})")
    cov = np.cov(X, rowvar=False)
    cov = np.atleast_2d(cov) + ridge * np.eye(n)
    try:
        np.linalg.cholesky(cov)
        inv = np.linalg.inv(cov)
    except np.linalg.LinAlgError:
        raise NumericError(
            "covariance is singular even after ridge "
            f"(condition estimate {np.linalg.cond(cov):.3e})"
        ) from None
    return (inv + inv.T) / 2.0


class DistanceCache:
    """Lazy symmetric cache: each unordered pair is computed at most once."""

    def __init__(self, spec: MetricSpec, X: np.ndarray):
        self.spec = spec
        self.X = np.asarray(X, dtype=np.float64)
        self._store: dict[tuple[int, int], float] = {}
        self.computations = 0

    def get(self, i: int, j: int) -> float:
        if i == j:
            raise InputError("cached_distance requires i != j")
        if not (0 <= i < len(self.X) and 0 <= j < len(self.X)):
            raise InputError(f"point index out of range: ({i}, {j})")
        key = (i, j) if i < j else (j, i)
        d = self._store.get(key)
        if d is None:
            d = distance(self.spec, self.X[i], self.X[j])
            self._store[key] = d
            self.computations += 1
        return d


def cached_distance(cache: DistanceCache, i: int, j: int) -> float:
    """Distance between points i and j through the shared symmetric cache."""
    return cache.get(i, j)
