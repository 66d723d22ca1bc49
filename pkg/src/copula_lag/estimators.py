"""Numerical kernels: rank transform, kNN distances, digamma and kNN entropy.

All entropies are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import rankdata

from .errors import (
    ConfigurationError,
    DegenerateSampleError,
    InsufficientSampleError,
    InvalidInputError,
)

Norm = Literal["chebyshev", "euclidean"]

EPS_MIN = 1e-15
"""Floor applied to zero neighbor distances before taking logs."""

_BRUTE_CHUNK = 256


@dataclass(frozen=True)
class EstimatorConfig:
    """Settings shared by the kNN entropy, CE and TE estimators.

    Parameters
    ----------
    k : int
        Neighbor count. Must be smaller than the number of observations.
    norm : {"chebyshev", "euclidean"}
        Distance used for the neighbor search.
    jitter_scale : float
        If positive, uniform noise in ``[0, jitter_scale)`` is added to the
        raw data before ranking to break ties.
    seed : int
        Seed for the jitter stream. Unused when ``jitter_scale == 0``.
    """

    k: int = 3
    norm: Norm = "chebyshev"
    jitter_scale: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ConfigurationError(f"k must be a positive integer, got {self.k!r}")
        if self.norm not in ("chebyshev", "euclidean"):
            raise ConfigurationError(f"unknown norm {self.norm!r}")
        if not (self.jitter_scale >= 0 and math.isfinite(self.jitter_scale)):
            raise ConfigurationError(f"jitter_scale must be >= 0, got {self.jitter_scale!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError(f"seed must fit in 64 bits, got {self.seed!r}")

    def as_dict(self) -> dict:
        return {"k": int(self.k), "norm": self.norm,
                "jitter_scale": float(self.jitter_scale), "seed": int(self.seed)}


def as_sample_matrix(x, name: str = "x") -> np.ndarray:
    """Return `x` as a finite float64 array of shape (T, d).

    One-dimensional input is treated as a single column.
    """
    a = np.asarray(x, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise InvalidInputError(f"{name} must be 1-D or 2-D, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidInputError(f"{name} is empty (shape {a.shape})")
    bad = ~np.isfinite(a)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise InvalidInputError(
            f"{name} has a non-finite value {a[row, col]!r} at row {row}, column {col}")
    return a


def apply_jitter(x: np.ndarray, cfg: EstimatorConfig) -> np.ndarray:
    """Add seeded uniform tie-breaking noise when ``cfg.jitter_scale > 0``."""
    if cfg.jitter_scale == 0:
        return x
    rng = np.random.default_rng(cfg.seed)
    return x + rng.uniform(0.0, cfg.jitter_scale, size=x.shape)


def empirical_copula_transform(x) -> np.ndarray:
    """Map each column through its empirical CDF.

    ``u[t, i] = #{s : x[s, i] <= x[t, i]} / T``, so ties share the largest
    rank and every entry lies in ``(0, 1]``.

    Parameters
    ----------
    x : array_like, shape (T,) or (T, d)

    Returns
    -------
    ndarray, shape (T, d)
        Pseudo-observations.
    """
    a = as_sample_matrix(x)
    ranks = rankdata(a, method="max", axis=0)
    return ranks.astype(np.float64) / a.shape[0]


def _check_k(n: int, k: int):
    if n <= k:
        raise InsufficientSampleError(
            f"need more than k={k} observations, got {n}")


def _brute_kth(points: np.ndarray, k: int, norm: Norm) -> np.ndarray:
    n = points.shape[0]
    out = np.empty(n)
    for start in range(0, n, _BRUTE_CHUNK):
        stop = min(start + _BRUTE_CHUNK, n)
        diff = points[start:stop, None, :] - points[None, :, :]
        if norm == "chebyshev":
            dist = np.abs(diff).max(axis=-1)
        else:
            dist = np.sqrt((diff * diff).sum(axis=-1))
        rows = np.arange(stop - start)
        dist[rows, rows + start] = np.inf
        out[start:stop] = np.partition(dist, k - 1, axis=1)[:, k - 1]
    return out


def _tree_kth(points: np.ndarray, k: int, norm: Norm, workers: int = 1) -> np.ndarray:
    p = np.inf if norm == "chebyshev" else 2
    # The query point is returned among its own neighbors at distance 0,
    # so the (k+1)-th hit is the k-th neighbor among the others.
    dist, _ = cKDTree(points).query(points, k=[k + 1], p=p, workers=workers)
    return dist[:, 0]


def knn_distances(points, k: int = 3, norm: Norm = "chebyshev",
                  method: Literal["auto", "brute", "kdtree"] = "auto") -> np.ndarray:
    """Distance from every point to its k-th nearest other point.

    ``method="brute"`` is the O(T^2 d) reference; ``"kdtree"`` uses
    :class:`scipy.spatial.cKDTree` and returns the same values. ``"auto"``
    picks the tree.
    """
    pts = as_sample_matrix(points, "points")
    _check_k(pts.shape[0], k)
    if norm not in ("chebyshev", "euclidean"):
        raise ConfigurationError(f"unknown norm {norm!r}")
    if method == "brute":
        return _brute_kth(pts, k, norm)
    if method in ("auto", "kdtree"):
        return _tree_kth(pts, k, norm)
    raise ConfigurationError(f"unknown method {method!r}")


_ASYMPTOTIC = (
    1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240, 1.0 / 132,
    -691.0 / 32760, 1.0 / 12,
)


def digamma(x: float) -> float:
    """Digamma function for real ``x > 0``.

    Shifts the argument above 6 with psi(x) = psi(x+1) - 1/x, then applies
    the Bernoulli asymptotic series.
    """
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise InvalidInputError(f"digamma is defined here only for finite x > 0, got {x!r}")
    shift = 0.0
    while x < 6.0:
        shift -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    for c in reversed(_ASYMPTOTIC):
        series = (series + c) * inv2
    return shift + math.log(x) - 0.5 / x - series


def unit_ball_log_volume(d: int, norm: Norm) -> float:
    """Log volume of the ball of *diameter* 1 in ``d`` dimensions."""
    if norm == "chebyshev":
        return 0.0
    return 0.5 * d * math.log(math.pi) - math.lgamma(0.5 * d + 1) - d * math.log(2.0)


def knn_entropy_detail(points, cfg: EstimatorConfig | None = None) -> tuple[float, int]:
    """kNN entropy plus the number of zero distances that were clamped.

    See :func:`knn_entropy`.
    """
    cfg = cfg or EstimatorConfig()
    pts = as_sample_matrix(points, "points")
    n, d = pts.shape
    _check_k(n, cfg.k)
    if (pts == pts[0]).all():
        raise DegenerateSampleError("all points are identical")
    eps = 2.0 * knn_distances(pts, cfg.k, cfg.norm)
    zero = eps <= 0
    n_clamped = int(zero.sum())
    if n_clamped:
        eps[zero] = EPS_MIN
    # fsum keeps the result independent of row order.
    mean_log = math.fsum(np.log(eps)) / n
    h = digamma(n) - digamma(cfg.k) + unit_ball_log_volume(d, cfg.norm) + d * mean_log
    return h, n_clamped


def knn_entropy(points, cfg: EstimatorConfig | None = None) -> float:
    """Kozachenko-Leonenko style differential entropy estimate in nats.

    ``H = psi(T) - psi(k) + log c_d + (d/T) sum_t log eps_t`` where
    ``eps_t`` is twice the distance from point t to its k-th neighbor and
    ``c_d`` is the volume of the unit-diameter ball of the norm.

    Raises
    ------
    InsufficientSampleError
        If ``T <= k``.
    DegenerateSampleError
        If every point is identical.
    """
    return knn_entropy_detail(points, cfg)[0]
