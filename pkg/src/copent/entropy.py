"""Kozachenko-Leonenko kNN differential entropy, copula entropy, and
mutual information.

The estimator for n points in d dimensions is

    H_hat = -psi(k) + psi(n) + log c_d + (d/n) * sum_i log eps_i

with psi the digamma function, eps_i the distance from point i to its k-th
nearest neighbour (self excluded), and c_d the volume of the unit ball of
the chosen metric (2^d for chebyshev, pi^(d/2)/Gamma(d/2+1) for euclidean).
All entropies are in nats; the log base is not configurable.

Copula entropy is the estimator applied to rank-transformed data, and
mutual information is its exact negation.  Exact duplicate points (rank
ties) are broken before the neighbour search by a deterministic seeded
jitter far below rank resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma, gammaln

from .copula import rank_transform
from .dataset import Dataset
from .errors import DataError
from .rng import SplitMix64

METRICS = ("chebyshev", "euclidean")

# exact search only: k-d tree degrades in high dimension and has build
# overhead at tiny n, so fall back to all-pairs distances there
_BRUTE_MAX_N = 64
_BRUTE_MIN_DIM = 21


@dataclass(frozen=True)
class EstimatorConfig:
    """Knobs of the kNN entropy estimator.

    jitter_magnitude=0 disables duplicate-breaking entirely; duplicate
    points then surface as a zero-distance error instead of being hidden.
    """

    k: int = 3
    metric: str = "chebyshev"
    jitter_magnitude: float = 1e-10
    jitter_seed: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}")
        if self.jitter_magnitude < 0:
            raise ValueError("jitter_magnitude must be >= 0")

    def with_seed(self, seed: int) -> "EstimatorConfig":
        return replace(self, jitter_seed=int(seed))


@dataclass(frozen=True)
class EntropyEstimate:
    """An entropy value (nats) plus the context it was estimated in."""

    value: float
    n_samples: int
    dim: int
    config: EstimatorConfig


@dataclass(frozen=True)
class DecompositionReport:
    """Joint entropy split into marginal entropies plus copula entropy.

    residual = joint - (sum of marginals + ce); it estimates zero because
    the joint density factors into marginals times the copula density.
    """

    joint: EntropyEstimate
    marginals: tuple[EntropyEstimate, ...]
    ce: EntropyEstimate
    residual: float


def _log_unit_ball_volume(d: int, metric: str) -> float:
    if metric == "chebyshev":
        return d * math.log(2.0)
    # euclidean
    return (d / 2.0) * math.log(math.pi) - gammaln(d / 2.0 + 1.0)


def kth_neighbor_distances(
    points: np.ndarray, k: int, metric: str, *, method: str = "auto"
) -> np.ndarray:
    """Distance from each point to its k-th nearest neighbour (self excluded).

    method='auto' picks an exact k-d tree, falling back to exact all-pairs
    brute force for d > 20 or n < 64.  'kdtree'/'brute' force one path
    (used by the cross-check tests).  Both paths are exact; approximate
    search is deliberately not an option.
    """
    pts = np.asarray(points, dtype=np.float64)
    n, d = pts.shape
    if method == "auto":
        method = "brute" if (d >= _BRUTE_MIN_DIM or n < _BRUTE_MAX_N) else "kdtree"
    if method == "kdtree":
        p = np.inf if metric == "chebyshev" else 2
        dist, _ = cKDTree(pts).query(pts, k=k + 1, p=p)
        return dist[:, k]
    if method != "brute":
        raise ValueError(f"unknown search method {method!r}")
    diff = np.abs(pts[:, None, :] - pts[None, :, :])
    if metric == "chebyshev":
        dmat = diff.max(axis=2)
    else:
        dmat = np.sqrt((diff * diff).sum(axis=2))
    # row-wise k-th smallest, position 0 being the self distance
    return np.partition(dmat, k, axis=1)[:, k]


def _jittered(pts: np.ndarray, cfg: EstimatorConfig) -> np.ndarray:
    if cfg.jitter_magnitude == 0.0:
        return pts
    stream = SplitMix64(cfg.jitter_seed)
    noise = stream.uniforms(pts.size).reshape(pts.shape) * cfg.jitter_magnitude
    return pts + noise


def knn_entropy(points: np.ndarray, cfg: EstimatorConfig = EstimatorConfig()) -> EntropyEstimate:
    """Kozachenko-Leonenko entropy estimate of an (n, d) sample matrix.

    A 1-d array is treated as n samples of a scalar variable.  Requires
    n > k.  Deterministic for fixed (points, cfg): the jitter stream is
    seeded by cfg.jitter_seed and the log-distance reduction runs in a
    fixed order.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise DataError("points must be an (n, d) matrix")
    n, d = pts.shape
    if n <= cfg.k:
        raise DataError(f"need more than k={cfg.k} samples, got n={n}")
    eps = kth_neighbor_distances(_jittered(pts, cfg), cfg.k, cfg.metric)
    if np.any(eps == 0.0):
        raise DataError(
            "zero k-th neighbour distance: duplicate points with jitter disabled "
            "(set jitter_magnitude > 0)"
        )
    value = (
        -digamma(cfg.k)
        + digamma(n)
        + _log_unit_ball_volume(d, cfg.metric)
        + d * float(np.log(eps).sum()) / n
    )
    if not math.isfinite(value):
        raise DataError("entropy estimate is not finite")
    return EntropyEstimate(float(value), n, d, cfg)


def copula_entropy(ds: Dataset, cfg: EstimatorConfig = EstimatorConfig()) -> EntropyEstimate:
    """Copula entropy of a complete Dataset with >= 2 columns.

    Two steps: rank-transform to pseudo-observations, then kNN entropy on
    them.  Invariant (bit-identical, given the same seed) under strictly
    increasing per-column transforms of the input.
    """
    if ds.n_cols < 2:
        raise DataError("copula entropy needs at least 2 columns")
    pseudo = rank_transform(ds)
    return knn_entropy(pseudo.matrix, cfg)


def mutual_information(ds: Dataset, cfg: EstimatorConfig = EstimatorConfig()) -> EntropyEstimate:
    """Mutual information as the exact negation of copula entropy."""
    est = copula_entropy(ds, cfg)
    return EntropyEstimate(-est.value, est.n_samples, est.dim, est.config)


def decomposition_report(
    ds: Dataset, cfg: EstimatorConfig = EstimatorConfig()
) -> DecompositionReport:
    """Estimate joint entropy, per-column marginal entropies and copula
    entropy on raw data, and report the decomposition residual."""
    if ds.n_cols < 2:
        raise DataError("decomposition needs at least 2 columns")
    matrix = ds.to_matrix()
    joint = knn_entropy(matrix, cfg)
    marginals = tuple(knn_entropy(matrix[:, j], cfg) for j in range(ds.n_cols))
    ce = copula_entropy(ds, cfg)
    residual = joint.value - (sum(m.value for m in marginals) + ce.value)
    return DecompositionReport(joint, marginals, ce, float(residual))
