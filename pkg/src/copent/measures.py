"""Classical pairwise association measures: Pearson's r, Spearman's rho,
Kendall's tau-b.

Spearman and Kendall are computed through their rank / pair-count
identities rather than copula integrals.  Note the rank conventions differ
on purpose: Spearman uses averaged ranks (the statistical convention),
while the empirical-copula transform in copula.py uses maximal tie ranks;
the two serve different formulas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import DataError

MEASURES = ("pearson", "spearman", "kendall")


@dataclass(frozen=True)
class PairStat:
    """A pairwise association value in [-1, 1] with its sample size."""

    value: float
    n: int
    measure: str

    def __post_init__(self):
        if self.n < 2:
            raise DataError("pair statistics need n >= 2")
        if abs(self.value) > 1.0 + 1e-12:
            raise DataError(
                f"{self.measure} value {self.value} outside [-1, 1]"
            )


def _as_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1:
        raise DataError("inputs must be 1-d sequences")
    if x.shape[0] != y.shape[0]:
        raise DataError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[0] < 2:
        raise DataError("need at least 2 samples")
    return x, y


def pearson_r(x, y) -> PairStat:
    """Pearson correlation: covariance over the product of standard
    deviations.  The n-1 normalization appears in both numerator and
    denominator and cancels, so it is computed from centered sums."""
    x, y = _as_pair(x, y)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DataError("pearson_r is undefined for a constant sequence")
    value = float(dx @ dy) / np.sqrt(sxx * syy)
    return PairStat(float(value), x.shape[0], "pearson")


def spearman_rho(x, y) -> PairStat:
    """Spearman's rho: Pearson correlation of averaged ranks."""
    x, y = _as_pair(x, y)
    try:
        stat = pearson_r(rankdata(x, method="average"), rankdata(y, method="average"))
    except DataError as exc:
        raise DataError(f"spearman_rho: {exc}") from exc
    return PairStat(stat.value, stat.n, "spearman")


def _merge_count_inversions(seq: list[float]) -> int:
    """Strict inversions (i < j with seq[i] > seq[j]) counted during a
    bottom-up merge sort; equal elements generate no inversion."""
    n = len(seq)
    src = list(seq)
    dst = [0.0] * n
    inversions = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, out = lo, mid, lo
            while i < mid and j < hi:
                if src[j] < src[i]:
                    dst[out] = src[j]
                    j += 1
                    inversions += mid - i
                else:
                    dst[out] = src[i]
                    i += 1
                out += 1
            while i < mid:
                dst[out] = src[i]
                i += 1
                out += 1
            while j < hi:
                dst[out] = src[j]
                j += 1
                out += 1
        src, dst = dst, src
        width *= 2
    return inversions


def _tie_pair_count(sorted_vals: np.ndarray) -> int:
    """sum over tie groups of t*(t-1)/2, for an already sorted array."""
    _, counts = np.unique(sorted_vals, return_counts=True)
    return int((counts * (counts - 1) // 2).sum())


def kendall_tau(x, y) -> PairStat:
    """Kendall's tau-b in O(n log n).

    Samples are ordered by (x, y); discordant pairs are then exactly the
    strict inversions of the y sequence, counted by merge sort.  Tie
    corrections follow the tau-b definition
    (C - D) / sqrt((n0 - n1) (n0 - n2)) with n0 = n(n-1)/2 and n1, n2 the
    tied-pair counts of x and y.
    """
    x, y = _as_pair(x, y)
    n = x.shape[0]
    order = np.lexsort((y, x))
    xs = x[order]
    ys = y[order]

    n0 = n * (n - 1) // 2
    n1 = _tie_pair_count(xs)
    n2 = _tie_pair_count(np.sort(y))
    if n1 == n0 or n2 == n0:
        raise DataError("kendall_tau is undefined for an all-tied sequence")
    # pairs tied in both coordinates
    pair_rows = np.column_stack((xs, ys))
    _, counts = np.unique(pair_rows, axis=0, return_counts=True)
    n3 = int((counts * (counts - 1) // 2).sum())

    discordant = _merge_count_inversions(list(ys))
    concordant = n0 - n1 - n2 + n3 - discordant
    value = (concordant - discordant) / np.sqrt(float(n0 - n1) * float(n0 - n2))
    return PairStat(float(value), n, "kendall")
