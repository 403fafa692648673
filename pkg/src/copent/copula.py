"""Empirical copula: rank-transform samples into pseudo-observations.

Each column x of length T maps entrywise to u_t = (1/T) * #{s : x_s <= x_t},
i.e. the empirical CDF evaluated at the sample itself.  Tied values share
the maximal <=-count, so every column's pseudo-observations are a subset of
{1/T, ..., T/T} with maximum exactly 1.  Because only the ordering of each
column matters, the output is bit-identical under any strictly increasing
per-column transform.

An averaged-rank variant (the Spearman convention, ties get the mean of
their rank positions) is available for comparison studies; it is NOT what
the entropy pipeline uses by default.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .dataset import Dataset
from .errors import DataError


@dataclass(frozen=True, eq=False)
class PseudoObservations:
    """Rank-transformed copy of a Dataset; all entries in (0, 1]."""

    matrix: np.ndarray
    source_names: tuple[str, ...]

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "source_names", tuple(self.source_names))

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_cols(self) -> int:
        return self.matrix.shape[1]


def _ecdf_column(x: np.ndarray, ranks: str) -> np.ndarray:
    n = x.shape[0]
    if ranks == "max":
        # #{s: x_s <= x_t} via one sort instead of the naive O(T^2) count
        return np.searchsorted(np.sort(x), x, side="right") / n
    if ranks == "average":
        return rankdata(x, method="average") / n
    raise ValueError(f"ranks must be 'max' or 'average', got {ranks!r}")


def rank_transform(ds: Dataset, *, ranks: str = "max") -> PseudoObservations:
    """Pseudo-observations of a complete Dataset.

    ranks='max' (default) is the literal maximal-tie-rank empirical CDF;
    ranks='average' is the averaged-rank variant (with top-rank ties its
    column maximum falls below 1).
    """
    if ds.has_missing:
        raise DataError("rank_transform requires a complete dataset; impute first")
    if ds.n_rows < 2:
        raise DataError("rank_transform needs at least 2 rows")
    cols = [_ecdf_column(c.values, ranks) for c in ds.columns]
    return PseudoObservations(np.column_stack(cols), ds.names)
