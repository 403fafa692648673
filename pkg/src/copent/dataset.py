"""Column-major numeric tables with explicit missing-value masks.

Every downstream estimator consumes whole columns of a Dataset, and a
Dataset is immutable after construction, so values can be shared freely.
Missingness is a boolean mask rather than a sentinel number: NaN found in
source data simply becomes a masked entry and can never leak into a mean.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError

NA_TOKENS_DEFAULT = frozenset({"", "NA"})


def _frozen(arr: np.ndarray, dtype) -> np.ndarray:
    out = np.array(arr, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Column:
    """One named column: float64 values plus a missing mask (True = missing).

    The stored value behind a masked entry is arbitrary and must never be
    read; equality therefore compares only the mask and unmasked values.
    """

    name: str
    values: np.ndarray
    mask: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, Column):
            return NotImplemented
        return (
            self.name == other.name
            and np.array_equal(self.mask, other.mask)
            and np.array_equal(
                self.values[~self.mask], other.values[~other.mask], equal_nan=True
            )
        )

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, np.float64))
        object.__setattr__(self, "mask", _frozen(self.mask, bool))
        if not self.name:
            raise DataError("column names must be non-empty")
        if self.values.ndim != 1 or self.mask.shape != self.values.shape:
            raise DataError(
                f"column {self.name!r}: values and mask must be 1-d and equal length"
            )

    @property
    def n_missing(self) -> int:
        return int(self.mask.sum())

    def present_values(self) -> np.ndarray:
        """Values at non-missing positions only."""
        return self.values[~self.mask]


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable ordered collection of equal-length columns."""

    columns: tuple[Column, ...]

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.columns == other.columns

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        if not self.columns:
            raise DataError("a Dataset needs at least one column")
        lengths = {c.values.shape[0] for c in self.columns}
        if len(lengths) != 1:
            raise DataError("all columns must have the same number of rows")
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DataError(f"duplicate column names: {dupes}")

    @property
    def n_rows(self) -> int:
        return self.columns[0].values.shape[0]

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    @property
    def has_missing(self) -> bool:
        return any(c.mask.any() for c in self.columns)

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise DataError(f"unknown column name: {name!r}")

    def to_matrix(self) -> np.ndarray:
        """(n_rows, n_cols) float64 matrix; requires a complete Dataset."""
        if self.has_missing:
            bad = [c.name for c in self.columns if c.mask.any()]
            raise DataError(
                f"dataset has missing entries in columns {bad}; impute first"
            )
        return np.column_stack([c.values for c in self.columns])

    @staticmethod
    def from_arrays(
        names: Sequence[str],
        matrix: np.ndarray,
        masks: np.ndarray | None = None,
    ) -> "Dataset":
        """Build a Dataset from an (n_rows, n_cols) array (and optional mask)."""
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[1] != len(names):
            raise DataError("matrix shape does not match the number of names")
        if masks is None:
            masks = np.zeros(matrix.shape, dtype=bool)
        cols = [
            Column(str(n), matrix[:, j], masks[:, j]) for j, n in enumerate(names)
        ]
        return Dataset(tuple(cols))


@dataclass(frozen=True)
class ImputePolicy:
    """Missing-value policy: one of 'mean', 'drop_rows', 'none'."""

    kind: str = "mean"

    KINDS = ("mean", "drop_rows", "none")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"impute policy must be one of {self.KINDS}")


def _parse_cell(cell: str, na_tokens: frozenset[str]) -> tuple[float, bool]:
    text = cell.strip()
    if text in na_tokens:
        return 0.0, True
    try:
        value = float(text)
    except ValueError:
        return 0.0, True
    if math.isnan(value):
        return 0.0, True
    return value, False


def load_csv(
    path: str | Path,
    *,
    delimiter: str = ",",
    header: bool = True,
    na_tokens: Iterable[str] = NA_TOKENS_DEFAULT,
) -> Dataset:
    """Read a delimited text file into a Dataset.

    RFC-4180-style quoting is accepted. Cells matching a na_token (after
    stripping surrounding whitespace), failing to parse as a number, or
    parsing to NaN become missing-masked entries. With header=False,
    columns are named c1..cN.
    """
    path = Path(path)
    na_tokens = frozenset(str(t) for t in na_tokens)
    try:
        with path.open("r", encoding="utf-8", newline="") as fh:
            raw = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows = [r for r in csv.reader(io.StringIO(raw), delimiter=delimiter)]
    rows = [r for r in rows if r]  # drop fully empty lines
    if not rows:
        raise DataError(f"{path}: no rows at all")

    if header:
        names = [h.strip() for h in rows[0]]
        data_rows = rows[1:]
    else:
        names = [f"c{i + 1}" for i in range(len(rows[0]))]
        data_rows = rows
    if not data_rows:
        raise DataError(f"{path}: header but no data rows")
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise DataError(f"{path}: duplicate header names {dupes}")

    n_cols = len(names)
    for i, r in enumerate(data_rows):
        if len(r) != n_cols:
            raise DataError(
                f"{path}: ragged row {i + 1} has {len(r)} cells, expected {n_cols}"
            )

    n_rows = len(data_rows)
    values = np.zeros((n_rows, n_cols), dtype=np.float64)
    masks = np.zeros((n_rows, n_cols), dtype=bool)
    for t, r in enumerate(data_rows):
        for j, cell in enumerate(r):
            values[t, j], masks[t, j] = _parse_cell(cell, na_tokens)
    return Dataset.from_arrays(names, values, masks)


def _render_value(x: float) -> str:
    # repr gives the shortest decimal that round-trips a float64 exactly
    return repr(float(x))


def write_csv(ds: Dataset, path: str | Path) -> None:
    """Write a Dataset as CSV: header row, 'NA' for missing entries,
    shortest round-trip decimal rendering for values."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ds.names)
        for t in range(ds.n_rows):
            writer.writerow(
                "NA" if c.mask[t] else _render_value(c.values[t])
                for c in ds.columns
            )


def impute(ds: Dataset, policy: ImputePolicy) -> Dataset:
    """Resolve missing entries.

    mean: replace each missing entry with the arithmetic mean of the
    column's non-missing values (one global pass, not per-pair deletion)
    and clear the mask.  drop_rows: remove every row containing a missing
    entry.  none: identity.
    """
    if policy.kind == "none":
        return ds
    if policy.kind == "drop_rows":
        any_missing = np.zeros(ds.n_rows, dtype=bool)
        for c in ds.columns:
            any_missing |= c.mask
        keep = ~any_missing
        if not keep.any():
            raise DataError("drop_rows imputation leaves zero rows")
        cols = [Column(c.name, c.values[keep], c.mask[keep]) for c in ds.columns]
        return Dataset(tuple(cols))
    # mean
    cols = []
    for c in ds.columns:
        if not c.mask.any():
            cols.append(c)
            continue
        present = c.present_values()
        if present.size == 0:
            raise DataError(
                f"column {c.name!r} is entirely missing; mean imputation impossible"
            )
        filled = c.values.copy()
        filled[c.mask] = present.mean()
        cols.append(Column(c.name, filled, np.zeros_like(c.mask)))
    return Dataset(tuple(cols))


def _resolve_item(ds: Dataset, item: object) -> list[int]:
    """One selection item -> list of 0-based column indices.

    Accepted forms: exact column name, integer (1-based), '7' (1-based),
    'a-b' (1-based inclusive range).  Exact names win over numeric parses.
    """
    names = ds.names
    if isinstance(item, str):
        if item in names:
            return [names.index(item)]
        text = item.strip()
        if text.isdigit():
            return _resolve_item(ds, int(text))
        lo, sep, hi = text.partition("-")
        if sep and lo.strip().isdigit() and hi.strip().isdigit():
            start, stop = int(lo), int(hi)
            if start < 1 or stop > ds.n_cols or start > stop:
                raise DataError(
                    f"index range {text!r} out of bounds for {ds.n_cols} columns"
                )
            return list(range(start - 1, stop))
        raise DataError(f"unknown column name: {item!r}")
    if isinstance(item, int) and not isinstance(item, bool):
        if not 1 <= item <= ds.n_cols:
            raise DataError(
                f"column index {item} out of bounds (1..{ds.n_cols})"
            )
        return [item - 1]
    raise DataError(f"unsupported selection item: {item!r}")


def select_columns(ds: Dataset, spec: Sequence[object]) -> Dataset:
    """New Dataset with exactly the requested columns, in request order.

    Items are names, 1-based indices, or 1-based inclusive ranges such as
    '288-302'. Selecting the same column twice is an error (names must
    stay unique).
    """
    indices: list[int] = []
    for item in spec:
        indices.extend(_resolve_item(ds, item))
    if not indices:
        raise DataError("empty column selection")
    if len(set(indices)) != len(indices):
        raise DataError("selection requests the same column more than once")
    return Dataset(tuple(ds.columns[i] for i in indices))
