"""Pairwise association matrices and associated-variable group extraction.

A matrix holds one association strength per unordered column pair, mirrored
exactly; the diagonal carries a NaN sentinel (self-association is
undefined), rendered as "NA" in CSV.  CE entries are mutual-information
values (negated copula entropy) of the 2-column sub-dataset, reported raw:
small negative estimates are NOT clamped to zero (clamping is a rendering
concern, see heatmap).

Determinism and permutation equivariance: every pair is computed with its
columns in sorted-name order, and the CE jitter stream is seeded per pair
from (global seed, sorted name pair), so reordering dataset columns only
permutes the matrix, bit-identically.

Groups are connected components of the thresholded association graph, not
cliques: a chain a-b-c with a weak (a, c) entry is one group.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import Dataset
from .entropy import EstimatorConfig, copula_entropy
from .errors import DataError, UsageError
from .measures import MEASURES, kendall_tau, pearson_r, spearman_rho
from .rng import derive_seed

ALL_MEASURES = MEASURES + ("ce",)

_PAIR_FUNCS = {
    "pearson": pearson_r,
    "spearman": spearman_rho,
    "kendall": kendall_tau,
}


@dataclass(frozen=True, eq=False)
class AssociationMatrix:
    """Symmetric matrix of pairwise association strengths.

    values[i][j] == values[j][i] exactly; diagonal entries are NaN
    sentinels, as are pairs degraded by a constant column (each such pair
    leaves a warning).
    """

    values: np.ndarray
    names: tuple[str, ...]
    measure: str
    config: EstimatorConfig | None = None
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "warnings", tuple(self.warnings))
        n = len(self.names)
        if v.shape != (n, n):
            raise DataError(f"matrix shape {v.shape} does not match {n} names")
        if self.measure not in ALL_MEASURES:
            raise DataError(f"measure must be one of {ALL_MEASURES}")
        with np.errstate(invalid="ignore"):
            mirrored = (v == v.T) | (np.isnan(v) & np.isnan(v.T))
        if not mirrored.all():
            raise DataError("association matrix must be exactly symmetric")

    @property
    def n_cols(self) -> int:
        return len(self.names)


@dataclass(frozen=True)
class Group:
    """One associated-variable group; indices are 1-based column positions.

    min/mean strength are taken over the qualifying within-group entries
    (the graph edges that met the threshold criterion), so both are always
    >= the criterion value.
    """

    indices: tuple[int, ...]
    names: tuple[str, ...]
    min_strength: float
    mean_strength: float


@dataclass(frozen=True)
class GroupReport:
    groups: tuple[Group, ...]
    threshold: float
    measure: str


def _pair_value(ds: Dataset, i: int, j: int, measure: str, cfg: EstimatorConfig) -> float:
    ci, cj = ds.columns[i], ds.columns[j]
    if measure == "ce":
        # sorted-name column order + name-keyed jitter seed make the value
        # independent of where the pair sits in the dataset
        lo, hi = sorted((ci, cj), key=lambda c: c.name)
        pair_ds = Dataset((lo, hi))
        pair_cfg = cfg.with_seed(derive_seed(cfg.jitter_seed, lo.name, hi.name))
        return -copula_entropy(pair_ds, pair_cfg).value
    lo, hi = sorted((ci, cj), key=lambda c: c.name)
    return _PAIR_FUNCS[measure](lo.values, hi.values).value


def association_matrix(
    ds: Dataset,
    measure: str,
    cfg: EstimatorConfig | None = None,
    *,
    jobs: int = 1,
) -> AssociationMatrix:
    """Pairwise association matrix of a complete Dataset.

    Each unordered pair is one independent work item; with jobs > 1 they
    run on a thread pool and land in pre-assigned slots, so the result is
    identical regardless of scheduling.  Constant columns do not abort the
    run: their entries become NaN sentinels plus a warning.
    """
    if measure not in ALL_MEASURES:
        raise UsageError(f"measure must be one of {ALL_MEASURES}")
    if ds.n_cols < 2:
        raise DataError("association matrix needs at least 2 columns")
    if ds.has_missing:
        raise DataError("dataset has missing entries; impute first")
    cfg = cfg or EstimatorConfig()
    if measure == "ce" and ds.n_rows <= cfg.k:
        raise DataError("k must be < number of rows")

    warnings: list[str] = []
    constant = np.zeros(ds.n_cols, dtype=bool)
    for idx, col in enumerate(ds.columns):
        if col.values.size and np.all(col.values == col.values[0]):
            constant[idx] = True
            warnings.append(
                f"column {col.name!r} is constant; its entries are undefined"
            )

    n = ds.n_cols
    values = np.full((n, n), np.nan)
    pairs = [
        (i, j) for i in range(n) for j in range(i + 1, n)
        if not (constant[i] or constant[j])
    ]

    def compute(pair: tuple[int, int]) -> float:
        return _pair_value(ds, pair[0], pair[1], measure, cfg)

    if jobs > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(compute, pairs))
    else:
        results = [compute(p) for p in pairs]
    for (i, j), v in zip(pairs, results):
        values[i, j] = v
        values[j, i] = v
    return AssociationMatrix(
        values, ds.names, measure,
        config=cfg if measure == "ce" else None,
        warnings=tuple(warnings),
    )


def _edge_strength(m: AssociationMatrix) -> np.ndarray:
    # classical measures threshold on magnitude; ce on the raw MI value
    return np.abs(m.values) if m.measure != "ce" else m.values


def extract_groups(m: AssociationMatrix, threshold: float) -> GroupReport:
    """Connected components of the graph with an edge where strength meets
    the threshold (|value| for classical measures); singletons dropped,
    groups ordered by descending size then ascending smallest index."""
    if m.measure == "ce":
        if threshold <= 0:
            raise UsageError("threshold must be > 0 for measure 'ce'")
    elif not 0 < threshold <= 1:
        raise UsageError("threshold must be in (0, 1] for classical measures")

    n = m.n_cols
    strength = _edge_strength(m)
    with np.errstate(invalid="ignore"):
        adjacency = strength >= threshold
    np.fill_diagonal(adjacency, False)

    seen = np.zeros(n, dtype=bool)
    groups: list[Group] = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        members = []
        while stack:
            v = stack.pop()
            members.append(v)
            for w in np.flatnonzero(adjacency[v]):
                if not seen[w]:
                    seen[w] = True
                    stack.append(int(w))
        if len(members) < 2:
            continue
        members.sort()
        edge_vals = [
            strength[a, b]
            for ai, a in enumerate(members)
            for b in members[ai + 1:]
            if adjacency[a, b]
        ]
        groups.append(Group(
            indices=tuple(v + 1 for v in members),
            names=tuple(m.names[v] for v in members),
            min_strength=float(min(edge_vals)),
            mean_strength=float(np.mean(edge_vals)),
        ))
    groups.sort(key=lambda g: (-len(g.indices), g.indices[0]))
    return GroupReport(tuple(groups), float(threshold), m.measure)


def matrix_to_long_form(m: AssociationMatrix) -> list[tuple[str, str, float]]:
    """(name_i, name_j, value) for every i < j, row-major order."""
    out = []
    for i in range(m.n_cols):
        for j in range(i + 1, m.n_cols):
            out.append((m.names[i], m.names[j], float(m.values[i, j])))
    return out


def _render(x: float) -> str:
    return "NA" if np.isnan(x) else repr(float(x))


def matrix_to_csv(m: AssociationMatrix, path: str | Path) -> None:
    """Square CSV: header row of names, then one row of values per column,
    sentinel as 'NA'.  Measure metadata travels only in the JSON format."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(m.names)
        for i in range(m.n_cols):
            writer.writerow(_render(v) for v in m.values[i])


def matrix_from_csv(path: str | Path, measure: str = "ce") -> AssociationMatrix:
    """Read a square matrix CSV (as written by matrix_to_csv).  The CSV
    carries no measure metadata, so the caller states it (default ce)."""
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise DataError(f"{path}: empty matrix file")
    names = [h.strip() for h in rows[0]]
    n = len(names)
    if len(rows) != n + 1:
        raise DataError(f"{path}: expected {n} value rows, found {len(rows) - 1}")
    values = np.full((n, n), np.nan)
    for i, row in enumerate(rows[1:]):
        if len(row) != n:
            raise DataError(f"{path}: row {i + 1} has {len(row)} cells, expected {n}")
        for j, cell in enumerate(row):
            cell = cell.strip()
            if cell != "NA":
                values[i, j] = float(cell)
    return AssociationMatrix(values, names, measure)


def _config_to_dict(cfg: EstimatorConfig | None):
    if cfg is None:
        return None
    return {
        "k": cfg.k,
        "metric": cfg.metric,
        "jitter_magnitude": cfg.jitter_magnitude,
        "jitter_seed": cfg.jitter_seed,
    }


def matrix_to_json(m: AssociationMatrix, path: str | Path) -> None:
    doc = {
        "names": list(m.names),
        "measure": m.measure,
        "config": _config_to_dict(m.config),
        "values": [
            [None if np.isnan(v) else float(v) for v in row] for row in m.values
        ],
        "warnings": list(m.warnings),
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def matrix_from_json(path: str | Path) -> AssociationMatrix:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    cfg = None
    if doc.get("config"):
        cfg = EstimatorConfig(**doc["config"])
    values = np.array(
        [[np.nan if v is None else v for v in row] for row in doc["values"]],
        dtype=np.float64,
    )
    return AssociationMatrix(
        values, doc["names"], doc["measure"],
        config=cfg, warnings=tuple(doc.get("warnings", ())),
    )


def load_matrix(path: str | Path, measure: str = "ce") -> AssociationMatrix:
    """Dispatch on file content: JSON object or matrix CSV."""
    path = Path(path)
    head = path.read_text(encoding="utf-8")[:1]
    if head == "{":
        return matrix_from_json(path)
    return matrix_from_csv(path, measure=measure)


def report_to_json(report: GroupReport, path: str | Path) -> None:
    doc = {
        "measure": report.measure,
        "threshold": report.threshold,
        "groups": [
            {
                "indices": list(g.indices),
                "names": list(g.names),
                "min_strength": g.min_strength,
                "mean_strength": g.mean_strength,
            }
            for g in report.groups
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
