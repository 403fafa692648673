"""Synthetic dataset generators for tests, calibration and demos.

All sampling flows through the embedded splitmix64 stream (rng.py), so a
fixed SynthSpec yields a bit-identical Dataset on every platform.  Gaussian
kinds draw correlated normals by factoring the correlation matrix;
functional kinds emit a base variable and a transformed copy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import DataError
from .rng import SplitMix64

KINDS = ("gaussian_pair", "gaussian_matrix", "functional", "blocks")
TRANSFORMS = ("cube", "exp", "sin")

_PSD_TOL = 1e-8


@dataclass(frozen=True)
class SynthSpec:
    """Declarative description of one synthetic dataset.

    kind selects the generator: gaussian_pair(rho), gaussian_matrix
    (explicit correlation matrix), functional (base X plus g(X)+noise,
    g in cube/exp/sin; X is standard normal except for sin, which draws X
    uniform on (0, 2*pi) so the transform is exercised over a full period),
    blocks (block-constant correlation matrix, the grouped-variables
    pattern).
    """

    kind: str
    n_rows: int
    seed: int = 1
    rho: float | None = None
    correlation: tuple[tuple[float, ...], ...] | None = None
    transform: str | None = None
    noise_sd: float = 0.0
    sizes: tuple[int, ...] | None = None
    within_rho: float | None = None
    between_rho: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DataError(f"kind must be one of {KINDS}")
        if self.n_rows < 1:
            raise DataError("n_rows must be >= 1")
        if self.kind == "gaussian_pair":
            if self.rho is None or not abs(self.rho) < 1:
                raise DataError("gaussian_pair needs |rho| < 1")
        if self.kind == "gaussian_matrix" and self.correlation is None:
            raise DataError("gaussian_matrix needs a correlation matrix")
        if self.kind == "functional":
            if self.transform not in TRANSFORMS:
                raise DataError(f"transform must be one of {TRANSFORMS}")
            if self.noise_sd < 0:
                raise DataError("noise_sd must be >= 0")
        if self.kind == "blocks":
            if not self.sizes or any(s < 2 for s in self.sizes):
                raise DataError("blocks needs group sizes, each >= 2")
            if self.within_rho is None or not abs(self.within_rho) < 1:
                raise DataError("blocks needs |within_rho| < 1")
            if not abs(self.between_rho) < 1:
                raise DataError("blocks needs |between_rho| < 1")

    @staticmethod
    def from_json(doc: dict) -> "SynthSpec":
        kwargs = dict(doc)
        if "correlation" in kwargs and kwargs["correlation"] is not None:
            kwargs["correlation"] = tuple(tuple(row) for row in kwargs["correlation"])
        if "sizes" in kwargs and kwargs["sizes"] is not None:
            kwargs["sizes"] = tuple(kwargs["sizes"])
        try:
            return SynthSpec(**kwargs)
        except TypeError as exc:
            raise DataError(f"bad synth spec: {exc}") from exc


def factor_correlation(matrix: np.ndarray) -> np.ndarray:
    """Lower-triangular-ish factor L with L @ L.T == matrix.

    Cholesky when positive definite; eigenvalue factorization for the
    merely positive semi-definite case.  Rejects matrices with an
    eigenvalue below -1e-8.
    """
    r = np.asarray(matrix, dtype=np.float64)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise DataError("correlation matrix must be square")
    if not np.allclose(r, r.T, atol=1e-12):
        raise DataError("correlation matrix must be symmetric")
    try:
        return np.linalg.cholesky(r)
    except np.linalg.LinAlgError:
        pass
    eigvals, eigvecs = np.linalg.eigh(r)
    if eigvals.min() < -_PSD_TOL:
        raise DataError(
            f"correlation matrix is not positive semi-definite "
            f"(min eigenvalue {eigvals.min():.3g})"
        )
    return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


def build_block_correlation(
    sizes: tuple[int, ...], within_rho: float, between_rho: float = 0.0
) -> np.ndarray:
    """Block-constant correlation matrix: within_rho inside each block,
    between_rho elsewhere, unit diagonal."""
    n = sum(sizes)
    r = np.full((n, n), float(between_rho))
    start = 0
    for s in sizes:
        r[start:start + s, start:start + s] = within_rho
        start += s
    np.fill_diagonal(r, 1.0)
    return r


def block_membership(sizes: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Ground-truth grouping for a blocks spec, as 1-based index tuples."""
    out, start = [], 1
    for s in sizes:
        out.append(tuple(range(start, start + s)))
        start += s
    return out


def _names(n: int) -> list[str]:
    return [f"v{i + 1}" for i in range(n)]


def generate(spec: SynthSpec) -> Dataset:
    """Materialize a SynthSpec into a Dataset (bit-deterministic per seed)."""
    stream = SplitMix64(spec.seed)
    if spec.kind == "gaussian_pair":
        corr = build_block_correlation((2,), spec.rho)
        return _gaussian(spec.n_rows, corr, stream)
    if spec.kind == "gaussian_matrix":
        return _gaussian(spec.n_rows, np.asarray(spec.correlation, float), stream)
    if spec.kind == "blocks":
        corr = build_block_correlation(spec.sizes, spec.within_rho, spec.between_rho)
        return _gaussian(spec.n_rows, corr, stream)
    # functional
    if spec.transform == "sin":
        base = stream.uniforms(spec.n_rows) * (2.0 * math.pi)
        transformed = np.sin(base)
    elif spec.transform == "cube":
        base = stream.normals(spec.n_rows)
        transformed = base ** 3
    else:  # exp
        base = stream.normals(spec.n_rows)
        transformed = np.exp(base)
    if spec.noise_sd > 0:
        transformed = transformed + spec.noise_sd * stream.normals(spec.n_rows)
    return Dataset.from_arrays(["x", "y"], np.column_stack([base, transformed]))


def _gaussian(n_rows: int, corr: np.ndarray, stream: SplitMix64) -> Dataset:
    factor = factor_correlation(corr)
    z = stream.normal_matrix(n_rows, corr.shape[0])
    return Dataset.from_arrays(_names(corr.shape[0]), z @ factor.T)


def nonlinear_chain_blocks(
    sizes: tuple[int, ...], n_rows: int, seed: int
) -> Dataset:
    """Grouped dataset whose within-group dependence is a chain of
    non-monotone deterministic maps instead of linear correlation.

    Each group starts from an independent standard normal X1 and chains
    X2 = cos(3*X1), X_{j+1} = cos(pi*X_j).  Every map is even around the
    (near-)symmetric distribution of its input, so all pairwise linear
    correlations vanish in population while each adjacent pair is fully
    dependent.  Between groups everything is independent.
    """
    if any(s < 2 for s in sizes):
        raise DataError("each group needs at least 2 members")
    stream = SplitMix64(seed)
    cols = []
    for s in sizes:
        base = stream.normals(n_rows)
        cols.append(base)
        current = np.cos(3.0 * base)
        cols.append(current)
        for _ in range(s - 2):
            current = np.cos(math.pi * current)
            cols.append(current)
    matrix = np.column_stack(cols)
    return Dataset.from_arrays(_names(matrix.shape[1]), matrix)
