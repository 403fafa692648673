"""Self-contained deterministic random number generation.

Fixtures and jitter streams must be reproducible bit-for-bit across runs,
platforms and library versions, so nothing here delegates to ambient RNG
state.  The generator is splitmix64 (Steele, Lea & Flood 2014): output i of
a stream seeded with s is ``mix64(s + i*0x9E3779B97F4A7C15)``, a pure
counter-based mix that vectorizes exactly.

Standard-normal variates come from applying Acklam's rational approximation
of the inverse normal CDF to the uniform stream (relative error < 1.15e-9,
negligible against the statistical tolerances used anywhere in this
package).
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# Acklam inverse-normal-CDF coefficients (central rational approximation
# on [0.02425, 0.97575], tail approximation outside).
_ACKLAM_A = (
    -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
    1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00,
)
_ACKLAM_B = (
    -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
    6.680131188771972e+01, -1.328068155288572e+01,
)
_ACKLAM_C = (
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
    -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00,
)
_ACKLAM_D = (
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
    3.754408661907416e+00,
)
_P_LOW = 0.02425


def mix64(z: int) -> int:
    """Finalizing mix of splitmix64 over a 64-bit integer."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def derive_seed(*parts: object) -> int:
    """Stable 64-bit seed derived from arbitrary labelled parts.

    Hashes the ``repr`` of each part through blake2b, so seeds keyed by e.g.
    (global seed, column-name pair) are identical across runs and processes.
    """
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(repr(part).encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "big")


def _inverse_normal_cdf(p: np.ndarray) -> np.ndarray:
    """Acklam's approximation of the standard normal quantile, elementwise.

    Valid for p strictly inside (0, 1); callers guarantee that.
    """
    a, b, c, d = _ACKLAM_A, _ACKLAM_B, _ACKLAM_C, _ACKLAM_D
    p = np.asarray(p, dtype=np.float64)

    q = p - 0.5
    r = q * q
    central = (
        (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
        / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    )

    ql = np.sqrt(-2.0 * np.log(np.where(p < 0.5, p, 0.5)))
    low = (
        ((((c[0] * ql + c[1]) * ql + c[2]) * ql + c[3]) * ql + c[4]) * ql + c[5]
    ) / ((((d[0] * ql + d[1]) * ql + d[2]) * ql + d[3]) * ql + 1.0)

    qh = np.sqrt(-2.0 * np.log(np.where(p > 0.5, 1.0 - p, 0.5)))
    high = -(
        ((((c[0] * qh + c[1]) * qh + c[2]) * qh + c[3]) * qh + c[4]) * qh + c[5]
    ) / ((((d[0] * qh + d[1]) * qh + d[2]) * qh + d[3]) * qh + 1.0)

    return np.where(p < _P_LOW, low, np.where(p > 1.0 - _P_LOW, high, central))


class SplitMix64:
    """Counter-based splitmix64 stream.

    Scalar and vector draws are interchangeable: ``uniforms(n)`` consumes
    exactly n counter positions and returns the same values as n calls to
    ``uniform()``.
    """

    def __init__(self, seed: int):
        self._seed = seed & _MASK64
        self._count = 0

    def next_uint64(self) -> int:
        self._count += 1
        return mix64((self._seed + self._count * _GOLDEN) & _MASK64)

    def uniform(self) -> float:
        """One uniform draw in the open interval (0, 1)."""
        return ((self.next_uint64() >> 11) + 0.5) * 2.0**-53

    def normal(self) -> float:
        return float(_inverse_normal_cdf(np.float64(self.uniform())))

    def _raw_block(self, n: int) -> np.ndarray:
        counters = np.arange(self._count + 1, self._count + n + 1, dtype=np.uint64)
        self._count += n
        z = (np.uint64(self._seed) + counters * np.uint64(_GOLDEN))
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))

    def uniforms(self, n: int) -> np.ndarray:
        """n uniform draws in (0, 1) as a float64 array."""
        bits = self._raw_block(int(n)) >> np.uint64(11)
        return (bits.astype(np.float64) + 0.5) * 2.0**-53

    def normals(self, n: int) -> np.ndarray:
        return _inverse_normal_cdf(self.uniforms(n))

    def normal_matrix(self, n_rows: int, n_cols: int) -> np.ndarray:
        """Row-major (n_rows, n_cols) block of standard normals."""
        return self.normals(int(n_rows) * int(n_cols)).reshape(n_rows, n_cols)
