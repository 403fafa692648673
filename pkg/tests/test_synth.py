import math

import numpy as np
import pytest

from copent.errors import DataError
from copent.measures import pearson_r
from copent.synth import (
    SynthSpec,
    block_membership,
    build_block_correlation,
    factor_correlation,
    generate,
    nonlinear_chain_blocks,
)


def test_fixed_seed_is_bit_identical():
    spec = SynthSpec("gaussian_pair", 500, seed=11, rho=0.4)
    a = generate(spec)
    b = generate(spec)
    for ca, cb in zip(a.columns, b.columns):
        assert ca.values.tobytes() == cb.values.tobytes()


def test_gaussian_pair_zero_rho_sample_correlation():
    n = 10000
    ds = generate(SynthSpec("gaussian_pair", n, seed=2, rho=0.0))
    r = pearson_r(ds.columns[0].values, ds.columns[1].values).value
    assert abs(r) < 3 / math.sqrt(n)


def test_gaussian_pair_converges_to_rho():
    ds = generate(SynthSpec("gaussian_pair", 50000, seed=5, rho=0.6))
    r = pearson_r(ds.columns[0].values, ds.columns[1].values).value
    assert abs(r - 0.6) < 0.02


def test_block_correlation_matrix_structure():
    r = build_block_correlation((3, 3), 0.9, 0.0)
    assert r.shape == (6, 6)
    assert np.array_equal(np.diag(r), np.ones(6))
    assert (r[:3, :3][~np.eye(3, dtype=bool)] == 0.9).all()
    assert (r[:3, 3:] == 0.0).all()


def test_block_membership_ground_truth():
    assert block_membership((3, 2)) == [(1, 2, 3), (4, 5)]


def test_blocks_dataset_shape_and_sample_correlations():
    spec = SynthSpec("blocks", 4000, seed=7, sizes=(3, 3),
                     within_rho=0.9, between_rho=0.0)
    ds = generate(spec)
    assert ds.n_cols == 6 and ds.n_rows == 4000
    m = ds.to_matrix()
    within = pearson_r(m[:, 0], m[:, 1]).value
    between = pearson_r(m[:, 0], m[:, 4]).value
    assert abs(within - 0.9) < 0.03
    assert abs(between) < 0.05


def test_non_psd_matrix_rejected():
    bad = ((1.0, 0.99, -0.99), (0.99, 1.0, 0.99), (-0.99, 0.99, 1.0))
    with pytest.raises(DataError, match="positive semi-definite"):
        generate(SynthSpec("gaussian_matrix", 10, correlation=bad))


def test_singular_but_psd_matrix_accepted():
    perfect = ((1.0, 1.0), (1.0, 1.0))
    factor = factor_correlation(np.array(perfect))
    assert np.allclose(factor @ factor.T, perfect)


def test_functional_cube_exact_when_noiseless():
    ds = generate(SynthSpec("functional", 200, seed=3, transform="cube"))
    x, y = ds.column("x").values, ds.column("y").values
    assert np.array_equal(y, x ** 3)


def test_functional_sin_domain():
    ds = generate(SynthSpec("functional", 500, seed=4, transform="sin"))
    x = ds.column("x").values
    assert x.min() > 0 and x.max() < 2 * math.pi
    assert np.array_equal(ds.column("y").values, np.sin(x))


def test_functional_noise_changes_output():
    quiet = generate(SynthSpec("functional", 100, seed=5, transform="exp"))
    noisy = generate(SynthSpec("functional", 100, seed=5, transform="exp",
                               noise_sd=0.1))
    assert not np.array_equal(quiet.column("y").values, noisy.column("y").values)


def test_spec_validation():
    with pytest.raises(DataError):
        SynthSpec("gaussian_pair", 10)  # rho missing
    with pytest.raises(DataError):
        SynthSpec("gaussian_pair", 10, rho=1.0)
    with pytest.raises(DataError):
        SynthSpec("functional", 10, transform="square")
    with pytest.raises(DataError):
        SynthSpec("blocks", 10, sizes=(3, 1), within_rho=0.5)
    with pytest.raises(DataError):
        SynthSpec("bogus", 10)
    with pytest.raises(DataError):
        SynthSpec("gaussian_pair", 0, rho=0.2)


def test_from_json():
    spec = SynthSpec.from_json(
        {"kind": "blocks", "n_rows": 50, "seed": 9, "sizes": [2, 2],
         "within_rho": 0.8}
    )
    assert spec.sizes == (2, 2)
    with pytest.raises(DataError, match="bad synth spec"):
        SynthSpec.from_json({"kind": "blocks", "bogus_field": 1})


def test_nonlinear_chain_blocks_kills_linear_correlation():
    ds = nonlinear_chain_blocks((3, 2), n_rows=3000, seed=6)
    assert ds.n_cols == 5
    m = ds.to_matrix()
    # adjacent chain members are deterministically dependent yet linearly flat
    for i, j in [(0, 1), (1, 2), (3, 4)]:
        assert abs(pearson_r(m[:, i], m[:, j]).value) < 0.1
