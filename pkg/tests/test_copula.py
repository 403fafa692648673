import numpy as np
import pytest
from hypothesis import given, strategies as st

from copent.copula import rank_transform
from copent.dataset import Column, Dataset
from copent.errors import DataError


def one_col(values):
    return Dataset.from_arrays(["x"], np.asarray(values, float)[:, None])


def test_rank_example_distinct():
    po = rank_transform(one_col([3, 1, 2]))
    assert list(po.matrix[:, 0]) == [1.0, 1 / 3, 2 / 3]


def test_rank_example_ties_share_maximal_count():
    po = rank_transform(one_col([5, 5, 2]))
    assert list(po.matrix[:, 0]) == [1.0, 1.0, 1 / 3]


def test_monotone_transforms_give_identical_pseudo_columns():
    x = np.array([-1.7, 0.2, 1.3, 2.9, -0.4])
    base = rank_transform(one_col(x)).matrix
    for g in (lambda v: v ** 3, np.exp, lambda v: 5 * v + 2):
        assert np.array_equal(rank_transform(one_col(g(x))).matrix, base)


def test_missing_entries_rejected():
    ds = Dataset((Column("x", np.array([1.0, 2.0]), np.array([False, True])),))
    with pytest.raises(DataError, match="impute first"):
        rank_transform(ds)


def test_fewer_than_two_rows_rejected():
    with pytest.raises(DataError, match="2 rows"):
        rank_transform(one_col([1.0]))


def test_source_names_carried():
    ds = Dataset.from_arrays(["p", "q"], np.arange(8.0).reshape(4, 2))
    assert rank_transform(ds).source_names == ("p", "q")


def test_averaged_rank_mode():
    po = rank_transform(one_col([1, 2, 2]), ranks="average")
    assert list(po.matrix[:, 0]) == [1 / 3, 2.5 / 3, 2.5 / 3]


def test_bad_ranks_mode_rejected():
    with pytest.raises(ValueError, match="ranks"):
        rank_transform(one_col([1, 2, 3]), ranks="dense")


columns = st.lists(
    st.floats(-1e9, 1e9).map(lambda v: round(v, 2)), min_size=2, max_size=60
)


@given(columns)
def test_counts_match_quadratic_oracle(values):
    x = np.asarray(values, float)
    po = rank_transform(one_col(x)).matrix[:, 0]
    n = len(x)
    for t in range(n):
        count = int(sum(1 for s in range(n) if x[s] <= x[t]))
        assert po[t] == count / n


@given(columns)
def test_output_is_grid_subset_with_unit_max(values):
    po = rank_transform(one_col(values)).matrix[:, 0]
    n = len(values)
    grid = {r / n for r in range(1, n + 1)}
    assert set(po) <= grid
    assert po.max() == 1.0
    assert po.min() > 0.0


@given(columns, st.randoms(use_true_random=False))
def test_permutation_equivariance(values, rnd):
    x = np.asarray(values, float)
    perm = list(range(len(x)))
    rnd.shuffle(perm)
    base = rank_transform(one_col(x)).matrix[:, 0]
    permuted = rank_transform(one_col(x[perm])).matrix[:, 0]
    assert np.array_equal(base[perm], permuted)


def test_sorted_output_equals_rank_sequence_over_n():
    x = np.array([9.5, -2.0, 3.3, 3.3, 7.1])
    po = np.sort(rank_transform(one_col(x)).matrix[:, 0])
    # ascending pseudo-observations are the attained <=-count ranks over n
    counts = sorted(np.searchsorted(np.sort(x), x, side="right"))
    assert np.array_equal(po, np.array(counts) / len(x))
