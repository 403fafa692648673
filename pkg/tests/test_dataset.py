import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from copent.dataset import (
    Column,
    Dataset,
    ImputePolicy,
    impute,
    load_csv,
    select_columns,
    write_csv,
)
from copent.errors import DataError


def csv_file(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


# ---------------------------------------------------------------- load_csv

def test_load_simple(tmp_path):
    ds = load_csv(csv_file(tmp_path, "a,b\n1,2\n3,4\n"))
    assert ds.n_rows == 2 and ds.n_cols == 2
    assert ds.names == ("a", "b")
    assert not ds.has_missing
    assert list(ds.column("a").values) == [1.0, 3.0]
    assert list(ds.column("b").values) == [2.0, 4.0]


def test_load_na_token(tmp_path):
    ds = load_csv(csv_file(tmp_path, "a\n1\n.\n3\n"), na_tokens={"."})
    col = ds.column("a")
    assert list(col.mask) == [False, True, False]
    assert list(col.present_values()) == [1.0, 3.0]


def test_load_ragged_row_errors(tmp_path):
    with pytest.raises(DataError, match="ragged"):
        load_csv(csv_file(tmp_path, "a,b\n1\n"))


def test_load_zero_data_rows_errors(tmp_path):
    with pytest.raises(DataError, match="no data rows"):
        load_csv(csv_file(tmp_path, "a,b\n"))


def test_load_duplicate_header_errors(tmp_path):
    with pytest.raises(DataError, match="duplicate"):
        load_csv(csv_file(tmp_path, "a,a\n1,2\n"))


def test_load_missing_file_errors(tmp_path):
    with pytest.raises(DataError, match="cannot read"):
        load_csv(tmp_path / "nope.csv")


def test_load_non_numeric_cells_become_missing(tmp_path):
    ds = load_csv(csv_file(tmp_path, "a,b\nfoo,1\n2,bar\n"))
    assert list(ds.column("a").mask) == [True, False]
    assert list(ds.column("b").mask) == [False, True]


def test_load_nan_cell_becomes_missing(tmp_path):
    ds = load_csv(csv_file(tmp_path, "a\nnan\n1\n"))
    assert list(ds.column("a").mask) == [True, False]


def test_load_rfc4180_quoting(tmp_path):
    ds = load_csv(csv_file(tmp_path, '"a,x",b\n1,2\n'))
    assert ds.names == ("a,x", "b")


def test_load_headerless(tmp_path):
    ds = load_csv(csv_file(tmp_path, "1,2\n3,4\n"), header=False)
    assert ds.names == ("c1", "c2")
    assert ds.n_rows == 2


def test_load_custom_delimiter(tmp_path):
    ds = load_csv(csv_file(tmp_path, "a;b\n1;2\n"), delimiter=";")
    assert ds.names == ("a", "b")


# ---------------------------------------------------------------- dataset invariants

def test_duplicate_column_names_rejected():
    col = Column("a", np.array([1.0]), np.array([False]))
    with pytest.raises(DataError, match="duplicate"):
        Dataset((col, col))


def test_empty_column_name_rejected():
    with pytest.raises(DataError, match="non-empty"):
        Column("", np.array([1.0]), np.array([False]))


def test_unequal_lengths_rejected():
    a = Column("a", np.array([1.0]), np.array([False]))
    b = Column("b", np.array([1.0, 2.0]), np.array([False, False]))
    with pytest.raises(DataError, match="same number of rows"):
        Dataset((a, b))


def test_columns_are_read_only():
    ds = Dataset.from_arrays(["a"], np.array([[1.0], [2.0]]))
    with pytest.raises(ValueError):
        ds.column("a").values[0] = 9.0


def test_to_matrix_requires_complete():
    ds = Dataset((Column("a", np.array([1.0, 0.0]), np.array([False, True])),))
    with pytest.raises(DataError, match="impute first"):
        ds.to_matrix()


# ---------------------------------------------------------------- impute

def test_impute_mean_example():
    ds = Dataset((Column("a", np.array([1.0, 0.0, 3.0]),
                         np.array([False, True, False])),))
    out = impute(ds, ImputePolicy("mean"))
    assert list(out.column("a").values) == [1.0, 2.0, 3.0]
    assert not out.has_missing


def test_impute_drop_rows_example():
    ds = Dataset.from_arrays(
        ["a", "b"],
        np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]),
        np.array([[False, False], [False, True], [False, False]]),
    )
    out = impute(ds, ImputePolicy("drop_rows"))
    assert out.n_rows == 2
    assert list(out.column("a").values) == [1.0, 5.0]


def test_impute_no_missing_is_identity():
    ds = Dataset.from_arrays(["a", "b"], np.array([[1.0, 2.0], [3.0, 4.0]]))
    for kind in ImputePolicy.KINDS:
        assert impute(ds, ImputePolicy(kind)) == ds


def test_impute_all_missing_column_errors():
    ds = Dataset((Column("a", np.array([0.0, 0.0]), np.array([True, True])),))
    with pytest.raises(DataError, match="entirely missing"):
        impute(ds, ImputePolicy("mean"))


def test_impute_drop_rows_zero_survivors_errors():
    ds = Dataset((Column("a", np.array([0.0, 0.0]), np.array([True, True])),))
    with pytest.raises(DataError, match="zero rows"):
        impute(ds, ImputePolicy("drop_rows"))


def test_bad_policy_kind_rejected():
    with pytest.raises(ValueError):
        ImputePolicy("median")


@st.composite
def masked_datasets(draw):
    n_rows = draw(st.integers(min_value=1, max_value=12))
    n_cols = draw(st.integers(min_value=1, max_value=4))
    values = draw(st.lists(
        st.lists(st.floats(-1e6, 1e6), min_size=n_cols, max_size=n_cols),
        min_size=n_rows, max_size=n_rows,
    ))
    mask = draw(st.lists(
        st.lists(st.booleans(), min_size=n_cols, max_size=n_cols),
        min_size=n_rows, max_size=n_rows,
    ))
    mask = np.array(mask)
    # keep at least one present value per column so mean imputation is legal
    for j in range(n_cols):
        if mask[:, j].all():
            mask[0, j] = False
    names = [f"c{j}" for j in range(n_cols)]
    return Dataset.from_arrays(names, np.array(values), mask)


@given(masked_datasets())
def test_impute_mean_is_idempotent(ds):
    once = impute(ds, ImputePolicy("mean"))
    assert impute(once, ImputePolicy("mean")) == once


@given(masked_datasets())
def test_impute_never_changes_present_values(ds):
    out = impute(ds, ImputePolicy("mean"))
    for before, after in zip(ds.columns, out.columns):
        assert np.array_equal(before.present_values(),
                              after.values[~before.mask])


# ---------------------------------------------------------------- select_columns

@pytest.fixture
def five_cols():
    return Dataset.from_arrays(
        ["a", "b", "c", "d", "e"], np.arange(10.0).reshape(2, 5)
    )


def test_select_by_name(five_cols):
    out = select_columns(five_cols, ["a"])
    assert out.names == ("a",)


def test_select_inclusive_range(five_cols):
    out = select_columns(five_cols, ["1-3"])
    assert out.names == ("a", "b", "c")


def test_select_mixed_spec(five_cols):
    out = select_columns(five_cols, ["e", 2, "3-4"])
    assert out.names == ("e", "b", "c", "d")


def test_select_unknown_name_errors(five_cols):
    with pytest.raises(DataError, match="unknown column name"):
        select_columns(five_cols, ["zzz"])


def test_select_out_of_bounds_errors(five_cols):
    with pytest.raises(DataError, match="out of bounds"):
        select_columns(five_cols, [6])
    with pytest.raises(DataError, match="out of bounds"):
        select_columns(five_cols, ["4-9"])


def test_select_empty_errors(five_cols):
    with pytest.raises(DataError, match="empty"):
        select_columns(five_cols, [])


def test_select_duplicate_errors(five_cols):
    with pytest.raises(DataError, match="more than once"):
        select_columns(five_cols, ["a", 1])


def test_select_all_names_is_identity(five_cols):
    assert select_columns(five_cols, list(five_cols.names)) == five_cols


def test_select_name_wins_over_numeric_pattern():
    ds = Dataset.from_arrays(["1-2", "x", "y"], np.arange(6.0).reshape(2, 3))
    out = select_columns(ds, ["1-2"])
    assert out.names == ("1-2",)


# ---------------------------------------------------------------- round trip

finite_floats = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=50)
@given(st.lists(st.tuples(finite_floats, finite_floats, st.booleans()),
                min_size=1, max_size=30))
def test_csv_round_trip_is_exact(tmp_path_factory, rows):
    tmp = tmp_path_factory.mktemp("roundtrip")
    values = np.array([[a, b] for a, b, _ in rows])
    mask = np.array([[False, m] for _, _, m in rows])
    ds = Dataset.from_arrays(["x", "y"], values, mask)
    path = tmp / "ds.csv"
    write_csv(ds, path)
    assert load_csv(path) == ds


def test_write_csv_renders_na(tmp_path):
    ds = Dataset((Column("a", np.array([1.0, 0.0]), np.array([False, True])),))
    path = tmp_path / "out.csv"
    write_csv(ds, path)
    assert path.read_text() == "a\n1.0\nNA\n"
