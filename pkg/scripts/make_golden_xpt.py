#!/usr/bin/env python3
"""Regenerate the checked-in XPT golden pair under tests/data/.

Each golden .xpt is built by the test-local writer (tests/xpt_writer.py)
from values declared literally below; the paired .csv is written from the
same literal values.  Before anything is frozen to disk, the bytes are
cross-validated with pandas.read_sas as an independent reference reader.

Run from the repository root:  python3 scripts/make_golden_xpt.py
"""

import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))
sys.path.insert(0, str(ROOT / "src"))

from xpt_writer import write_xpt  # noqa: E402

from copent.dataset import Column, Dataset, write_csv  # noqa: E402

DATA = ROOT / "tests" / "data"

# golden 1: two numeric variables x three observations, values 1..6
SIMPLE_MEMBER = "GOLD1"
SIMPLE_VARS = [("X1", [1.0, 3.0, 5.0]), ("X2", [2.0, 4.0, 6.0])]

# golden 2: numeric columns with missing codes + a character column.
# No literal 0.0 here: pandas.read_sas mis-decodes the all-zero pattern
# (its vectorized IBM conversion yields 16^-65), which would defeat the
# cross-validation; the zero pattern is covered by a direct unit test.
MIXED_MEMBER = "GOLD2"
MIXED_VARS = [
    ("NUM1", [1.5, None, -3.25, 1e9]),
    ("NUM2", [2.5, 0.1, None, 123.456]),
    ("LABEL", ["aa", "bb", "cc", "dd"]),
]


def expected_dataset(variables) -> Dataset:
    cols = []
    for name, values in variables:
        if any(isinstance(v, str) for v in values):
            vals = np.zeros(len(values))
            mask = np.ones(len(values), dtype=bool)
        else:
            vals = np.array([0.0 if v is None else v for v in values])
            mask = np.array([v is None for v in values])
        cols.append(Column(name, vals, mask))
    return Dataset(tuple(cols))


def cross_validate(blob: bytes, variables, tmp: Path) -> None:
    import pandas as pd

    tmp.write_bytes(blob)
    frame = pd.read_sas(tmp, format="xport")
    for name, values in variables:
        if any(isinstance(v, str) for v in values):
            got = [v.decode() if isinstance(v, bytes) else v for v in frame[name]]
            assert got == values, (name, got)
        else:
            for have, want in zip(frame[name], values):
                if want is None:
                    assert np.isnan(have), (name, have)
                else:
                    assert have == want, (name, have, want)
    print(f"pandas.read_sas agrees on {tmp.name}")


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    for member, variables, stem in [
        (SIMPLE_MEMBER, SIMPLE_VARS, "golden_simple"),
        (MIXED_MEMBER, MIXED_VARS, "golden_mixed"),
    ]:
        blob = write_xpt(member, variables)
        cross_validate(blob, variables, DATA / f"{stem}.xpt")
        write_csv(expected_dataset(variables), DATA / f"{stem}.csv")
        print(f"wrote {stem}.xpt ({len(blob)} bytes) and {stem}.csv")


if __name__ == "__main__":
    main()
