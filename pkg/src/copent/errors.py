"""Exception types shared across the package.

The CLI maps these onto exit codes: UsageError -> 1, DataError -> 2.
"""


class DataError(ValueError):
    """Input data violates a contract (unparseable file, missing values
    where none are allowed, degenerate columns, ...)."""


class UsageError(ValueError):
    """Mutually inconsistent or invalid options, detected before any
    computation runs."""
