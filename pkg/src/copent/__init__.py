"""Association discovery in tabular data via nonparametric copula entropy.

Pipeline: rank-transform samples to empirical-copula pseudo-observations,
estimate their differential entropy with a kNN estimator; mutual
information is the negated result.  Classical measures (Pearson, Spearman,
Kendall) ride along for comparison, feeding the same association-matrix and
group-extraction machinery.
"""

from .assoc import (
    AssociationMatrix,
    Group,
    GroupReport,
    association_matrix,
    extract_groups,
    matrix_to_long_form,
)
from .copula import PseudoObservations, rank_transform
from .dataset import (
    Column,
    Dataset,
    ImputePolicy,
    impute,
    load_csv,
    select_columns,
    write_csv,
)
from .entropy import (
    DecompositionReport,
    EntropyEstimate,
    EstimatorConfig,
    copula_entropy,
    decomposition_report,
    knn_entropy,
    mutual_information,
)
from .errors import DataError, UsageError
from .measures import PairStat, kendall_tau, pearson_r, spearman_rho
from .synth import SynthSpec, generate
from .xpt import fetch_files, ibm_to_ieee, parse_xpt, parse_xpt_file

__version__ = "0.1.0"

__all__ = [
    "AssociationMatrix", "Group", "GroupReport", "association_matrix",
    "extract_groups", "matrix_to_long_form",
    "PseudoObservations", "rank_transform",
    "Column", "Dataset", "ImputePolicy", "impute", "load_csv",
    "select_columns", "write_csv",
    "DecompositionReport", "EntropyEstimate", "EstimatorConfig",
    "copula_entropy", "decomposition_report", "knn_entropy",
    "mutual_information",
    "DataError", "UsageError",
    "PairStat", "kendall_tau", "pearson_r", "spearman_rho",
    "SynthSpec", "generate",
    "fetch_files", "ibm_to_ieee", "parse_xpt", "parse_xpt_file",
]
