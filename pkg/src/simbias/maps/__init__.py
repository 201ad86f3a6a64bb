"""Generative input-output maps producing bit-string outputs."""

from simbias.maps.base import (
    DEFAULT_ENUM_BUDGET,
    REGISTRY,
    MapSpec,
    UnsupportedOperation,
    count_rows,
    map_from_dict,
    rows_to_strings,
)
from simbias.maps.bernoulli import BernoulliSpec, bernoulli_exact, bernoulli_map
from simbias.maps.fst import FstSpec, fst_apply, fst_random
from simbias.maps.polynomial import PolynomialSpec, polynomial_map, updown_discretize
from simbias.maps.rna import RnaSpec, nussinov_fold, rna_map
from simbias.maps.timeseries import (
    IngestionError,
    TimeSeriesSpec,
    mean_discretize,
    timeseries_ingest,
)

__all__ = [
    "DEFAULT_ENUM_BUDGET",
    "REGISTRY",
    "BernoulliSpec",
    "FstSpec",
    "IngestionError",
    "MapSpec",
    "PolynomialSpec",
    "RnaSpec",
    "TimeSeriesSpec",
    "UnsupportedOperation",
    "bernoulli_exact",
    "bernoulli_map",
    "count_rows",
    "fst_apply",
    "fst_random",
    "map_from_dict",
    "mean_discretize",
    "nussinov_fold",
    "polynomial_map",
    "rna_map",
    "rows_to_strings",
    "timeseries_ingest",
    "updown_discretize",
]
