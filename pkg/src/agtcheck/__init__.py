"""Exact-arithmetic checks relating free-field W-algebra Whittaker vectors to
instanton partition functions."""
from .exactcore import NonGenericPointError, ParamPoint, QSeries, sample_params
from .rootdata import MultiPartition, Partition, RootSystem

__all__ = ["NonGenericPointError", "ParamPoint", "QSeries", "sample_params",
           "MultiPartition", "Partition", "RootSystem"]
__version__ = "0.1.0"
