"""Exact truncated q-series arithmetic and a checker for Rogers-Ramanujan type identities."""

from ._kernels import BACKEND
from .builders import SeriesBuilder, build_series, ct_representation
from .formal import FormalSeries
from .partitions import PartitionClass, count_dp, count_enumerate
from .qseries import DEFAULT_DENOM, ONE, Monomial, QSeries
from .recursion import RecursionTables, recursion_tables
from .registry import IdentitySpec, lookup, registry
from .verify import VerificationReport, verify, verify_all

__all__ = [
    "BACKEND", "DEFAULT_DENOM", "ONE", "FormalSeries", "IdentitySpec", "Monomial",
    "PartitionClass", "QSeries", "RecursionTables", "SeriesBuilder", "VerificationReport",
    "build_series", "count_dp", "count_enumerate", "ct_representation", "lookup",
    "recursion_tables", "registry", "verify", "verify_all",
]
