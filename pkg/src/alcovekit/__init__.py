"""Exact combinatorics of alcoves, affine Hecke algebras, generic
Kazhdan-Lusztig polynomials and intersection cohomology of quasimaps' spaces."""

from .errors import (
    AlcoveKitError,
    ConfigurationError,
    ConsistencyError,
    ConvergenceError,
    DomainError,
    OutOfRangeError,
    UsageError,
)
from .exactalg import CharacterSeries, LaurentPoly
from .rootdata import RootDatum, build_root_datum

__version__ = "0.1.0"
