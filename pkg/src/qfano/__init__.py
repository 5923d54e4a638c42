"""Exact-arithmetic enumeration of numerical Q-Fano threefold candidates.

The package computes orbifold Riemann-Roch plurigenera over exact
rationals, enumerates every (index, basket, degree) triple passing the
standard numerical tests, renders the per-index survey tables, matches
candidates against weighted-projective-space models, and runs bounded
searches over the numerology of two-ray link diagrams.
"""

from .arith import Rational
from .enumeration import (
    Candidate,
    DEFAULT_CONFIG,
    FILTER_SETS,
    FilterConfig,
    INDEX_SET,
    enumerate_candidates,
)
from .riemann_roch import Basket, FanoInput, SingularPoint, chi, dims, genus

__all__ = [
    "Basket",
    "Candidate",
    "DEFAULT_CONFIG",
    "FILTER_SETS",
    "FanoInput",
    "FilterConfig",
    "INDEX_SET",
    "Rational",
    "SingularPoint",
    "chi",
    "dims",
    "genus",
    "enumerate_candidates",
]
