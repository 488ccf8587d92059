"""Exact rational linear algebra and graded chain complexes."""

from ._backend import BACKEND
from .complex import (
    ZERO_CLASS,
    ChainComplex,
    Generator,
    GradedDims,
    Homology,
    HomologyClass,
    ValidationReport,
    Violation,
    chain_dims,
    euler_characteristic,
    homology,
    validate,
)
from .dense import oracle_homology_dims
from .linalg import Subspace, nullspace, rank, rref
from .matrix import QMatrix
from .rational import Rational, format_rational, parse_rational

__all__ = [
    "BACKEND",
    "ZERO_CLASS",
    "ChainComplex",
    "Generator",
    "GradedDims",
    "Homology",
    "HomologyClass",
    "QMatrix",
    "Rational",
    "Subspace",
    "ValidationReport",
    "Violation",
    "chain_dims",
    "euler_characteristic",
    "format_rational",
    "homology",
    "nullspace",
    "oracle_homology_dims",
    "parse_rational",
    "rank",
    "rref",
    "validate",
]
