"""Exact composition-algebra toolkit for cyclic, Kronecker and small tame
quivers: finite-field point counts, interpolated counting polynomials,
Euler-characteristic products at q=1, and the integral bases built on top.
"""

from .engine import (Engine, HallElement, char_fn, family, shared_engine,
                     simple, unit)
from .fplinalg import ResourceError, gaussian_binomial
from .partitions import MultiPartition, Partition, Word
from .qpoly import NonPolynomialCountError, QPolynomial
from .quivers import Quiver, a2tilde, by_name, cyclic, kronecker
from .reps import FFRep, KroneckerClass

__all__ = [
    "Engine", "FFRep", "HallElement", "KroneckerClass", "MultiPartition",
    "NonPolynomialCountError", "Partition", "QPolynomial", "Quiver",
    "ResourceError", "Word", "a2tilde", "by_name", "char_fn", "cyclic",
    "family", "gaussian_binomial", "kronecker", "shared_engine", "simple",
    "unit",
]

__version__ = "0.1.0"
