"""Exact computations with Yangian evaluation modules, rational R-matrices,
qKZ connections and quantized conformal blocks for gl(N)."""

from .exceptions import (AlgebraMismatch, AmbientDimensionError, ConfigurationError,
                         NonGenericParameter, NormalizationFailure, QKZError,
                         UnsupportedWeight)
from .glnrep import Irrep, OperatorMatrix, TensorModule, build_irrep, weyl_dimension
from .linalg import SparseMatrix, Subspace, kernel, map_subspace, rref, subspace_equal
from .blocks import QkzContext, conformal_blocks, e_direct, e_yangian, qkz_operator
from .jordan import JORDAN, NCPoly, PolyCoeff, nc_multiply, nc_power, quantum
from .rmatrix import compute_rmatrix, solve_rmatrix

__version__ = "0.1.0"

__all__ = [
    "AlgebraMismatch", "AmbientDimensionError", "ConfigurationError", "NonGenericParameter",
    "NormalizationFailure", "QKZError", "UnsupportedWeight",
    "Irrep", "OperatorMatrix", "TensorModule", "build_irrep", "weyl_dimension",
    "SparseMatrix", "Subspace", "kernel", "map_subspace", "rref", "subspace_equal",
    "QkzContext", "conformal_blocks", "e_direct", "e_yangian", "qkz_operator",
    "JORDAN", "NCPoly", "PolyCoeff", "nc_multiply", "nc_power", "quantum",
    "compute_rmatrix", "solve_rmatrix",
]
