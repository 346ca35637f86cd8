"""Eigensolvers for band Hamiltonians."""
from eigensolve.solver import dense_full_diag, iterative_extremal, matvec
from eigensolve.types import SpectrumResult

__all__ = ["SpectrumResult", "dense_full_diag", "iterative_extremal", "matvec"]
