"""Numerical ranges, joint numerical ranges and joint numerical shadows."""
from .errors import ConvergenceError, DimensionError, HypothesisError, NotHermitianError
from .kernels import BACKEND
from .linalg import EigenDecomposition, HermitianTuple, hermitian_eigen
from .rng import SeededGenerator

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConvergenceError",
    "DimensionError",
    "EigenDecomposition",
    "HermitianTuple",
    "HypothesisError",
    "NotHermitianError",
    "SeededGenerator",
    "hermitian_eigen",
]
