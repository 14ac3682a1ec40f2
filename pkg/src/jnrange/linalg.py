"""Dense complex matrix helpers.

Matrices are plain ``numpy`` complex128 arrays of shape ``(rows, cols)``.
The functions here add the shape/finiteness checks and error types the rest
of the package relies on.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import DimensionError, NotHermitianError

HERMITIAN_TOL = 1e-12


def as_matrix(a) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def mat_mul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt product tr(a b*)."""
    a, b = _square(a), _square(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    # tr(a b*) = sum_ij a_ij conj(b_ij); split parts so (a, a) is exactly real
    re = np.sum(a.real * b.real + a.imag * b.imag)
    im = np.sum(a.imag * b.real - a.real * b.imag)
    return complex(re, im)


def hermitian_defect(a) -> float:
    a = _square(a)
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    return hermitian_defect(a) <= tol


def check_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    a = _square(a)
    d = hermitian_defect(a)
    if d > tol:
        raise NotHermitianError(f"||a - a*||_max = {d:.3g} exceeds {tol:g}")
    return a


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eigen(a) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Raises
    ------
    NotHermitianError
        If ``||a - a*||_max > 1e-12``.
    ConvergenceError
        If 100 sweeps do not bring the off-diagonal mass below
        ``1e-13 * ||a||_F``.
    """
    a = check_hermitian(a)
    w, v = kernels.eigh_batch(a[None])
    return EigenDecomposition(w[0], v[0])


def eigh_many(stack) -> tuple[np.ndarray, np.ndarray]:
    """Batched Jacobi for a (B, N, N) stack already known to be Hermitian."""
    return kernels.eigh_batch(np.asarray(stack, dtype=np.complex128))


def tensor(a, b) -> np.ndarray:
    """Kronecker product; the first factor is the slow index."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace_second(a, dim_first: int, dim_second: int) -> np.ndarray:
    """Trace out the second tensor factor of an operator on C^d1 (x) C^d2."""
    a = _square(a)
    if a.shape[0] != dim_first * dim_second:
        raise DimensionError(
            f"matrix of size {a.shape[0]} is not {dim_first} x {dim_second}"
        )
    return np.einsum("ikjk->ij", a.reshape(dim_first, dim_second, dim_first, dim_second))


def partial_trace_second_many(stack, dim_first: int, dim_second: int) -> np.ndarray:
    stack = np.asarray(stack, dtype=np.complex128)
    n = dim_first * dim_second
    if stack.shape[1:] != (n, n):
        raise DimensionError(f"stack of shape {stack.shape} is not {dim_first} x {dim_second}")
    r = stack.reshape(-1, dim_first, dim_second, dim_first, dim_second)
    return np.einsum("sikjk->sij", r)


class HermitianTuple:
    """Ordered tuple of Hermitian N x N operators ``A_1, ..., A_m``."""

    def __init__(self, operators: Sequence, check: bool = True):
        ops = [as_matrix(o) for o in operators]
        if not ops:
            raise DimensionError("a Hermitian tuple needs at least one operator")
        n = ops[0].shape[0]
        for o in ops:
            if o.shape != (n, n):
                raise DimensionError("all operators must share one square shape")
            if check:
                check_hermitian(o)
        self.operators = np.stack(ops)
        self.operators.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.operators.shape[1]

    @property
    def m(self) -> int:
        return self.operators.shape[0]

    def __len__(self):
        return self.m

    def __getitem__(self, j):
        return self.operators[j]

    def __iter__(self):
        return iter(self.operators)

    def __repr__(self):
        return f"HermitianTuple(m={self.m}, dim={self.dim})"

    def traces(self) -> np.ndarray:
        return np.trace(self.operators, axis1=1, axis2=2).real

    def barycenter(self) -> np.ndarray:
        """Mean of the joint numerical shadow: (tr A_j / N)_j."""
        return self.traces() / self.dim

    def combination(self, u) -> np.ndarray:
        """sum_j u_j A_j."""
        u = np.asarray(u, dtype=np.float64)
        if u.shape != (self.m,):
            raise DimensionError(f"direction needs {self.m} components")
        return np.tensordot(u, self.operators, axes=1)

    def map(self, f) -> "HermitianTuple":
        return HermitianTuple([f(o) for o in self.operators])

    @classmethod
    def from_complex(cls, a) -> "HermitianTuple":
        """(A_1, A_2) with a = A_1 + i A_2."""
        return cls(hermitian_parts(a))


def hermitian_parts(a) -> tuple[np.ndarray, np.ndarray]:
    """Split a = h1 + i h2 into Hermitian h1, h2."""
    a = _square(a)
    h1 = (a + a.conj().T) / 2
    h2 = (a - a.conj().T) / 2j
    return h1, h2


# -- JSON ---------------------------------------------------------------------

def matrix_to_json(a, kind: str | None = None) -> dict:
    a = as_matrix(a)
    obj = {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "re": a.real.tolist(),
        "im": a.imag.tolist(),
    }
    if kind is not None:
        obj["kind"] = kind
    return obj


def _grid(obj, key, rows, cols):
    grid = obj[key]
    if not isinstance(grid, list) or len(grid) != rows:
        raise ValueError(f"'{key}' must have {rows} rows")
    for row in grid:
        if not isinstance(row, list) or len(row) != cols:
            raise ValueError(f"'{key}' is ragged: every row needs {cols} entries")
    return np.array(grid, dtype=np.float64)


def matrix_from_json(obj: dict) -> np.ndarray:
    """Parse ``{"rows", "cols", "re", "im"?}``; ``im`` defaults to zeros."""
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError("matrix JSON needs integer 'rows' and 'cols'") from exc
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    re = _grid(obj, "re", rows, cols)
    im = _grid(obj, "im", rows, cols) if "im" in obj else np.zeros((rows, cols))
    return as_matrix(re + 1j * im)


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))


def dump_matrix(a, path, kind: str | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_json(a, kind), fh)
