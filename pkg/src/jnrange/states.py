"""Pure and mixed states, Haar sampling, Bloch coordinates."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import kernels
from .errors import DimensionError
from .linalg import HermitianTuple, as_matrix, check_hermitian, hermitian_eigen
from .rng import SeededGenerator, as_generator, map_blocks

Convention = Literal["reconstruction", "expectation"]
NORM_TOL = 1e-12
PSD_TOL = 1e-10


def as_state(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if v.size < 1:
        raise DimensionError("empty state vector")
    norm = np.linalg.norm(v)
    if norm < NORM_TOL:
        raise ValueError("zero vector is not a state")
    if abs(norm**2 - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalized (|psi|^2 = {norm**2:.17g})")
    return v


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(v)
    if norm < NORM_TOL:
        raise ValueError("cannot normalize the zero vector")
    return v / norm


def projector(psi) -> np.ndarray:
    """|psi><psi| for a unit vector psi."""
    v = as_state(psi)
    return np.outer(v, v.conj())


def density_defects(rho) -> dict:
    rho = as_matrix(rho)
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace_err = abs(np.trace(rho) - 1.0)
    h = (rho + rho.conj().T) / 2
    min_eig = float(hermitian_eigen(h).eigenvalues[0])
    return {"hermitian": herm, "trace": float(trace_err), "min_eigenvalue": min_eig}


def is_density(rho) -> bool:
    d = density_defects(rho)
    return d["hermitian"] <= NORM_TOL and d["trace"] <= NORM_TOL and d["min_eigenvalue"] >= -PSD_TOL


def check_density(rho) -> np.ndarray:
    rho = as_matrix(rho)
    d = density_defects(rho)
    if not (d["hermitian"] <= NORM_TOL and d["trace"] <= NORM_TOL):
        raise ValueError(f"not a density matrix: {d}")
    if d["min_eigenvalue"] < -PSD_TOL:
        raise ValueError(f"density matrix is not positive: {d}")
    return rho


# -- Haar sampling ------------------------------------------------------------

def _haar_block(dim: int, rng: SeededGenerator, n: int) -> np.ndarray:
    z = rng.complex_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_sample(dim: int, rng=None) -> np.ndarray:
    """One Haar-random unit vector in C^dim (normalized complex Gaussian)."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return _haar_block(dim, as_generator(rng), 1)[0]


def haar_states(dim: int, count: int, rng=None, workers: int | None = None) -> np.ndarray:
    """``count`` Haar states as rows of a (count, dim) array.

    Generated blockwise from substreams of ``rng`` so the result depends only
    on the generator and ``count``.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = as_generator(rng)
    blocks = map_blocks(lambda sub, n: _haar_block(dim, sub, n), count, rng, workers)
    return np.concatenate(blocks, axis=0)


def haar_unitary(dim: int, rng=None) -> np.ndarray:
    """Haar-random unitary: QR of a complex Ginibre matrix with the phases of R divided out."""
    rng = as_generator(rng)
    z = rng.complex_normal((dim, dim)) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


# -- operator bases -----------------------------------------------------------

def pauli_basis() -> HermitianTuple:
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    return HermitianTuple([s1, s2, s3])


def gellmann_basis() -> HermitianTuple:
    """The eight Gell-Mann matrices in the usual order, tr(l_j l_k) = 2 delta_jk."""
    def sym(j, k):
        m = np.zeros((3, 3), dtype=complex)
        m[j, k] = m[k, j] = 1
        return m

    def asym(j, k):
        m = np.zeros((3, 3), dtype=complex)
        m[j, k] = -1j
        m[k, j] = 1j
        return m

    l3 = np.diag([1, -1, 0]).astype(complex)
    l8 = np.diag([1, 1, -2]).astype(complex) / np.sqrt(3)
    return HermitianTuple([
        sym(0, 1), asym(0, 1), l3,
        sym(0, 2), asym(0, 2),
        sym(1, 2), asym(1, 2), l8,
    ])


def traceless_orthogonal_basis(dim: int) -> HermitianTuple:
    """Generalized Gell-Mann basis of the traceless Hermitian dim x dim matrices.

    Order: for each pair j < k the symmetric then the antisymmetric matrix,
    followed by the diagonal ladder. For dim = 2 this is (s1, s2, s3).
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    ops = []
    for j in range(dim):
        for k in range(j + 1, dim):
            s = np.zeros((dim, dim), dtype=complex)
            s[j, k] = s[k, j] = 1
            a = np.zeros((dim, dim), dtype=complex)
            a[j, k] = -1j
            a[k, j] = 1j
            ops += [s, a]
    for l in range(1, dim):
        d = np.zeros(dim)
        d[:l] = 1
        d[l] = -l
        ops.append(np.diag(d * np.sqrt(2.0 / (l * (l + 1)))).astype(complex))
    return HermitianTuple(ops)


# -- Bloch vectors ------------------------------------------------------------

@dataclass(frozen=True)
class BlochVector:
    components: np.ndarray
    convention: Convention

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.components))


def _check_basis(basis: HermitianTuple, tol: float = 1e-10) -> np.ndarray:
    ops = basis.operators
    traces = np.abs(np.trace(ops, axis1=1, axis2=2))
    if np.any(traces > tol):
        raise ValueError("basis operators must be traceless")
    gram = np.einsum("aij,bji->ab", ops, ops).real
    off = gram - np.diag(np.diag(gram))
    if np.any(np.abs(off) > tol):
        raise ValueError("basis operators are not pairwise orthogonal")
    return np.diag(gram)


def bloch_decompose(rho, basis: HermitianTuple, convention: Convention = "reconstruction") -> BlochVector:
    """Coordinates of ``rho`` in a traceless orthogonal basis.

    ``reconstruction``: tau_j = tr(rho l_j) / tr(l_j^2), so that
    rho = I/N + sum_j tau_j l_j when the basis is complete (qubit: |tau| <= 1/2).

    ``expectation``: tau_j = tr(rho l_j), the expectation values (qubit with
    Pauli basis: |tau| <= 1).
    """
    rho = check_hermitian(rho)
    if rho.shape[0] != basis.dim:
        raise DimensionError("state and basis dimensions differ")
    norms = _check_basis(basis)
    ev = np.einsum("ij,aji->a", rho, basis.operators).real
    if convention == "reconstruction":
        tau = ev / norms
    elif convention == "expectation":
        tau = ev
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return BlochVector(tau, convention)


def bloch_reconstruct(tau: BlochVector, basis: HermitianTuple) -> np.ndarray:
    comps = np.asarray(tau.components, dtype=float)
    if tau.convention == "expectation":
        comps = comps / np.einsum("aij,aji->a", basis.operators, basis.operators).real
    n = basis.dim
    return np.eye(n) / n + np.tensordot(comps, basis.operators, axes=1)


def expectations(states: np.ndarray, tuple_: HermitianTuple) -> np.ndarray:
    """<psi_s|A_j|psi_s> for each row psi_s."""
    return kernels.quad_forms(states, tuple_.operators)
