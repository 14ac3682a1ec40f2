"""Joint numerical ranges of Hermitian tuples.

For m > 2 the joint numerical range need not be convex. Nothing here treats
a sampled point cloud as convex; membership statements go through the
support function of the convex hull, ``h(u) = lambda_max(sum_j u_j A_j)``.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DimensionError
from .linalg import HermitianTuple, eigh_many
from .rng import as_generator
from .states import as_state, haar_states

GS_RTOL = 1e-10


def jnr_map(tuple_: HermitianTuple, psi) -> np.ndarray:
    psi = as_state(psi)
    if psi.size != tuple_.dim:
        raise DimensionError(f"state of length {psi.size} for operators of size {tuple_.dim}")
    return kernels.quad_forms(psi[None], tuple_.operators)[0]


def jnr_sample(tuple_: HermitianTuple, count: int, rng=None, workers: int | None = None) -> np.ndarray:
    """Images of ``count`` Haar states, shape (count, m)."""
    states = haar_states(tuple_.dim, count, as_generator(rng), workers)
    return kernels.quad_forms(states, tuple_.operators)


def jnr_support_many(tuple_: HermitianTuple, directions) -> np.ndarray:
    """Support values of conv W for each row of ``directions`` (normalized here)."""
    u = np.atleast_2d(np.asarray(directions, dtype=np.float64))
    if u.shape[1] != tuple_.m:
        raise DimensionError(f"directions need {tuple_.m} components")
    norms = np.linalg.norm(u, axis=1)
    if np.any(norms == 0):
        raise ValueError("direction must be nonzero")
    u = u / norms[:, None]
    mats = np.tensordot(u, tuple_.operators, axes=1)
    mats = (mats + np.conj(np.swapaxes(mats, 1, 2))) / 2
    w, _ = eigh_many(mats)
    return w[:, -1]


def jnr_support(tuple_: HermitianTuple, direction) -> float:
    return float(jnr_support_many(tuple_, [direction])[0])


def random_directions(m: int, count: int, rng=None) -> np.ndarray:
    u = as_generator(rng).normal((count, m))
    return u / np.linalg.norm(u, axis=1, keepdims=True)


def hull_violation(tuple_: HermitianTuple, points, directions) -> float:
    """max over points and directions of <u, x> - h(u); <= 0 means inside."""
    u = np.atleast_2d(directions)
    u = u / np.linalg.norm(u, axis=1, keepdims=True)
    h = jnr_support_many(tuple_, u)
    return float(np.max(np.asarray(points) @ u.T - h[None, :]))


# -- projection factorization -------------------------------------------------

def _hs_real(x, y) -> float:
    return float(np.real(np.sum(x * np.conj(y))))


@dataclass(frozen=True)
class ProjectionFactorization:
    """L(X) = M Pr(X) + offsets tr(X) for L(X) = (tr(X A_j))_j.

    ``subspace_basis`` is an HS-orthonormal basis E_1..E_p of the span of the
    traceless parts A_j - (tr A_j / N) I; ``coefficient_map`` is the m x p
    matrix M_jk = tr(E_k A_j).
    """

    subspace_basis: np.ndarray
    coefficient_map: np.ndarray
    rank: int
    trace_offsets: np.ndarray
    dim: int
    notes: list = field(default_factory=list)

    @property
    def condition_number(self) -> float:
        if self.rank == 0:
            return float("inf")
        s = np.linalg.svd(self.coefficient_map, compute_uv=False)
        return float(s[0] / s[-1]) if s[-1] > 0 else float("inf")

    def coordinates(self, x) -> np.ndarray:
        """HS coordinates of the orthogonal projection of X onto the span."""
        return np.einsum("kij,ij->k", np.conj(self.subspace_basis), x).real

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.complex128)
        return self.coefficient_map @ self.coordinates(x) + self.trace_offsets * np.trace(x).real

    def reconstruct_state(self, point) -> np.ndarray:
        """Invert the map on trace-one Hermitians (needs full rank p = N^2 - 1)."""
        n = self.dim
        coords, *_ = np.linalg.lstsq(self.coefficient_map, np.asarray(point) - self.trace_offsets, rcond=None)
        return np.eye(n) / n + np.tensordot(coords, self.subspace_basis, axes=1)


def factorize(tuple_: HermitianTuple) -> ProjectionFactorization:
    n = tuple_.dim
    offsets = tuple_.traces() / n
    centered = tuple_.operators - offsets[:, None, None] * np.eye(n)[None]
    basis = []
    for a in centered:
        norm0 = np.sqrt(_hs_real(a, a))
        if norm0 == 0:
            continue
        r = a.copy()
        for _ in range(2):  # re-orthogonalize once for stability
            for e in basis:
                r = r - _hs_real(r, e) * e
        res = np.sqrt(_hs_real(r, r))
        if res < GS_RTOL * norm0:
            continue
        basis.append(r / res)
    if basis:
        e = np.stack(basis)
    else:  # every A_j is a multiple of I: L only sees tr(X)
        e = np.zeros((0, n, n), dtype=np.complex128)
    coeff = np.einsum("kij,aji->ak", e, tuple_.operators).real
    notes = []
    if np.any(np.abs(offsets) > 0):
        notes.append("operators centered by their trace offsets; the isomorphism is affine")
    return ProjectionFactorization(e, coeff, len(basis), offsets, n, notes)


@dataclass
class InjectivityReport:
    rank: int
    condition_number: float
    trials: int
    violations: list
    phase_mismatches: int
    max_reconstruction_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return not self.violations and self.phase_mismatches == 0 and self.max_reconstruction_error <= self.tol

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "condition_number": self.condition_number,
            "trials": self.trials,
            "violations": self.violations,
            "phase_mismatches": self.phase_mismatches,
            "max_reconstruction_error": self.max_reconstruction_error,
            "passed": self.passed,
        }


def verify_affine_injectivity(tuple_: HermitianTuple, trials: int = 1000, rng=None, tol: float = 1e-8) -> InjectivityReport:
    """Sample the claim that the JNR map separates pure states when rank = N^2 - 1.

    Each trial draws a pair psi, phi and checks that coinciding images force
    |<psi|phi>| = 1. Because random pairs essentially never collide, each trial
    also checks that a phase copy of psi lands on the same point and that
    rho_psi is recovered from its image through the inverse factorization,
    which is what injectivity actually rests on.
    """
    fac = factorize(tuple_)
    n = tuple_.dim
    if fac.rank != n * n - 1:
        raise ValueError(f"rank {fac.rank} is not N^2 - 1 = {n * n - 1}")
    rng = as_generator(rng)
    psi = haar_states(n, trials, rng.substream(0))
    phi = haar_states(n, trials, rng.substream(1))
    phases = np.exp(2j * np.pi * rng.substream(2).uniform(trials))
    ops = tuple_.operators
    x = kernels.quad_forms(psi, ops)
    y = kernels.quad_forms(phi, ops)
    xp = kernels.quad_forms(psi * phases[:, None], ops)

    violations = []
    dist = np.linalg.norm(x - y, axis=1)
    overlap = np.abs(np.sum(psi.conj() * phi, axis=1))
    for t in np.flatnonzero(dist <= tol):
        if abs(overlap[t] - 1) > tol:
            violations.append({"trial": int(t), "distance": float(dist[t]), "overlap": float(overlap[t])})
    phase_bad = int(np.sum(np.linalg.norm(x - xp, axis=1) > tol))

    rec_err = 0.0
    for t in range(trials):
        rho = np.outer(psi[t], psi[t].conj())
        rec_err = max(rec_err, float(np.max(np.abs(fac.reconstruct_state(x[t]) - rho))))
    return InjectivityReport(fac.rank, fac.condition_number, trials, violations, phase_bad, rec_err, tol)


def points_to_csv(points) -> str:
    points = np.atleast_2d(points)
    buf = io.StringIO()
    buf.write(",".join(f"x{j + 1}" for j in range(points.shape[1])) + "\n")
    for row in points:
        buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
    return buf.getvalue()
