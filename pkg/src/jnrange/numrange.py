"""Numerical range W(A) through its support function.

W(A) is convex, so it is the intersection of the half-planes
``Re(e^{-i t} z) <= h(t)`` with ``h(t)`` the top eigenvalue of
``H(t) = (e^{-i t} A + e^{i t} A*) / 2``. The top eigenvector psi_t gives the
boundary point ``<psi_t|A|psi_t>`` touching that half-plane.
"""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .linalg import _square, eigh_many

DEFAULT_ANGLES = 1024


def _rotated_hermitian(a: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    ph = np.exp(-1j * thetas)[:, None, None]
    m = ph * a[None]
    return (m + np.conj(np.swapaxes(m, 1, 2))) / 2


def support_values(a, thetas) -> tuple[np.ndarray, np.ndarray]:
    """Support values h(theta) and unit maximizers (rows) for many angles."""
    a = _square(a)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    w, v = eigh_many(_rotated_hermitian(a, thetas))
    return w[:, -1], v[:, :, -1]


def support_function(a, theta: float) -> tuple[float, np.ndarray]:
    """``(h(theta), psi)`` where psi maximizes Re(e^{-i theta} <psi|A|psi>)."""
    h, psi = support_values(a, [theta])
    return float(h[0]), psi[0]


@dataclass(frozen=True)
class RangeBoundary:
    angles: np.ndarray
    support_values: np.ndarray
    boundary_points: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("theta,support,re,im\n")
        for t, h, z in zip(self.angles, self.support_values, self.boundary_points):
            buf.write(f"{t:.17g},{h:.17g},{z.real:.17g},{z.imag:.17g}\n")
        return buf.getvalue()

    def max_modulus(self) -> float:
        return float(np.max(np.abs(self.boundary_points)))

    def min_modulus(self) -> float:
        return float(np.min(np.abs(self.boundary_points)))


def boundary(a, num_angles: int = DEFAULT_ANGLES) -> RangeBoundary:
    if num_angles < 3:
        raise ValueError("num_angles must be >= 3")
    a = _square(a)
    thetas = 2 * np.pi * np.arange(num_angles) / num_angles
    h, psi = support_values(a, thetas)
    z = np.einsum("si,ij,sj->s", psi.conj(), a, psi)
    return RangeBoundary(thetas, h, z)


def contains(bnd: RangeBoundary, z: complex, tol: float = 1e-9) -> bool:
    """Support-value membership of z in the tabulated convex set."""
    if tol < 0:
        raise ValueError("tol must be >= 0")
    proj = np.real(np.exp(-1j * bnd.angles) * z)
    return bool(np.all(proj <= bnd.support_values + tol))


def sample_points(a, states: np.ndarray) -> np.ndarray:
    """<psi|A|psi> for each row of ``states``."""
    a = _square(a)
    return np.einsum("si,ij,sj->s", states.conj(), a, states)


@dataclass(frozen=True)
class EllipseParams:
    center: complex
    semi_major: float
    semi_minor: float
    tilt: float
    foci: tuple[complex, complex]

    def support(self, thetas) -> np.ndarray:
        thetas = np.asarray(thetas, dtype=np.float64)
        d = thetas - self.tilt
        rad = np.sqrt((self.semi_major * np.cos(d)) ** 2 + (self.semi_minor * np.sin(d)) ** 2)
        return np.real(np.exp(-1j * thetas) * self.center) + rad

    def points(self, num: int = 360) -> np.ndarray:
        s = 2 * np.pi * np.arange(num) / num
        local = self.semi_major * np.cos(s) + 1j * self.semi_minor * np.sin(s)
        return self.center + np.exp(1j * self.tilt) * local


def eigenvalues_2x2(a) -> tuple[complex, complex]:
    a = _square(a)
    half = (a[0, 0] + a[1, 1]) / 2
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    disc = np.sqrt(half * half - det + 0j)
    return complex(half - disc), complex(half + disc)


def ellipse_2x2(a) -> EllipseParams:
    """Elliptical range of a 2x2 matrix.

    Foci are the eigenvalues; the minor semi-axis b obeys
    ``4 b^2 = tr(A* A) - |l1|^2 - |l2|^2``.
    """
    a = _square(a)
    if a.shape != (2, 2):
        raise DimensionError("ellipse_2x2 needs a 2x2 matrix")
    l1, l2 = eigenvalues_2x2(a)
    fro2 = float(np.sum(np.abs(a) ** 2))
    b2 = (fro2 - abs(l1) ** 2 - abs(l2) ** 2) / 4
    if b2 < 0:
        if b2 < -1e-12 * max(1.0, fro2):
            raise ValueError(f"negative minor axis squared {b2:.3g}")
        b2 = 0.0
    c = abs(l2 - l1) / 2
    semi_major = float(np.sqrt(b2 + c * c))
    tilt = float(np.angle(l2 - l1)) if c > 0 else 0.0
    return EllipseParams(
        center=complex((a[0, 0] + a[1, 1]) / 2),
        semi_major=semi_major,
        semi_minor=float(np.sqrt(b2)),
        tilt=tilt,
        foci=(l1, l2),
    )
