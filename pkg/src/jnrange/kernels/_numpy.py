"""Vectorized numpy kernels. Reference path, always available."""
import numpy as np

from ..errors import ConvergenceError


def _offdiag_norm(a):
    n = a.shape[-1]
    mask = ~np.eye(n, dtype=bool)
    return np.sqrt(np.sum(np.abs(a[:, mask]) ** 2, axis=1))


def eigh_batch(a, tol=1e-13, max_sweeps=100):
    """Cyclic complex Jacobi on a stack of Hermitian matrices.

    Every (p, q) rotation is applied to all still-active matrices at once.
    Matrices leave the active set as soon as they converge so that each one
    sees exactly the rotation sequence the scalar kernel would apply.

    Parameters
    ----------
    a : ndarray, shape (B, N, N), complex
        Hermitian matrices (not checked).
    tol : float
        Stop when the off-diagonal Frobenius norm drops below
        ``tol * ||a||_F``.
    max_sweeps : int

    Returns
    -------
    w : ndarray, shape (B, N)
        Eigenvalues, ascending.
    v : ndarray, shape (B, N, N)
        Unit eigenvectors as columns.
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    if a.ndim != 3:
        raise ValueError("expected a stack of square matrices")
    nb, n, _ = a.shape
    v = np.zeros_like(a)
    v[:, np.arange(n), np.arange(n)] = 1.0
    if nb == 0:
        return np.zeros((0, n)), v

    scale = np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
    active = _offdiag_norm(a) >= tol * scale
    active &= scale > 0

    for _ in range(max_sweeps):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        w = a[idx]
        x = v[idx]
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = w[:, p, q]
                r = np.abs(apq)
                nz = r > 0.0
                rs = np.where(nz, r, 1.0)
                app = w[:, p, p].real
                aqq = w[:, q, q].real
                tau = (aqq - app) / (2.0 * rs)
                sgn = np.where(tau >= 0.0, 1.0, -1.0)
                t = np.where(nz, sgn / (np.abs(tau) + np.hypot(1.0, tau)), 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                ph = np.where(nz, np.conj(apq) / rs, 1.0 + 0.0j)
                vpp = c[:, None]
                vpq = s[:, None]
                vqp = (-s * ph)[:, None]
                vqq = (c * ph)[:, None]

                cp = w[:, :, p].copy()
                cq = w[:, :, q].copy()
                w[:, :, p] = cp * vpp + cq * vqp
                w[:, :, q] = cp * vpq + cq * vqq
                rp = w[:, p, :].copy()
                rq = w[:, q, :].copy()
                w[:, p, :] = vpp * rp + np.conj(vqp) * rq
                w[:, q, :] = vpq * rp + np.conj(vqq) * rq
                w[:, p, q] = 0.0
                w[:, q, p] = 0.0
                w[:, p, p] = w[:, p, p].real
                w[:, q, q] = w[:, q, q].real

                xp = x[:, :, p].copy()
                xq = x[:, :, q].copy()
                x[:, :, p] = xp * vpp + xq * vqp
                x[:, :, q] = xp * vpq + xq * vqq
        a[idx] = w
        v[idx] = x
        active[idx] = _offdiag_norm(w) >= tol * scale[idx]
    else:
        if active.any():
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")

    evals = np.real(a[:, np.arange(n), np.arange(n)])
    order = np.argsort(evals, axis=1, kind="stable")
    evals = np.take_along_axis(evals, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return evals, v


def quad_forms(psi, ops):
    """out[s, j] = Re <psi_s| ops_j |psi_s>."""
    psi = np.asarray(psi, dtype=np.complex128)
    ops = np.asarray(ops, dtype=np.complex128)
    out = np.empty((psi.shape[0], ops.shape[0]))
    conj = psi.conj()
    for j in range(ops.shape[0]):
        y = psi @ ops[j].T
        out[:, j] = np.sum(conj * y, axis=1).real
    return out


def box_muller(u):
    """Map uniform pairs u[..., 0], u[..., 1] in [0, 1) to complex normals.

    Real and imaginary parts are the cosine and sine outputs of one
    Box-Muller transform, each a standard normal.
    """
    u = np.asarray(u, dtype=np.float64)
    r = np.sqrt(-2.0 * np.log1p(-u[..., 0]))
    ang = 2.0 * np.pi * u[..., 1]
    return r * np.cos(ang) + 1j * (r * np.sin(ang))
