"""numba kernels; same algorithms as ``_numpy``, one matrix or sample at a time."""
import math

import numba
import numpy as np

from ..errors import ConvergenceError


@numba.njit(nogil=True, cache=True)
def _jacobi_one(a, v, tol, max_sweeps):
    n = a.shape[0]
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j].real ** 2 + a[i, j].imag ** 2
    scale = math.sqrt(scale)
    if scale == 0.0:
        return True
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if math.sqrt(off) < tol * scale:
            return True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ph = apq.conjugate() / r
                vpp = c + 0.0j
                vpq = s + 0.0j
                vqp = -s * ph
                vqq = c * ph
                for k in range(n):
                    cp = a[k, p]
                    cq = a[k, q]
                    a[k, p] = cp * vpp + cq * vqp
                    a[k, q] = cp * vpq + cq * vqq
                for k in range(n):
                    rp = a[p, k]
                    rq = a[q, k]
                    a[p, k] = vpp * rp + vqp.conjugate() * rq
                    a[q, k] = vpq * rp + vqq.conjugate() * rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for k in range(n):
                    xp = v[k, p]
                    xq = v[k, q]
                    v[k, p] = xp * vpp + xq * vqp
                    v[k, q] = xp * vpq + xq * vqq
    return False


@numba.njit(nogil=True, cache=True)
def _eigh_batch(a, tol, max_sweeps):
    nb, n, _ = a.shape
    evals = np.empty((nb, n))
    evecs = np.empty((nb, n, n), dtype=np.complex128)
    ok = np.ones(nb, dtype=np.bool_)
    for b in range(nb):
        w = a[b].copy()
        x = np.zeros((n, n), dtype=np.complex128)
        for i in range(n):
            x[i, i] = 1.0
        ok[b] = _jacobi_one(w, x, tol, max_sweeps)
        d = np.empty(n)
        for i in range(n):
            d[i] = w[i, i].real
        order = np.argsort(d, kind="mergesort")
        for i in range(n):
            evals[b, i] = d[order[i]]
            for k in range(n):
                evecs[b, k, i] = x[k, order[i]]
    return evals, evecs, ok


def eigh_batch(a, tol=1e-13, max_sweeps=100):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if a.ndim != 3:
        raise ValueError("expected a stack of square matrices")
    evals, evecs, ok = _eigh_batch(a, float(tol), int(max_sweeps))
    if not ok.all():
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return evals, evecs


@numba.njit(nogil=True, cache=True)
def _quad_forms(psi, ops):
    ns, n = psi.shape
    m = ops.shape[0]
    out = np.empty((ns, m))
    for s in range(ns):
        for j in range(m):
            acc = 0.0
            for i in range(n):
                y = 0.0j
                for k in range(n):
                    y += ops[j, i, k] * psi[s, k]
                acc += (psi[s, i].conjugate() * y).real
            out[s, j] = acc
    return out


def quad_forms(psi, ops):
    return _quad_forms(
        np.ascontiguousarray(psi, dtype=np.complex128),
        np.ascontiguousarray(ops, dtype=np.complex128),
    )


@numba.njit(nogil=True, cache=True)
def _box_muller(u0, u1):
    out = np.empty(u0.shape[0], dtype=np.complex128)
    for i in range(u0.shape[0]):
        r = math.sqrt(-2.0 * math.log1p(-u0[i]))
        ang = 2.0 * math.pi * u1[i]
        out[i] = complex(r * math.cos(ang), r * math.sin(ang))
    return out


def box_muller(u):
    u = np.asarray(u, dtype=np.float64)
    shape = u.shape[:-1]
    flat = u.reshape(-1, 2)
    out = _box_muller(np.ascontiguousarray(flat[:, 0]), np.ascontiguousarray(flat[:, 1]))
    return out.reshape(shape)
