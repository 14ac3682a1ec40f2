"""Joint numerical shadows as Monte-Carlo sample clouds.

A shadow is the law of (<psi|A_1|psi>, ..., <psi|A_m|psi>) for Haar psi. We
keep the raw samples; the density is singular on lower-dimensional images
(the Pauli shadow lives on a sphere), so histograms are only a view.

Note on sums of tuples: the shadow of (aA_j + bB_j)_j is generally *not* the
convolution of the scaled shadows of A and B, because both coordinates are
driven by the same psi. (Take B = A, a = b = 1: the left side is the law of
2x, the right side that of x + x' with x, x' independent.) ``convolve`` is
provided as a measure utility only.
"""
from __future__ import annotations

import io
import itertools
import json
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats

from . import kernels
from .errors import DimensionError
from .jnr import jnr_support_many, random_directions
from .linalg import HermitianTuple, _square, partial_trace_second_many, tensor
from .rng import as_generator, default_workers
from .states import haar_states, pauli_basis

SIGNIFICANCE = 1e-3  # tests run at the 99.9% level


@dataclass(frozen=True)
class ShadowEstimate:
    samples: np.ndarray
    seed: int
    sample_count: int
    workers: int = 1

    @property
    def dimension_m(self) -> int:
        return self.samples.shape[1]

    def mean(self) -> np.ndarray:
        return self.samples.mean(axis=0)

    def to_csv(self) -> str:
        from .jnr import points_to_csv
        return points_to_csv(self.samples)


def estimate_shadow(tuple_: HermitianTuple, count: int, seed: int = 42, workers: int | None = None) -> ShadowEstimate:
    if count < 1:
        raise ValueError("count must be >= 1")
    workers = default_workers() if workers is None else workers
    rng = as_generator(seed)
    states = haar_states(tuple_.dim, count, rng, workers)
    return ShadowEstimate(kernels.quad_forms(states, tuple_.operators), rng.seed, count, workers)


def support_violation(tuple_: HermitianTuple, est: ShadowEstimate, directions: int = 64, seed: int = 0) -> float:
    """Largest <u, x> - h(u) over samples and random directions."""
    u = random_directions(tuple_.m, directions, seed)
    h = jnr_support_many(tuple_, u)
    return float(np.max(est.samples @ u.T - h[None, :]))


# -- moments ------------------------------------------------------------------

@dataclass(frozen=True)
class MomentTable:
    entries: dict

    def __getitem__(self, idx):
        return self.entries[tuple(idx)]

    def estimate(self, idx) -> float:
        return self.entries[tuple(idx)][0]

    def std_error(self, idx) -> float:
        return self.entries[tuple(idx)][1]

    def to_csv(self) -> str:
        keys = list(self.entries)
        m = len(keys[0])
        buf = io.StringIO()
        buf.write(",".join(f"k{j + 1}" for j in range(m)) + ",estimate,std_error\n")
        for k in keys:
            est, se = self.entries[k]
            buf.write(",".join(str(v) for v in k) + f",{est:.17g},{se:.17g}\n")
        return buf.getvalue()


def multi_indices(m: int, max_total_degree: int):
    """All k in N^m with |k| <= max_total_degree, by total degree then lexicographic."""
    for total in range(max_total_degree + 1):
        for k in sorted(itertools.product(range(total + 1), repeat=m), reverse=True):
            if sum(k) == total:
                yield k


def moments(est: ShadowEstimate, max_total_degree: int) -> MomentTable:
    if max_total_degree < 0:
        raise ValueError("max_total_degree must be >= 0")
    x = est.samples
    n = x.shape[0]
    entries = {}
    for k in multi_indices(x.shape[1], max_total_degree):
        if sum(k) == 0:
            entries[k] = (1.0, 0.0)
            continue
        vals = np.prod(x ** np.asarray(k), axis=1)
        se = float(vals.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        entries[k] = (float(vals.mean()), se)
    return MomentTable(entries)


# -- histograms ---------------------------------------------------------------

@dataclass(frozen=True)
class Histogram:
    bounds: list
    bins_per_axis: int
    counts: np.ndarray
    total: int

    def normalized(self) -> np.ndarray:
        return self.counts / self.total

    def to_json(self) -> dict:
        return {"bounds": self.bounds, "bins": self.bins_per_axis, "counts": self.counts.tolist()}


def histogram(est: ShadowEstimate, bins_per_axis: int, bounds=None) -> Histogram:
    """Dense rectangular histogram (m <= 3). Samples outside ``bounds`` are dropped."""
    if bins_per_axis < 1:
        raise ValueError("bins_per_axis must be >= 1")
    m = est.dimension_m
    if m > 3:
        raise DimensionError(f"dense histograms support m <= 3, got m = {m}")
    x = est.samples
    if bounds is None:
        lo, hi = x.min(axis=0) - 1e-9, x.max(axis=0) + 1e-9
        bounds = [(float(a), float(b)) for a, b in zip(lo, hi)]
    counts, _ = np.histogramdd(x, bins=bins_per_axis, range=bounds)
    counts = counts.astype(np.int64)
    return Histogram([tuple(b) for b in bounds], bins_per_axis, counts, int(counts.sum()))


# -- push-forward utilities ---------------------------------------------------

def scale_pushforward(est: ShadowEstimate, a: float) -> ShadowEstimate:
    """Push-forward under v -> a v."""
    return replace(est, samples=est.samples * a)


def convolve(e1: ShadowEstimate, e2: ShadowEstimate, rng=None) -> ShadowEstimate:
    """Empirical convolution: sums of independently resampled pairs."""
    if e1.dimension_m != e2.dimension_m:
        raise DimensionError("shadows live in different dimensions")
    rng = as_generator(rng)
    n = min(e1.sample_count, e2.sample_count)
    i = rng.integers(e1.sample_count, n)
    j = rng.integers(e2.sample_count, n)
    return ShadowEstimate(e1.samples[i] + e2.samples[j], rng.seed, n, e1.workers)


# -- statistical checks -------------------------------------------------------

def octant_chisquare(points) -> dict:
    """Equal-expected-count chi-square over the 8 sign octants of R^3."""
    pts = np.asarray(points)
    codes = (pts[:, 0] > 0) * 4 + (pts[:, 1] > 0) * 2 + (pts[:, 2] > 0) * 1
    obs = np.bincount(codes.astype(int), minlength=8)
    res = stats.chisquare(obs)
    critical = float(stats.chi2.ppf(1 - SIGNIFICANCE, df=7))
    return {
        "counts": obs.tolist(),
        "statistic": float(res.statistic),
        "critical_value": critical,
        "p_value": float(res.pvalue),
        "passed": bool(res.statistic < critical),
    }


def radial_ks(points, power: int = 3) -> dict:
    """KS test of |x| against the uniform-ball radial law F(r) = r^power."""
    r = np.linalg.norm(np.asarray(points), axis=1)
    res = stats.kstest(r, lambda t: np.clip(t, 0, 1) ** power)
    critical = float(stats.kstwo.ppf(1 - SIGNIFICANCE, len(r)))
    return {
        "statistic": float(res.statistic),
        "critical_value": critical,
        "p_value": float(res.pvalue),
        "passed": bool(res.statistic < critical),
    }


def _moments_agree(t1: MomentTable, t2: MomentTable, nsig: float = 5.0):
    worst = 0.0
    for k, (a, sa) in t1.entries.items():
        b, sb = t2.entries[k]
        comb = np.hypot(sa, sb)
        if comb == 0:
            z = 0.0 if abs(a - b) <= 1e-12 else np.inf
        else:
            z = abs(a - b) / comb
        worst = max(worst, z)
    return worst <= nsig, worst


@dataclass
class InvarianceReport:
    degree: int
    count: int
    worst_z: float
    passed: bool

    def to_json(self) -> dict:
        return {"degree": self.degree, "count": self.count, "worst_z": self.worst_z, "passed": self.passed}


def unitary_invariance_check(tuple_: HermitianTuple, u, count: int = 100_000, degree: int = 2,
                             seeds=(1, 2)) -> InvarianceReport:
    """Compare moment tables of (A_j) and (U A_j U*) from independent seeds."""
    u = _square(u)
    if u.shape[0] != tuple_.dim:
        raise DimensionError("unitary and operators act on different dimensions")
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > 1e-10:
        raise ValueError("u is not unitary")
    rotated = tuple_.map(lambda a: u @ a @ u.conj().T)
    rotated = HermitianTuple([(b + b.conj().T) / 2 for b in rotated.operators])
    t1 = moments(estimate_shadow(tuple_, count, seeds[0]), degree)
    t2 = moments(estimate_shadow(rotated, count, seeds[1]), degree)
    ok, worst = _moments_agree(t1, t2)
    return InvarianceReport(degree, count, float(worst), ok)


def pauli_extended(swapped: bool = False) -> HermitianTuple:
    """(s_j (x) I) on C^2 (x) C^2, or (I (x) s_j) when ``swapped``."""
    eye = np.eye(2)
    ops = [tensor(eye, s) if swapped else tensor(s, eye) for s in pauli_basis()]
    return HermitianTuple(ops)


@dataclass
class BallShadowReport:
    count: int
    seed: int
    swapped: bool
    max_norm: float
    ks: dict
    second_moments: list
    second_moment_z: list
    route_mismatch: float

    @property
    def passed(self) -> bool:
        return (
            self.max_norm <= 1 + 1e-10
            and self.ks["passed"]
            and max(self.second_moment_z) <= 5.0
            and self.route_mismatch <= 1e-12
        )

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "seed": self.seed,
            "swapped": self.swapped,
            "max_norm": self.max_norm,
            "ks": self.ks,
            "second_moments": self.second_moments,
            "second_moment_z": self.second_moment_z,
            "route_mismatch": self.route_mismatch,
            "passed": self.passed,
        }


def reduced_bloch_points(states: np.ndarray, swapped: bool = False) -> np.ndarray:
    """Bloch vectors (expectation convention) of the reduced qubit states.

    Independent of the quadratic-form kernel: forms |psi><psi|, traces out a
    factor, and reads off tr(omega s_j). With ``swapped`` the first factor is
    traced out instead, by swapping the factors of psi first.
    """
    psi = states
    if swapped:
        psi = psi.reshape(-1, 2, 2).transpose(0, 2, 1).reshape(-1, 4)
    rho = psi[:, :, None] * psi.conj()[:, None, :]
    omega = partial_trace_second_many(rho, 2, 2)
    paulis = pauli_basis().operators
    return np.einsum("sij,aji->sa", omega, paulis).real


def ball_shadow_check(count: int = 100_000, seed: int = 42, swapped: bool = False) -> BallShadowReport:
    tuple_ = pauli_extended(swapped)
    rng = as_generator(seed)
    states = haar_states(4, count, rng)
    pts = kernels.quad_forms(states, tuple_.operators)
    other = reduced_bloch_points(states, swapped)
    est = ShadowEstimate(pts, rng.seed, count)
    tab = moments(est, 2)
    sec, zs = [], []
    for j in range(3):
        k = tuple(2 if i == j else 0 for i in range(3))
        val, se = tab[k]
        sec.append(val)
        zs.append(abs(val - 0.2) / se)
    return BallShadowReport(
        count=count,
        seed=seed,
        swapped=swapped,
        max_norm=float(np.max(np.linalg.norm(pts, axis=1))),
        ks=radial_ks(pts),
        second_moments=sec,
        second_moment_z=zs,
        route_mismatch=float(np.max(np.abs(pts - other))),
    )


def histogram_json(h: Histogram) -> str:
    return json.dumps(h.to_json())
