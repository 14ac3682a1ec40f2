import numpy as np
import pytest

from jnrange.channels import SWAP
from jnrange.errors import DimensionError
from jnrange.linalg import HermitianTuple
from jnrange.shadow import (
    ShadowEstimate,
    ball_shadow_check,
    convolve,
    estimate_shadow,
    histogram,
    moments,
    multi_indices,
    octant_chisquare,
    pauli_extended,
    radial_ks,
    reduced_bloch_points,
    scale_pushforward,
    support_violation,
    unitary_invariance_check,
)
from jnrange.states import haar_states

from .conftest import A1, S3, random_hermitian

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def point_mass(x, n=100):
    return ShadowEstimate(np.tile(np.asarray(x, float), (n, 1)), 0, n)


@pytest.fixture(scope="module")
def pauli_shadow():
    from jnrange.states import pauli_basis
    return estimate_shadow(pauli_basis(), 10_000, seed=7)


class TestEstimate:
    def test_sphere(self, pauli_shadow):
        assert np.max(np.abs(np.linalg.norm(pauli_shadow.samples, axis=1) - 1)) <= 1e-12
        assert octant_chisquare(pauli_shadow.samples)["passed"]

    def test_numerical_shadow_special_case(self, rng):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        est = estimate_shadow(HermitianTuple.from_complex(a), 500, seed=3)
        states = haar_states(3, 500, 3)
        z = np.einsum("si,ij,sj->s", states.conj(), a, states)
        assert np.allclose(est.samples[:, 0] + 1j * est.samples[:, 1], z, atol=1e-12)

    def test_traceless_mean(self):
        n = 100_000
        est = estimate_shadow(HermitianTuple([np.kron(S3, np.eye(2))]), n, seed=5)
        se = est.samples.std(ddof=1) / np.sqrt(n)
        assert abs(est.mean()[0]) <= 4 * se

    def test_deterministic_and_worker_independent(self, paulis):
        a = estimate_shadow(paulis, 9000, seed=1, workers=1)
        b = estimate_shadow(paulis, 9000, seed=1, workers=4)
        assert np.array_equal(a.samples, b.samples)
        assert a.sample_count == 9000 and b.workers == 4

    def test_support_containment(self, rng):
        t = HermitianTuple([random_hermitian(rng, 3) for _ in range(3)])
        est = estimate_shadow(t, 2000, seed=2)
        assert support_violation(t, est, 64) <= 1e-9


class TestMoments:
    def test_indices(self):
        idx = list(multi_indices(2, 2))
        assert idx == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]

    def test_zero_moment(self, pauli_shadow):
        assert moments(pauli_shadow, 3)[(0, 0, 0)] == (1.0, 0.0)

    def test_std_error_definition(self, pauli_shadow):
        tab = moments(pauli_shadow, 2)
        x = pauli_shadow.samples[:, 0] ** 2
        assert tab.std_error((2, 0, 0)) == pytest.approx(x.std(ddof=1) / np.sqrt(len(x)), rel=1e-12)

    def test_first_moment(self, rng):
        n = 100_000
        t = HermitianTuple([random_hermitian(rng, 3), random_hermitian(rng, 3)])
        est, se = moments(estimate_shadow(t, n, seed=4), 1)[(1, 0)]
        assert abs(est - np.trace(t[0]).real / 3) <= 5 * se

    def test_sphere_moments(self, pauli_shadow):
        tab = moments(pauli_shadow, 3)
        for j in range(3):
            k = tuple(2 if i == j else 0 for i in range(3))
            est, se = tab[k]
            assert abs(est - 1 / 3) <= 5 * se
        for k, (est, se) in tab.entries.items():
            if sum(k) % 2 == 1:
                assert abs(est) <= 5 * se

    def test_ball_moment(self):
        est = estimate_shadow(pauli_extended(), 100_000, seed=8)
        val, se = moments(est, 2)[(2, 0, 0)]
        assert abs(val - 0.2) <= 5 * se

    def test_csv(self, pauli_shadow):
        lines = moments(pauli_shadow, 1).to_csv().splitlines()
        assert lines[0] == "k1,k2,k3,estimate,std_error"
        assert lines[1] == "0,0,0,1,0"
        assert len(lines) == 5

    def test_negative_degree(self, pauli_shadow):
        with pytest.raises(ValueError):
            moments(pauli_shadow, -1)


class TestHistogram:
    def test_point_mass(self):
        c1 = 0.7
        t = HermitianTuple([c1 * np.eye(2), -2 * np.eye(2)])
        # odd bin count: the point sits in the middle of a bin, not on an edge
        h = histogram(estimate_shadow(t, 500, seed=1), 9)
        assert np.count_nonzero(h.counts) == 1 and h.total == 500
        assert h.normalized().sum() == pytest.approx(1, abs=1e-12)

    def test_pauli_marginal_symmetric(self, pauli_shadow):
        h = histogram(ShadowEstimate(pauli_shadow.samples[:, 2:], 0, 10_000), 2, bounds=[(-1, 1)])
        n = h.counts
        # two equal halves: binomial(10^4, 1/2), 4 sigma = 200
        assert abs(int(n[0]) - int(n[1])) <= 200 and n.sum() == 10_000

    def test_disc_support(self):
        est = estimate_shadow(HermitianTuple.from_complex(A1), 5000, seed=3)
        h = histogram(est, 32, bounds=[(-0.5, 0.5), (-0.5, 0.5)])
        assert h.total == 5000
        assert np.max(np.linalg.norm(est.samples, axis=1)) <= 0.5 + 1e-12

    def test_too_many_axes(self, rng):
        t = HermitianTuple([random_hermitian(rng, 2) for _ in range(4)])
        with pytest.raises(DimensionError):
            histogram(estimate_shadow(t, 10, seed=1), 4)

    def test_json(self, pauli_shadow):
        obj = histogram(pauli_shadow, 3).to_json()
        assert set(obj) == {"bounds", "bins", "counts"} and np.sum(obj["counts"]) == 10_000


class TestPushforward:
    def test_scale_identity(self, pauli_shadow):
        assert np.array_equal(scale_pushforward(pauli_shadow, 1).samples, pauli_shadow.samples)

    def test_scale_zero(self, pauli_shadow):
        assert not np.any(scale_pushforward(pauli_shadow, 0).samples)

    def test_scale_two(self, pauli_shadow):
        norms = np.linalg.norm(scale_pushforward(pauli_shadow, 2).samples, axis=1)
        assert np.allclose(norms, 2, atol=1e-12)

    def test_moments_scale_exactly(self, pauli_shadow):
        # a = 2 is exact in binary floating point
        t0 = moments(pauli_shadow, 3)
        t2 = moments(scale_pushforward(pauli_shadow, 2.0), 3)
        for k, (est, se) in t0.entries.items():
            assert t2.estimate(k) == 2.0 ** sum(k) * est
        t3 = moments(scale_pushforward(pauli_shadow, -0.37), 3)
        for k, (est, _) in t0.entries.items():
            assert t3.estimate(k) == pytest.approx((-0.37) ** sum(k) * est, rel=1e-12, abs=1e-15)

    def test_convolve_with_delta(self, pauli_shadow):
        conv = convolve(pauli_shadow, point_mass([0, 0, 0], 10_000), 5)
        t1, t2 = moments(pauli_shadow, 2), moments(conv, 2)
        for k, (a, sa) in t1.entries.items():
            b, sb = t2[k]
            assert abs(a - b) <= 5 * np.hypot(sa, sb) + 1e-15

    def test_convolve_deltas(self):
        out = convolve(point_mass([1, 2]), point_mass([0.5, -1], 50), 1)
        assert out.sample_count == 50 and np.allclose(out.samples, [1.5, 1])

    def test_convolve_mean(self, pauli_shadow, rng):
        t = HermitianTuple([random_hermitian(rng, 2) + np.eye(2) * s for s in (1, -2, 0.5)])
        other = estimate_shadow(t, 10_000, seed=11)
        conv = convolve(pauli_shadow, other, 6)
        n = conv.sample_count
        se = conv.samples.std(axis=0, ddof=1) / np.sqrt(n)
        assert np.all(np.abs(conv.mean() - (pauli_shadow.mean() + other.mean())) <= 5 * se)

    def test_convolve_dimension(self, pauli_shadow):
        with pytest.raises(DimensionError):
            convolve(pauli_shadow, point_mass([0, 0]))

    def test_sum_of_tuples_is_not_convolution(self, paulis):
        # same psi drives both tuples: the law of x + x is that of 2x, not of x + x'
        n = 20_000
        same = estimate_shadow(paulis.map(lambda a: 2 * a), n, seed=1)
        conv = convolve(estimate_shadow(paulis, n, seed=2), estimate_shadow(paulis, n, seed=3), 4)
        assert np.allclose(np.linalg.norm(same.samples, axis=1), 2)
        assert np.linalg.norm(conv.samples, axis=1).mean() < 1.5


class TestInvariance:
    def test_identity(self, paulis):
        assert unitary_invariance_check(paulis, np.eye(2), 2000, 2, (1, 1)).passed

    def test_hadamard(self, paulis):
        assert unitary_invariance_check(paulis, HADAMARD, 100_000, 2, (1, 2)).passed

    def test_swap(self):
        rep = unitary_invariance_check(pauli_extended(), SWAP, 100_000, 2, (3, 4))
        assert rep.passed
        b = pauli_extended(swapped=True)
        for a_j, b_j in zip(pauli_extended(), b):
            assert np.array_equal(SWAP @ a_j @ SWAP.T, b_j)

    def test_detects_difference(self, paulis):
        # not a unitary conjugation: the shadows differ (sphere vs. scaled sphere)
        from jnrange import shadow
        t1 = moments(estimate_shadow(paulis, 20_000, 1), 2)
        t2 = moments(estimate_shadow(paulis.map(lambda a: 0.8 * a), 20_000, 2), 2)
        assert not shadow._moments_agree(t1, t2)[0]

    def test_rejects_non_unitary(self, paulis):
        with pytest.raises(ValueError):
            unitary_invariance_check(paulis, 2 * np.eye(2), 10)


class TestBall:
    def test_product_state_on_sphere(self):
        phi, chi = np.array([0.6, 0.8j]), np.array([1, 1]) / np.sqrt(2)
        x = reduced_bloch_points(np.kron(phi, chi)[None])
        assert abs(np.linalg.norm(x) - 1) < 1e-12

    def test_bell_state_at_center(self):
        psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
        assert np.allclose(reduced_bloch_points(psi[None]), 0, atol=1e-15)

    @pytest.mark.parametrize("swapped", [False, True])
    def test_check_passes(self, swapped):
        rep = ball_shadow_check(100_000, 42, swapped)
        assert rep.passed, rep.to_json()
        assert rep.route_mismatch <= 1e-12

    def test_ks_rejects_sphere(self, pauli_shadow):
        assert not radial_ks(pauli_shadow.samples)["passed"]
