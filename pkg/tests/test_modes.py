import numpy as np
import pytest

from conftest import random_physical_state
from lossypdc.errors import InvalidInputError, PartitionDegeneracyError
from lossypdc.gaussian import (
    CovarianceMatrix,
    FrequencyGrid,
    cov_from_correlations,
    omega_matrix,
    smallest_cov_eigenvalue,
    state_from_blocks,
    vacuum_state,
)
from lossypdc.modes import (
    WilliamsonEulerResult,
    _modes_from_quadrature_vector,
    mercer_wolf_modes,
    msq_modes,
    unpack_quadrature_vector,
    williamson_euler,
    williamson_euler_modes,
)
from lossypdc.tmbs import build_tmbs, tmbs_eigenvalues


def grid_of(n):
    return FrequencyGrid(omegas=np.linspace(1.0e15, 1.1e15, n))


def tmsv_blocks(n_photons, phase=0.0):
    r = np.arcsinh(np.sqrt(n_photons))
    aa = np.array([[np.sinh(r) ** 2]])
    ab = np.array([[0.5 * np.sinh(2 * r) * np.exp(1j * phase)]])
    return aa, aa.copy(), ab


def analytic_top_eigenvector(h):
    """Closed-form dominant eigenvector of a 2x2 Hermitian matrix."""
    a, b, c = h[0, 0].real, h[0, 1], h[1, 1].real
    lam = 0.5 * (a + c + np.sqrt((a - c) ** 2 + 4 * abs(b) ** 2))
    if abs(b) == 0:
        v = np.array([1.0, 0.0]) if a >= c else np.array([0.0, 1.0])
    else:
        v = np.array([b, lam - a])
        v = v / np.linalg.norm(v)
    return lam, v


def overlap(u, v):
    return abs(np.vdot(u, v))


class TestMercerWolf:
    def test_already_diagonal(self):
        st = state_from_blocks(
            grid_of(2), np.diag([3.0, 1.0]), np.diag([2.0, 1.0]), np.diag([0.5, 0.2])
        )
        pair = mercer_wolf_modes(st)
        assert pair.label == "MW"
        assert overlap(pair.u_a.amplitudes, [1, 0]) == pytest.approx(1.0, abs=1e-12)
        assert overlap(pair.u_b.amplitudes, [1, 0]) == pytest.approx(1.0, abs=1e-12)
        # phases untouched for a real-positive <ab>
        assert pair.u_a.amplitudes[0] == pytest.approx(1.0)

    def test_matches_analytic_two_by_two(self, rng):
        st = random_physical_state(rng, 2, loss=False)
        pair = mercer_wolf_modes(st)
        _, v = analytic_top_eigenvector(st.aa)
        assert overlap(pair.u_a.amplitudes, v) == pytest.approx(1.0, abs=1e-10)
        _, v = analytic_top_eigenvector(st.bb)
        assert overlap(pair.u_b.amplitudes, v) == pytest.approx(1.0, abs=1e-10)

    def test_anomalous_correlator_real_nonneg(self, rng):
        for _ in range(5):
            st = random_physical_state(rng, 6)
            pair = mercer_wolf_modes(st)
            c = pair.u_a.amplitudes @ st.ab @ pair.u_b.amplitudes
            assert abs(c.imag) < 1e-10 * (1 + abs(c))
            assert c.real >= -1e-12

    def test_maximal_photon_number(self, rng):
        st = random_physical_state(rng, 8)
        pair = mercer_wolf_modes(st)
        n_mw = np.real(pair.u_a.amplitudes.conj() @ st.aa @ pair.u_a.amplitudes)
        for _ in range(200):
            w = rng.standard_normal(8) + 1j * rng.standard_normal(8)
            w /= np.linalg.norm(w)
            assert np.real(w.conj() @ st.aa @ w) <= n_mw + 1e-9

    def test_degenerate_spectrum_warns(self):
        st = state_from_blocks(grid_of(2), 0.5 * np.eye(2), 0.5 * np.eye(2), 0.4 * np.eye(2))
        with pytest.warns(UserWarning, match="degenerate"):
            mercer_wolf_modes(st)


class TestUnpacking:
    def test_round_trip_layout(self):
        # q components sit at even slots, p at odd; v = y + i x
        vec = np.zeros(8)
        vec[0] = 1.0  # q of signal mode 0
        v_a, v_b = unpack_quadrature_vector(vec, 2)
        assert v_a[0] == 1j
        vec = np.zeros(8)
        vec[5] = 1.0  # p of idler mode 0
        v_a, v_b = unpack_quadrature_vector(vec, 2)
        assert v_b[0] == 1.0

    def test_partition_degeneracy_detected(self):
        st = random_physical_state(np.random.default_rng(0), 2)
        vec = np.zeros(8)
        vec[0] = 1.0  # signal only
        with pytest.raises(PartitionDegeneracyError):
            _modes_from_quadrature_vector(st, vec, "custom")


class TestWilliamsonEuler:
    def test_identity(self):
        res = williamson_euler(CovarianceMatrix(sigma=np.eye(8)))
        assert np.abs(res.dw - 1).max() < 1e-10
        assert np.abs(res.lam - 1).max() < 1e-10
        assert np.abs(res.reconstruct() - np.eye(8)).max() < 1e-10

    def test_uniform_thermal(self):
        res = williamson_euler(CovarianceMatrix(sigma=2.0 * np.eye(4)))
        assert np.abs(res.dw - 2).max() < 1e-10
        assert np.abs(res.lam - 1).max() < 1e-10

    def test_pure_tmsv_unit_temperature(self):
        n_ph = np.sinh(1.0) ** 2
        st = state_from_blocks(grid_of(1), *tmsv_blocks(n_ph))
        res = williamson_euler(cov_from_correlations(st))
        assert np.abs(res.dw - 1).max() < 1e-8
        assert res.r[0] == pytest.approx(1.0, abs=1e-8)

    def test_random_states_reconstruct(self, rng):
        for n in (2, 5):
            st = random_physical_state(rng, n)
            cov = cov_from_correlations(st)
            res = williamson_euler(cov)
            assert np.abs(res.reconstruct() - cov.sigma).max() < 1e-6 * np.abs(cov.sigma).max()
            omega = omega_matrix(2 * n)
            for o in (res.o_l, res.o_r):
                assert np.abs(o.T @ o - np.eye(4 * n)).max() < 1e-8
                assert np.abs(o.T @ omega @ o - omega).max() < 1e-8

    def test_lambda_reciprocal_pairs_and_sorted(self, rng):
        st = random_physical_state(rng, 4)
        res = williamson_euler(cov_from_correlations(st))
        assert np.array_equal(res.lam[1::2], 1.0 / res.lam[0::2])
        assert np.all(np.diff(res.r) <= 1e-12)

    def test_rejects_unphysical(self):
        with pytest.raises(InvalidInputError):
            williamson_euler(CovarianceMatrix(sigma=0.5 * np.eye(4)))

    def test_solver_state_reconstruction(self, small_lossy_state):
        cov = cov_from_correlations(small_lossy_state)
        res = williamson_euler(cov)
        assert np.abs(res.reconstruct() - cov.sigma).max() < 1e-6 * np.abs(cov.sigma).max()


class TestWilliamsonEulerModes:
    def test_single_pair_support(self):
        # TMSV sitting at frequency slot 1 of a 3-point grid
        n_ph = 2.0
        aa = np.zeros((3, 3)); ab = np.zeros((3, 3), complex)
        r = np.arcsinh(np.sqrt(n_ph))
        aa[1, 1] = np.sinh(r) ** 2
        ab[1, 1] = 0.5 * np.sinh(2 * r)
        st = state_from_blocks(grid_of(3), aa, aa.copy(), ab)
        pair = williamson_euler_modes(st)
        assert abs(pair.u_a.amplitudes[1]) == pytest.approx(1.0, abs=1e-8)
        assert abs(pair.u_b.amplitudes[1]) == pytest.approx(1.0, abs=1e-8)

    def test_lossless_coincides_with_mw(self, small_lossless_state):
        mw = mercer_wolf_modes(small_lossless_state)
        we = williamson_euler_modes(small_lossless_state)
        assert overlap(we.u_a.amplitudes, mw.u_a.amplitudes) >= 1 - 1e-6
        assert overlap(we.u_b.amplitudes, mw.u_b.amplitudes) >= 1 - 1e-6


class TestMsqModes:
    def test_vacuum_flagged_unsqueezed(self):
        st = vacuum_state(grid_of(3))
        with pytest.warns(UserWarning, match="no squeezing"):
            pair = msq_modes(st)
        assert pair.label == "MSq"
        assert np.linalg.norm(pair.u_a.amplitudes) == pytest.approx(1.0)

    def test_lossless_coincides_with_mw(self, small_lossless_state):
        mw = mercer_wolf_modes(small_lossless_state)
        msq = msq_modes(small_lossless_state)
        assert overlap(msq.u_a.amplitudes, mw.u_a.amplitudes) >= 1 - 1e-6
        assert overlap(msq.u_b.amplitudes, mw.u_b.amplitudes) >= 1 - 1e-6

    def test_defining_property_on_solver_state(self, small_lossy_state):
        cov = cov_from_correlations(small_lossy_state)
        lam_min, _ = smallest_cov_eigenvalue(cov)
        pair = msq_modes(small_lossy_state)
        t = build_tmbs(small_lossy_state, pair)
        lam_tmbs, _ = tmbs_eigenvalues(t)
        assert abs(lam_tmbs - lam_min) < 1e-8 * max(1.0, lam_min)

    def test_defining_property_on_random_states(self, rng):
        for _ in range(5):
            st = random_physical_state(rng, 5)
            cov = cov_from_correlations(st)
            lam_min, _ = smallest_cov_eigenvalue(cov)
            if lam_min >= 1 - 1e-9:
                continue
            pair = msq_modes(st)
            lam_tmbs, _ = tmbs_eigenvalues(build_tmbs(st, pair))
            assert abs(lam_tmbs - lam_min) < 1e-8

    def test_optimality_against_random_pairs(self, rng, small_lossy_state):
        pair = msq_modes(small_lossy_state)
        lam_msq, _ = tmbs_eigenvalues(build_tmbs(small_lossy_state, pair))
        n = small_lossy_state.n
        for _ in range(500):
            u_a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            u_b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            u_a /= np.linalg.norm(u_a)
            u_b /= np.linalg.norm(u_b)
            from lossypdc.tmbs import _lambda_minus

            assert _lambda_minus(small_lossy_state, u_a, u_b) >= lam_msq - 1e-9
