import numpy as np
import pytest
from dataclasses import replace
from scipy.linalg import expm

from lossypdc.errors import (
    CalibrationError,
    ConvergenceError,
    InvalidInputError,
    NumericalBlowupError,
)
from lossypdc.gaussian import FrequencyGrid, cov_from_correlations, symplectic_spectrum
from lossypdc.solver import (
    SolverConfig,
    calibrate_gain,
    coupling_matrix,
    default_grid,
    dominant_photon_number,
    gvm_span_factor,
    integrate,
    jsi,
)
from lossypdc.waveguide import LossSpec, with_losses


def degenerate_config(spec0, gamma, steps=2000):
    """Single frequency pair at the phase-matched degenerate point."""
    grid = FrequencyGrid(omegas=np.array([spec0.omega0["signal"]]))
    return SolverConfig(grid=grid, gamma=gamma, steps=steps)


def exact_single_pair(gamma, length, eta_s, eta_i):
    """Matrix-exponential oracle for the constant-coupling single-pair
    system: evolves (Daa, Dbb, Cab, Cab*, 1) with the z-independent
    generator of the degenerate phase-matched equations."""
    g = 1j * gamma
    eta_bar = 0.5 * (eta_s + eta_i)
    a = np.array(
        [
            [-eta_s, 0, -g, g, 0],
            [0, -eta_i, -g, g, 0],
            [g, g, -eta_bar, 0, g],
            [-g, -g, 0, -eta_bar, -g],
            [0, 0, 0, 0, 0],
        ],
        dtype=complex,
    )
    y = expm(a * length) @ np.array([0, 0, 0, 0, 1], dtype=complex)
    return y[0], y[1], y[2]


class TestMatrixExponentialOracle:
    @pytest.mark.parametrize("eta_db,r_eta", [(0.0, 0.0), (4.0, 0.0), (6.0, 1 / 3)])
    def test_single_pair_matches_expm(self, spec0, pump, eta_db, r_eta):
        spec = with_losses(spec0, LossSpec(eta_bar_db=eta_db, r_eta=r_eta))
        gamma = 140.0
        cfg = degenerate_config(spec, gamma)
        st = integrate(cfg, spec, pump)
        da, db, cab = exact_single_pair(gamma, spec.length, spec.eta_s, spec.eta_i)
        assert st.aa[0, 0] == pytest.approx(da, rel=1e-8)
        assert st.bb[0, 0] == pytest.approx(db, rel=1e-8)
        assert st.ab[0, 0] == pytest.approx(cab, rel=1e-8)

    def test_lossless_single_pair_is_tmsv(self, spec0, pump):
        gamma = 120.0
        st = integrate(degenerate_config(spec0, gamma), spec0, pump)
        r = gamma * spec0.length
        assert st.aa[0, 0].real == pytest.approx(np.sinh(r) ** 2, rel=1e-8)
        assert abs(st.ab[0, 0]) == pytest.approx(0.5 * np.sinh(2 * r), rel=1e-8)


class TestIntegrate:
    def test_zero_gain_stays_vacuum(self, small_config, spec0, pump):
        st = integrate(replace(small_config, gamma=0.0), spec0, pump)
        assert np.all(st.d == 0) and np.all(st.c == 0)

    def test_type_ii_blocks_stay_zero(self, small_lossy_state):
        n = small_lossy_state.n
        assert np.abs(small_lossy_state.d[:n, n:]).max() == 0.0
        assert np.abs(small_lossy_state.c[:n, :n]).max() == 0.0

    def test_lossless_output_is_pure(self, small_lossless_state):
        nus = symplectic_spectrum(cov_from_correlations(small_lossless_state))
        assert np.abs(nus - 1).max() < 1e-5

    def test_lossy_output_is_physical(self, small_lossy_state):
        nus = symplectic_spectrum(cov_from_correlations(small_lossy_state))
        assert nus.min() >= 1 - 1e-6

    def test_signal_idler_symmetric_when_lossless(self, small_lossless_state):
        assert small_lossless_state.photons_signal == pytest.approx(
            small_lossless_state.photons_idler, rel=1e-9
        )

    def test_convergence_gate_passes(self, small_config, spec0, pump):
        integrate(small_config, spec0, pump, check_convergence=True)

    def test_convergence_gate_rejects_unresolved_phase(self, spec0, pump, small_grid):
        # a strongly detuned poling makes the coupling phase spin far too
        # fast for 100 steps
        spec = replace(spec0, k_qpm=spec0.k_qpm + 3e6)
        cfg = SolverConfig(grid=small_grid, gamma=600.0, steps=100)
        with pytest.raises(ConvergenceError):
            integrate(cfg, spec, pump, check_convergence=True)

    def test_blowup_detected(self, small_grid, spec0, pump):
        cfg = SolverConfig(grid=small_grid, gamma=1e7, steps=100)
        with np.errstate(over="ignore", invalid="ignore"), pytest.raises(NumericalBlowupError):
            integrate(cfg, spec0, pump)

    def test_loss_reduces_photons(self, small_config, spec0, pump):
        photons = []
        for eta in [0.0, 2.0, 6.0]:
            spec = with_losses(spec0, LossSpec(eta_bar_db=eta, r_eta=0.0))
            st = integrate(small_config, spec, pump)
            photons.append(st.photons_signal + st.photons_idler)
        assert photons[0] > photons[1] > photons[2]

    def test_step_doubling_changes_little(self, small_config, spec0, pump):
        st1 = integrate(small_config, spec0, pump)
        st2 = integrate(replace(small_config, steps=2 * small_config.steps), spec0, pump)
        rel = abs(st2.photons_signal - st1.photons_signal) / st2.photons_signal
        assert rel < 1e-4

    def test_steps_below_minimum_rejected(self, small_grid):
        with pytest.raises(InvalidInputError):
            SolverConfig(grid=small_grid, gamma=1.0, steps=50)


class TestCouplingMatrix:
    def test_peak_pump_at_degenerate_point(self, spec0, pump):
        cfg = degenerate_config(spec0, 1.0)
        m = coupling_matrix(0.0, cfg, spec0, pump)
        assert m[0, 1] == pytest.approx(1.0)
        assert m[0, 0] == 0.0

    def test_symmetric_exactly(self, spec0, pump, small_grid):
        cfg = SolverConfig(grid=small_grid, gamma=1.0, steps=100)
        for z in [0.0, 0.0023, 0.01]:
            m = coupling_matrix(z, cfg, spec0, pump)
            assert np.abs(m - m.T).max() == 0.0

    def test_magnitude_independent_of_z(self, spec0, pump, small_grid):
        cfg = SolverConfig(grid=small_grid, gamma=1.0, steps=100)
        m0 = np.abs(coupling_matrix(0.0, cfg, spec0, pump))
        rng = np.random.default_rng(7)
        for z in rng.uniform(0, spec0.length, 10):
            m = np.abs(coupling_matrix(float(z), cfg, spec0, pump))
            assert np.abs(m - m0).max() < 1e-12

    def test_z_outside_waveguide_rejected(self, spec0, pump, small_grid):
        cfg = SolverConfig(grid=small_grid, gamma=1.0, steps=100)
        with pytest.raises(InvalidInputError):
            coupling_matrix(-0.001, cfg, spec0, pump)


class TestJsi:
    def test_vacuum_rejected(self, small_grid, spec0, pump):
        st = integrate(SolverConfig(grid=small_grid, gamma=0.0, steps=100), spec0, pump)
        with pytest.raises(InvalidInputError):
            jsi(st)

    def test_normalization_and_antidiagonal_peak(self, spec0, pump):
        grid = default_grid(spec0, pump, n=41)
        cfg = SolverConfig(grid=grid, gamma=2.0, steps=400)
        st = integrate(cfg, spec0, pump)
        assert st.photons_signal < 1e-2
        j = jsi(st)
        assert j.max() == 1.0
        assert j.min() >= 0.0
        i_s, i_i = np.unravel_index(np.argmax(j), j.shape)
        w0 = spec0.omega0["signal"]
        ds = grid.omegas[i_s] - w0
        di = grid.omegas[i_i] - w0
        assert abs(ds + di) <= 2 * grid.delta


class TestDefaultGrid:
    def test_centered_and_wide_enough(self, spec0, pump):
        grid = default_grid(spec0, pump, n=51)
        w0 = spec0.omega0["signal"]
        assert grid.omegas[25] == pytest.approx(w0, rel=1e-12)
        half = grid.omegas[-1] - w0
        assert half >= 6.0 * pump.sigma_omega

    def test_gvm_factor_clipped(self, spec0):
        assert 1.0 <= gvm_span_factor(spec0) <= 8.0
        assert gvm_span_factor(spec0) == pytest.approx(1.96, abs=0.01)


class TestCalibrateGain:
    def test_hits_target(self, spec0, pump, small_grid):
        cfg = SolverConfig(grid=small_grid, gamma=0.0, steps=300)
        target = 5.0
        gamma = calibrate_gain(target, spec0, pump, cfg)
        st = integrate(replace(cfg, gamma=gamma), spec0, pump)
        assert abs(dominant_photon_number(st) - target) <= 1e-3 * target

    def test_monotone_in_gain(self, spec0, pump, small_grid):
        cfg = SolverConfig(grid=small_grid, gamma=0.0, steps=300)
        for gamma in [40.0, 90.0, 200.0]:
            n1 = dominant_photon_number(integrate(replace(cfg, gamma=gamma), spec0, pump))
            n2 = dominant_photon_number(integrate(replace(cfg, gamma=2 * gamma), spec0, pump))
            assert n2 > n1

    def test_rejects_lossy_spec(self, spec0, pump, small_grid):
        spec = with_losses(spec0, LossSpec(eta_bar_db=1.0))
        cfg = SolverConfig(grid=small_grid, gamma=0.0, steps=300)
        with pytest.raises(InvalidInputError):
            calibrate_gain(5.0, spec, pump, cfg)

    def test_unreachable_target_raises(self, spec0, pump, small_grid):
        cfg = SolverConfig(grid=small_grid, gamma=0.0, steps=300)
        with pytest.raises((CalibrationError, InvalidInputError)):
            calibrate_gain(-1.0, spec0, pump, cfg)
