import numpy as np
import pytest
from scipy.constants import c as C_LIGHT

from lossypdc.errors import InvalidInputError
from lossypdc.waveguide import (
    LossSpec,
    PumpSpec,
    loss_coefficients,
    pump_spectrum,
    qpm_wavevector,
    reference_waveguide,
    refractive_index,
    wavevector,
    with_losses,
)


class TestRefractiveIndex:
    def test_central_frequency_returns_n0(self, spec0):
        for field in ("pump", "signal", "idler"):
            w0 = spec0.omega0[field]
            assert refractive_index(field, w0, spec0) == pytest.approx(spec0.n0[field])

    def test_linear_form_at_one_percent_detuning(self, spec0):
        # n = 1.9 + 0.01 (c/vg_s - 1.9) for the signal field of the
        # reference waveguide
        w0 = spec0.omega0["signal"]
        expected = 1.9 + 0.01 * (C_LIGHT / spec0.vg["signal"] - 1.9)
        assert refractive_index("signal", 1.01 * w0, spec0) == pytest.approx(expected, rel=1e-12)

    def test_slope_matches_finite_difference(self, spec0):
        w0 = spec0.omega0["idler"]
        dw = w0 * 1e-7
        fd = (refractive_index("idler", w0 + dw, spec0) - refractive_index("idler", w0 - dw, spec0)) / (2 * dw)
        analytic = (C_LIGHT / spec0.vg["idler"] - spec0.n0["idler"]) / w0
        assert fd == pytest.approx(analytic, rel=1e-6)

    def test_unknown_field_rejected(self, spec0):
        with pytest.raises(InvalidInputError):
            refractive_index("herald", 1e15, spec0)


class TestWavevector:
    def test_central_value(self, spec0):
        w0 = spec0.omega0["pump"]
        assert wavevector("pump", w0, spec0) == pytest.approx(spec0.n0["pump"] * w0 / C_LIGHT)

    def test_qpm_closed_form(self, spec0, pump):
        # (omega_p / 2c)(2 n_p - n_s - n_i) = 0.05 omega_p / c for the
        # reference dispersion
        assert qpm_wavevector(spec0) == pytest.approx(0.05 * pump.omega_p / C_LIGHT, rel=1e-9)
        assert spec0.k_qpm == pytest.approx(0.05 * pump.omega_p / C_LIGHT, rel=1e-9)

    def test_phase_matched_at_degeneracy(self, spec0):
        w0 = spec0.omega0["signal"]
        mismatch = (
            wavevector("pump", 2 * w0, spec0)
            - wavevector("signal", w0, spec0)
            - wavevector("idler", w0, spec0)
            - spec0.k_qpm
        )
        assert abs(mismatch) < 1e-6 * wavevector("pump", 2 * w0, spec0)


class TestPumpSpectrum:
    def test_peak_is_one(self, pump):
        assert pump_spectrum(pump.omega_p, pump) == pytest.approx(1.0)

    def test_one_sigma_point(self, pump):
        s = pump_spectrum(pump.omega_p + pump.sigma_omega, pump)
        assert s == pytest.approx(np.exp(-0.5), rel=1e-12)
        s = pump_spectrum(pump.omega_p - pump.sigma_omega, pump)
        assert s == pytest.approx(np.exp(-0.5), rel=1e-12)

    def test_time_domain_intensity_fwhm(self, pump):
        # Fourier transform of the amplitude spectrum; the intensity FWHM
        # of the resulting pulse must reproduce the configured value
        dw = np.linspace(-12, 12, 4001) * pump.sigma_omega
        spec = pump_spectrum(pump.omega_p + dw, pump)
        t = np.linspace(-4, 4, 8001) * pump.fwhm
        field = np.trapezoid(spec[None, :] * np.exp(-1j * dw[None, :] * t[:, None]), dw, axis=1)
        intensity = np.abs(field) ** 2
        above = t[intensity >= 0.5 * intensity.max()]
        fwhm = above[-1] - above[0]
        assert fwhm == pytest.approx(pump.fwhm, rel=0.01)

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            PumpSpec(wavelength=755e-9, fwhm=-1.0)


class TestLossCoefficients:
    def test_lossless(self):
        assert loss_coefficients(LossSpec(eta_bar_db=0.0), 0.01) == (0.0, 0.0)

    def test_three_db_over_one_centimeter(self):
        # (ln 10 / 10) * 3 / 0.01
        eta_s, eta_i = loss_coefficients(LossSpec(eta_bar_db=3.0, r_eta=0.0), 0.01)
        assert eta_s == pytest.approx(69.0776, abs=1e-3)
        assert eta_i == eta_s

    def test_asymmetry_one_third_doubles_signal_loss(self):
        eta_s, eta_i = loss_coefficients(LossSpec(eta_bar_db=5.0, r_eta=1.0 / 3.0), 0.01)
        assert eta_s == pytest.approx(2.0 * eta_i, rel=1e-12)

    def test_total_attenuation_matches_db(self):
        loss = LossSpec(eta_bar_db=7.5, r_eta=0.0)
        eta_s, _ = loss_coefficients(loss, 0.013)
        assert 10 * np.log10(np.exp(eta_s * 0.013)) == pytest.approx(7.5, rel=1e-12)

    def test_with_losses_copies_spec(self, spec0):
        spec = with_losses(spec0, LossSpec(eta_bar_db=2.0, r_eta=-0.5))
        assert spec0.eta_s == 0.0
        assert spec.eta_i == pytest.approx(3.0 * spec.eta_s, rel=1e-12)

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            LossSpec(eta_bar_db=-1.0)
        with pytest.raises(InvalidInputError):
            LossSpec(eta_bar_db=1.0, r_eta=1.5)
