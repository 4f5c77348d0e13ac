"""Waveguide dispersion, pump pulse, and loss parametrization.

Conventions:
 - angular frequencies omega in rad/s, wave vectors in rad/m, lengths in m
 - each field (pump, signal, idler) has a linear refractive index
   n(omega) = n(omega0) + (omega - omega0)/omega0 * (c/v_g(omega0) - n(omega0)),
   i.e. n and the group velocity are both fixed at the field's central frequency
 - loss coefficients eta_s, eta_i are power attenuation rates in 1/m
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.constants import c as C_LIGHT

from .errors import InvalidInputError

FIELDS = ("pump", "signal", "idler")


@dataclass(frozen=True)
class WaveguideSpec:
    """Dispersion, quasi-phase-matching, and internal losses of one waveguide.

    ``n0``, ``vg`` and ``omega0`` are per-field maps keyed by "pump",
    "signal", "idler".  ``k_qpm`` is the poling wave vector 2*pi/Lambda.
    """

    length: float
    n0: dict
    vg: dict
    omega0: dict
    k_qpm: float
    eta_s: float = 0.0
    eta_i: float = 0.0

    def __post_init__(self):
        if self.length <= 0:
            raise InvalidInputError("waveguide length must be positive")
        for f in FIELDS:
            if f not in self.n0 or f not in self.vg or f not in self.omega0:
                raise InvalidInputError(f"missing dispersion entry for field {f!r}")
            if self.vg[f] <= 0:
                raise InvalidInputError(f"group velocity for {f!r} must be positive")
        if self.eta_s < 0 or self.eta_i < 0:
            raise InvalidInputError("loss coefficients must be non-negative")


@dataclass(frozen=True)
class PumpSpec:
    """Transform-limited Gaussian pump pulse.

    ``fwhm`` is the intensity full width at half maximum of the pulse in
    seconds; ``wavelength`` the central (vacuum) wavelength in meters.
    """

    wavelength: float
    fwhm: float

    def __post_init__(self):
        if self.wavelength <= 0 or self.fwhm <= 0:
            raise InvalidInputError("pump wavelength and FWHM must be positive")

    @property
    def omega_p(self) -> float:
        return 2.0 * np.pi * C_LIGHT / self.wavelength

    @property
    def sigma_omega(self) -> float:
        """Amplitude-spectral standard deviation of the pump, rad/s."""
        return 2.0 * np.sqrt(np.log(2.0)) / self.fwhm


@dataclass(frozen=True)
class LossSpec:
    """Mean loss over the full device length (dB) and signal/idler asymmetry."""

    eta_bar_db: float
    r_eta: float = 0.0

    def __post_init__(self):
        if self.eta_bar_db < 0:
            raise InvalidInputError("mean loss in dB must be non-negative")
        if abs(self.r_eta) > 1:
            raise InvalidInputError("loss asymmetry r_eta must satisfy |r| <= 1")


def refractive_index(field: str, omega, spec: WaveguideSpec):
    """Linear refractive index of ``field`` at angular frequency ``omega``."""
    if field not in FIELDS:
        raise InvalidInputError(f"unknown field {field!r}, expected one of {FIELDS}")
    n0 = spec.n0[field]
    w0 = spec.omega0[field]
    slope = C_LIGHT / spec.vg[field] - n0
    return n0 + (np.asarray(omega) - w0) / w0 * slope


def wavevector(field: str, omega, spec: WaveguideSpec):
    """Wave vector k(omega) = n(omega) * omega / c of ``field``."""
    return refractive_index(field, omega, spec) * np.asarray(omega) / C_LIGHT


def qpm_wavevector(spec: WaveguideSpec) -> float:
    """Poling wave vector that phase-matches the degenerate point.

    Evaluates k_p(2*omega0) - k_s(omega0) - k_i(omega0) at the signal/idler
    central frequency, which reduces to (omega_p/2c)(2 n_p - n_s - n_i) for
    frequency-degenerate type-II PDC.
    """
    w0 = spec.omega0["signal"]
    return float(
        wavevector("pump", 2.0 * w0, spec)
        - wavevector("signal", w0, spec)
        - wavevector("idler", w0, spec)
    )


def pump_spectrum(omega_sum, pump: PumpSpec):
    """Pump spectral amplitude at the sum frequency, normalized to peak 1.

    S(omega) = exp(-(omega - omega_p)^2 / (2 sigma^2)) with sigma the
    amplitude-spectral width of a transform-limited pulse whose intensity
    FWHM is ``pump.fwhm``.  Real-valued (zero chirp).
    """
    x = (np.asarray(omega_sum) - pump.omega_p) / pump.sigma_omega
    return np.exp(-0.5 * x * x)


def loss_coefficients(loss: LossSpec, length: float) -> tuple[float, float]:
    """Convert (mean dB over the device, asymmetry) to (eta_s, eta_i) in 1/m.

    ``eta_bar_db`` is the total mean power attenuation accumulated over
    ``length``: eta_bar [1/m] = ln(10)/10 * eta_bar_db / L, and
    eta_s = eta_bar (1 + r), eta_i = eta_bar (1 - r).
    """
    eta_bar = np.log(10.0) / 10.0 * loss.eta_bar_db / length
    return eta_bar * (1.0 + loss.r_eta), eta_bar * (1.0 - loss.r_eta)


def with_losses(spec: WaveguideSpec, loss: LossSpec) -> WaveguideSpec:
    """Copy of ``spec`` with internal losses set from a LossSpec."""
    eta_s, eta_i = loss_coefficients(loss, spec.length)
    return replace(spec, eta_s=eta_s, eta_i=eta_i)


def reference_waveguide(
    length: float = 0.01,
    n_p: float = 1.9,
    n_s: float = 1.9,
    n_i: float = 1.8,
    vg_p_over_c: float = 0.9 / 1.9,
    vg_s_ratio: float = 0.96,
    vg_i_ratio: float = 0.98,
    pump_wavelength: float = 755e-9,
    k_qpm: float | None = None,
) -> WaveguideSpec:
    """The 1 cm frequency-degenerate type-II waveguide used by the bundled
    scenarios.  Group velocities of signal/idler are given as ratios of the
    pump group velocity; ``k_qpm=None`` phase-matches the degenerate point.
    """
    omega_p = 2.0 * np.pi * C_LIGHT / pump_wavelength
    vg_p = vg_p_over_c * C_LIGHT
    spec = WaveguideSpec(
        length=length,
        n0={"pump": n_p, "signal": n_s, "idler": n_i},
        vg={"pump": vg_p, "signal": vg_s_ratio * vg_p, "idler": vg_i_ratio * vg_p},
        omega0={"pump": omega_p, "signal": omega_p / 2.0, "idler": omega_p / 2.0},
        k_qpm=0.0,
    )
    if k_qpm is None:
        k_qpm = qpm_wavevector(spec)
    return replace(spec, k_qpm=k_qpm)
