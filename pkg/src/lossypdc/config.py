"""TOML configuration parsing and validation.

The schema is documented in docs/config.md; every physical constant the
solver uses is reachable from the file, and defaults are limited to the
documented ones.  Validation failures raise SchemaError with a
section.key message.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
from scipy.constants import c as C_LIGHT

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import SchemaError
from .scenarios import Scenario
from .waveguide import PumpSpec, WaveguideSpec, qpm_wavevector

DEFAULTS = {
    "waveguide": {
        "length_mm": 10.0,
        "n_pump": 1.9,
        "n_signal": 1.9,
        "n_idler": 1.8,
        "vg_pump_c": 0.9 / 1.9,
        "vg_signal_c": 0.96 * 0.9 / 1.9,
        "vg_idler_c": 0.98 * 0.9 / 1.9,
    },
    "pump": {"wavelength_nm": 755.0, "fwhm_ps": 0.4},
    "solver": {"grid_points": 101, "span_sigmas": 6.0, "steps": 2000},
}


def load_toml(path) -> dict:
    p = Path(path)
    if not p.exists():
        raise SchemaError(f"config file not found: {p}")
    try:
        with open(p, "rb") as f:
            return tomllib.load(f)
    except tomllib.TOMLDecodeError as exc:
        raise SchemaError(f"config file is not valid TOML: {exc}") from exc


def _section(cfg: dict, name: str) -> dict:
    sec = cfg.get(name, {})
    if not isinstance(sec, dict):
        raise SchemaError(f"{name}: must be a table")
    return sec


def _number(sec: dict, section: str, key: str, default=None, positive=False):
    if key not in sec:
        if default is None:
            raise SchemaError(f"{section}.{key}: required")
        return default
    val = sec[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise SchemaError(f"{section}.{key}: must be a number")
    if positive and val <= 0:
        raise SchemaError(f"{section}.{key}: must be positive")
    return float(val)


def build_waveguide(cfg: dict) -> WaveguideSpec:
    wg = _section(cfg, "waveguide")
    pu = _section(cfg, "pump")
    d = DEFAULTS["waveguide"]
    length = _number(wg, "waveguide", "length_mm", d["length_mm"], positive=True) * 1e-3
    wavelength = _number(pu, "pump", "wavelength_nm", DEFAULTS["pump"]["wavelength_nm"],
                         positive=True) * 1e-9
    omega_p = 2.0 * np.pi * C_LIGHT / wavelength
    spec = WaveguideSpec(
        length=length,
        n0={
            "pump": _number(wg, "waveguide", "n_pump", d["n_pump"], positive=True),
            "signal": _number(wg, "waveguide", "n_signal", d["n_signal"], positive=True),
            "idler": _number(wg, "waveguide", "n_idler", d["n_idler"], positive=True),
        },
        vg={
            "pump": _number(wg, "waveguide", "vg_pump_c", d["vg_pump_c"], positive=True) * C_LIGHT,
            "signal": _number(wg, "waveguide", "vg_signal_c", d["vg_signal_c"], positive=True) * C_LIGHT,
            "idler": _number(wg, "waveguide", "vg_idler_c", d["vg_idler_c"], positive=True) * C_LIGHT,
        },
        omega0={"pump": omega_p, "signal": omega_p / 2.0, "idler": omega_p / 2.0},
        k_qpm=0.0,
    )
    if "k_qpm_rad_m" in wg:
        k_qpm = _number(wg, "waveguide", "k_qpm_rad_m")
    else:
        k_qpm = qpm_wavevector(spec)
    from dataclasses import replace

    return replace(spec, k_qpm=k_qpm)


def build_pump(cfg: dict) -> PumpSpec:
    pu = _section(cfg, "pump")
    return PumpSpec(
        wavelength=_number(pu, "pump", "wavelength_nm", DEFAULTS["pump"]["wavelength_nm"],
                           positive=True) * 1e-9,
        fwhm=_number(pu, "pump", "fwhm_ps", DEFAULTS["pump"]["fwhm_ps"], positive=True) * 1e-12,
    )


def _eta_values(loss: dict) -> tuple:
    if "eta_bar_db" in loss and "sweep" in loss:
        raise SchemaError("loss: give either eta_bar_db or sweep, not both")
    if "eta_bar_db" in loss:
        vals = loss["eta_bar_db"]
        if not isinstance(vals, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals
        ):
            raise SchemaError("loss.eta_bar_db: must be a list of numbers")
        return tuple(float(v) for v in vals)
    if "sweep" in loss:
        sw = loss["sweep"]
        start = _number(sw, "loss.sweep", "start_db", None)
        stop = _number(sw, "loss.sweep", "stop_db", None)
        step = _number(sw, "loss.sweep", "step_db", None, positive=True)
        if stop < start:
            raise SchemaError("loss.sweep: stop_db must be >= start_db")
        count = int(round((stop - start) / step)) + 1
        return tuple(start + k * step for k in range(count))
    raise SchemaError("loss: eta_bar_db list or sweep table is required")


def build_scenario(cfg: dict) -> Scenario:
    sc = _section(cfg, "scenario")
    name = sc.get("name")
    if name not in ("WG0", "WG1", "WG2", "custom"):
        raise SchemaError("scenario.name: must be one of WG0, WG1, WG2, custom")
    bases = sc.get("bases", ["MW", "WE", "MSq"])
    if not isinstance(bases, list) or not bases:
        raise SchemaError("scenario.bases: must be a non-empty list")

    loss = _section(cfg, "loss")
    from .scenarios import WELL_KNOWN_R_ETA

    if name == "custom":
        r_eta = _number(loss, "loss", "r_eta", None)
    else:
        r_eta = _number(loss, "loss", "r_eta", WELL_KNOWN_R_ETA[name])
    eta = _eta_values(loss) if (name != "WG0" or "eta_bar_db" in loss or "sweep" in loss) else (0.0,)

    gain = _section(cfg, "gain")
    mode = gain.get("mode", "calibrated")
    if mode == "calibrated":
        value = _number(gain, "gain", "target_photons", None, positive=True)
    elif mode == "explicit":
        value = _number(gain, "gain", "gamma_per_m", None, positive=True)
    else:
        raise SchemaError("gain.mode: must be 'calibrated' or 'explicit'")

    sol = _section(cfg, "solver")
    d = DEFAULTS["solver"]
    grid_points = int(_number(sol, "solver", "grid_points", d["grid_points"], positive=True))
    steps = int(_number(sol, "solver", "steps", d["steps"], positive=True))
    if steps < 100:
        raise SchemaError("solver.steps: must be at least 100")

    return Scenario(
        name=name,
        waveguide=build_waveguide(cfg),
        pump=build_pump(cfg),
        eta_bar_db=eta,
        r_eta=r_eta,
        gain_mode=mode,
        gain_value=value,
        grid_points=grid_points,
        span_sigmas=_number(sol, "solver", "span_sigmas", d["span_sigmas"], positive=True),
        steps=steps,
        bases=tuple(bases),
    )


def resolved_config(cfg: dict, sc: Scenario) -> dict:
    """The configuration with all defaults applied, for CSV headers."""
    return {
        "scenario": {"name": sc.name, "bases": list(sc.bases)},
        "waveguide": {
            "length_mm": sc.waveguide.length * 1e3,
            "n_pump": sc.waveguide.n0["pump"],
            "n_signal": sc.waveguide.n0["signal"],
            "n_idler": sc.waveguide.n0["idler"],
            "vg_pump_c": sc.waveguide.vg["pump"] / C_LIGHT,
            "vg_signal_c": sc.waveguide.vg["signal"] / C_LIGHT,
            "vg_idler_c": sc.waveguide.vg["idler"] / C_LIGHT,
            "k_qpm_rad_m": sc.waveguide.k_qpm,
        },
        "pump": {
            "wavelength_nm": sc.pump.wavelength * 1e9,
            "fwhm_ps": sc.pump.fwhm * 1e12,
        },
        "loss": {"eta_bar_db": list(sc.eta_bar_db), "r_eta": sc.r_eta},
        "gain": {
            "mode": sc.gain_mode,
            ("target_photons" if sc.gain_mode == "calibrated" else "gamma_per_m"): sc.gain_value,
        },
        "solver": {
            "grid_points": sc.grid_points,
            "span_sigmas": sc.span_sigmas,
            "steps": sc.steps,
        },
        "jsi": {"max_total_photons": jsi_max_photons(cfg)},
        "gain_sweep": {"gamma_scales": gain_scales(cfg)},
    }


def jsi_max_photons(cfg: dict) -> float:
    sec = _section(cfg, "jsi")
    val = _number(sec, "jsi", "max_total_photons", 1e-3, positive=True)
    if val > 1e-2:
        raise SchemaError("jsi.max_total_photons: must keep the solve below 1e-2 photons")
    return val


def gain_scales(cfg: dict) -> list:
    sec = _section(cfg, "gain_sweep")
    scales = sec.get("gamma_scales", [0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0])
    if not isinstance(scales, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) and v > 0 for v in scales
    ):
        raise SchemaError("gain_sweep.gamma_scales: must be a list of positive numbers")
    return [float(s) for s in scales]
