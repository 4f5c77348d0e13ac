"""Shared fixtures: reference physics, fast solver configs, random states."""

import numpy as np
import pytest

from lossypdc.gaussian import FrequencyGrid, state_from_blocks
from lossypdc.solver import SolverConfig, default_grid, integrate
from lossypdc.waveguide import LossSpec, PumpSpec, reference_waveguide, with_losses


@pytest.fixture(scope="session")
def spec0():
    return reference_waveguide()


@pytest.fixture(scope="session")
def pump():
    return PumpSpec(wavelength=755e-9, fwhm=0.4e-12)


@pytest.fixture(scope="session")
def small_grid(spec0, pump):
    """Coarse 21-point grid for fast unit-test solves."""
    return default_grid(spec0, pump, n=21)


@pytest.fixture(scope="session")
def small_config(small_grid):
    return SolverConfig(grid=small_grid, gamma=150.0, steps=700)


@pytest.fixture(scope="session")
def small_lossless_state(small_config, spec0, pump):
    return integrate(small_config, spec0, pump)


@pytest.fixture(scope="session")
def small_lossy_state(small_config, spec0, pump):
    spec = with_losses(spec0, LossSpec(eta_bar_db=4.0, r_eta=1.0 / 3.0))
    return integrate(small_config, spec, pump)


def random_physical_state(rng, n: int, max_r: float = 1.2, loss: bool = True):
    """Random valid type-II state: two-mode squeezers in random broadband
    mode pairs, optionally attenuated mode-by-mode.  Physical by construction.
    """
    u_a, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    u_b, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    r = rng.uniform(0.0, max_r, size=n)
    aa = (u_a.conj() * np.sinh(r) ** 2) @ u_a.T
    bb = (u_b.conj() * np.sinh(r) ** 2) @ u_b.T
    ab = (u_a * (0.5 * np.sinh(2 * r))) @ u_b.T
    grid = FrequencyGrid(omegas=np.linspace(1.0e15, 1.2e15, n))
    state = state_from_blocks(grid, aa, bb, ab)
    if loss:
        t_a = rng.uniform(0.5, 1.0, size=n) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        t_b = rng.uniform(0.5, 1.0, size=n) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        from lossypdc.gaussian import apply_external_loss

        state = apply_external_loss(state, t_a, t_b)
    return state


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
