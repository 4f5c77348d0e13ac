"""Low-gain joint spectral intensity of the reference waveguide.

At low gain |<a_i b_j>|^2 maps out the joint spectral amplitude: a stripe
along the frequency-anticorrelated direction, set by the pump envelope
S(w_s + w_i) and the phase-matching function of the group-velocity-mismatched
fields.  Runtime: a few seconds on a reduced grid.
"""

import numpy as np

from lossypdc import PumpSpec, SolverConfig, default_grid, integrate, jsi, reference_waveguide

spec = reference_waveguide()
pump = PumpSpec(wavelength=755e-9, fwhm=0.4e-12)
grid = default_grid(spec, pump, n=61)

state = integrate(SolverConfig(grid=grid, gamma=2.0, steps=400), spec, pump)
print(f"total photons: {state.photons_signal:.2e} (low gain)")

intensity = jsi(state)
w0 = spec.omega0["signal"]
delta = (grid.omegas - w0) / 1e12

i_s, i_i = np.unravel_index(np.argmax(intensity), intensity.shape)
print(f"JSI peak at delta_omega = ({delta[i_s]:+.2f}, {delta[i_i]:+.2f}) 1e12 rad/s")

# coarse text rendering of the map, signal frequency down the page
chars = " .:-=+*#%@"
for row in intensity[::4]:
    print("".join(chars[min(int(v * (len(chars) - 1) * 4), len(chars) - 1)] for v in row[::2]))
print("(each char is one grid cell; the bright ridge is frequency-anticorrelated)")
