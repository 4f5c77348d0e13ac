"""Type-II PDC in lossy waveguides and the two-mode states it can deliver.

The package integrates the spatial master equations for the correlation
matrices of type-II parametric down-conversion with internal losses, then
extracts two-mode bipartite states in three broadband mode bases
(Mercer-Wolf, Williamson-Euler, maximally-squeezed) and evaluates their
entanglement, squeezing, and purity.
"""

__version__ = "0.1.0"

from .gaussian import (
    BroadbandMode,
    CorrelationState,
    CovarianceMatrix,
    FrequencyGrid,
    ModePair,
    apply_external_loss,
    apply_passive_transform,
    cov_from_correlations,
    moments_from_cov,
    smallest_cov_eigenvalue,
    symplectic_spectrum,
    vacuum_state,
)
from .modes import (
    WilliamsonEulerResult,
    mercer_wolf_modes,
    msq_modes,
    williamson_euler,
    williamson_euler_modes,
)
from .solver import (
    SolverConfig,
    calibrate_gain,
    coupling_matrix,
    default_grid,
    dominant_photon_number,
    integrate,
    jsi,
)
from .tmbs import (
    TmbsCov,
    TmbsReport,
    build_tmbs,
    log_negativity,
    purity,
    report,
    squeezing_db,
    symplectic_values_pt,
    tmbs_eigenvalues,
    verify_msq_optimality,
)
from .waveguide import (
    LossSpec,
    PumpSpec,
    WaveguideSpec,
    loss_coefficients,
    pump_spectrum,
    reference_waveguide,
    refractive_index,
    wavevector,
    with_losses,
)
