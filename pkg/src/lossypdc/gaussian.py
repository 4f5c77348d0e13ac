"""Value types and pure operations for multimode Gaussian bipartite states.

State bookkeeping follows the type-II PDC solution structure: the normal
correlation matrix D = <c^dag c> is block-diagonal (signal block then idler
block) and the anomalous matrix C = <c c> has only signal-idler blocks.
Indices 0..N-1 are signal modes, N..2N-1 idler modes.

Quadratures use hbar = 2 (vacuum variance 1): q = c^dag + c, p = i(c^dag - c),
ordered (q_1, p_1, ..., q_N, p_N) for the signal part followed by the idler
part, so the covariance matrix of the vacuum is the identity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError

HERMITICITY_RTOL = 1e-10
PSD_SLACK = 1e-8
BLOCK_RTOL = 1e-8
UNITARITY_ATOL = 1e-10
MODE_NORM_ATOL = 1e-12


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform grid of angular frequencies shared by signal and idler."""

    omegas: np.ndarray

    def __post_init__(self):
        omegas = _freeze(np.asarray(self.omegas, dtype=float))
        object.__setattr__(self, "omegas", omegas)
        if omegas.ndim != 1 or omegas.size < 1:
            raise InvalidInputError("frequency grid must be a non-empty 1-d array")
        if omegas.size > 1:
            steps = np.diff(omegas)
            if np.any(steps <= 0):
                raise InvalidInputError("frequencies must be strictly increasing")
            d = steps.mean()
            if np.max(np.abs(steps - d)) > 1e-9 * d:
                raise InvalidInputError("frequency grid must be uniformly spaced")

    @property
    def n(self) -> int:
        return self.omegas.size

    @property
    def delta(self) -> float:
        if self.omegas.size < 2:
            return 0.0
        return float(self.omegas[1] - self.omegas[0])


@dataclass(frozen=True)
class CorrelationState:
    """Correlation matrices (D, C) of a type-II PDC state at position z."""

    grid: FrequencyGrid
    d: np.ndarray
    c: np.ndarray
    z: float = 0.0

    def __post_init__(self):
        n2 = 2 * self.grid.n
        d = _freeze(np.asarray(self.d, dtype=complex))
        c = _freeze(np.asarray(self.c, dtype=complex))
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "c", c)
        if d.shape != (n2, n2) or c.shape != (n2, n2):
            raise InvalidInputError(
                f"D and C must be {n2}x{n2} for a grid of {self.grid.n} frequencies"
            )
        scale_d = 1.0 + np.abs(d).max(initial=0.0)
        scale_c = 1.0 + np.abs(c).max(initial=0.0)
        if np.abs(d - d.conj().T).max() > HERMITICITY_RTOL * scale_d:
            raise InvalidInputError("D must be Hermitian")
        if np.abs(c - c.T).max() > HERMITICITY_RTOL * scale_c:
            raise InvalidInputError("C must be symmetric")
        if np.linalg.eigvalsh(d).min() < -PSD_SLACK * scale_d:
            raise InvalidInputError("D must be positive semidefinite")
        n = self.grid.n
        scale = 1.0 + max(np.abs(d).max(initial=0.0), np.abs(c).max(initial=0.0))
        off = max(np.abs(d[:n, n:]).max(), np.abs(d[n:, :n]).max())
        diag = max(np.abs(c[:n, :n]).max(), np.abs(c[n:, n:]).max())
        if off > BLOCK_RTOL * scale or diag > BLOCK_RTOL * scale:
            raise InvalidInputError(
                "state violates the type-II block structure "
                "(cross blocks of D / diagonal blocks of C must vanish)"
            )

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def aa(self) -> np.ndarray:
        """Signal photon-number block <a^dag a>."""
        return self.d[: self.n, : self.n]

    @property
    def bb(self) -> np.ndarray:
        """Idler photon-number block <b^dag b>."""
        return self.d[self.n :, self.n :]

    @property
    def ab(self) -> np.ndarray:
        """Anomalous signal-idler block <a b>."""
        return self.c[: self.n, self.n :]

    @property
    def photons_signal(self) -> float:
        return float(np.trace(self.aa).real)

    @property
    def photons_idler(self) -> float:
        return float(np.trace(self.bb).real)


def state_from_blocks(grid: FrequencyGrid, aa, bb, ab, z: float = 0.0) -> CorrelationState:
    """Assemble a CorrelationState from its three nonzero blocks."""
    n = grid.n
    d = np.zeros((2 * n, 2 * n), dtype=complex)
    c = np.zeros((2 * n, 2 * n), dtype=complex)
    d[:n, :n] = aa
    d[n:, n:] = bb
    c[:n, n:] = ab
    c[n:, :n] = np.asarray(ab).T
    return CorrelationState(grid=grid, d=d, c=c, z=z)


def vacuum_state(grid: FrequencyGrid) -> CorrelationState:
    n = grid.n
    z = np.zeros((2 * n, 2 * n), dtype=complex)
    return CorrelationState(grid=grid, d=z, c=z.copy())


@dataclass(frozen=True)
class CovarianceMatrix:
    """Real symmetric quadrature covariance matrix, vacuum = identity."""

    sigma: np.ndarray

    def __post_init__(self):
        s = _freeze(np.asarray(self.sigma, dtype=float))
        object.__setattr__(self, "sigma", s)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
            raise InvalidInputError("covariance matrix must be square of even size")
        scale = np.abs(s).max(initial=1.0)
        if np.abs(s - s.T).max() > 1e-10 * scale:
            raise InvalidInputError("covariance matrix must be symmetric")

    @property
    def n_modes(self) -> int:
        return self.sigma.shape[0] // 2


@dataclass(frozen=True)
class BroadbandMode:
    """Unit-norm complex spectral amplitude vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = _freeze(np.asarray(self.amplitudes, dtype=complex))
        object.__setattr__(self, "amplitudes", a)
        if a.ndim != 1 or a.size < 1:
            raise InvalidInputError("mode amplitudes must be a 1-d vector")
        if abs(np.linalg.norm(a) - 1.0) > MODE_NORM_ATOL:
            raise InvalidInputError("mode amplitudes must have unit norm")


@dataclass(frozen=True)
class ModePair:
    """One broadband measurement mode per partition."""

    u_a: BroadbandMode
    u_b: BroadbandMode
    label: str = "custom"


def omega_matrix(n_modes: int) -> np.ndarray:
    """Symplectic form for the interleaved (q_1, p_1, ..., q_n, p_n) ordering."""
    w = np.zeros((2 * n_modes, 2 * n_modes))
    idx = np.arange(n_modes)
    w[2 * idx, 2 * idx + 1] = 1.0
    w[2 * idx + 1, 2 * idx] = -1.0
    return w


def cov_from_correlations(state: CorrelationState) -> CovarianceMatrix:
    """Quadrature covariance matrix of a zero-mean Gaussian state.

    With m = 2N monochromatic modes (signal stacked over idler), the blocks
    are sigma_qq = 1 + 2(Re D + Re C), sigma_pp = 1 + 2(Re D - Re C) and
    sigma_pq = 2(Im C - Im D), interleaved per mode into a 2m x 2m matrix.
    """
    d, c = state.d, state.c
    m = d.shape[0]
    eye = np.eye(m)
    qq = eye + 2.0 * (d.real + c.real)
    pp = eye + 2.0 * (d.real - c.real)
    pq = 2.0 * (c.imag - d.imag)  # <p_i q_j>_sym
    qp = 2.0 * (c.imag + d.imag)  # <q_i p_j>_sym
    sigma = np.empty((2 * m, 2 * m))
    sigma[0::2, 0::2] = qq
    sigma[1::2, 1::2] = pp
    sigma[1::2, 0::2] = pq
    sigma[0::2, 1::2] = qp
    return CovarianceMatrix(sigma=sigma)


def moments_from_cov(cov: CovarianceMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Invert cov_from_correlations: recover (D, C) from sigma."""
    s = cov.sigma
    qq = s[0::2, 0::2]
    pp = s[1::2, 1::2]
    qp = s[0::2, 1::2]
    pq = s[1::2, 0::2]
    m = qq.shape[0]
    eye = np.eye(m)
    d = (qq + pp - 2 * eye) / 4.0 + 1j * (qp - pq) / 4.0
    c = (qq - pp) / 4.0 + 1j * (qp + pq) / 4.0
    return d, c


def _check_unitary(u: np.ndarray, name: str):
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise InvalidInputError(f"{name} must be a square matrix")
    if np.abs(u @ u.conj().T - np.eye(u.shape[0])).max() > UNITARITY_ATOL * u.shape[0]:
        raise InvalidInputError(f"{name} is not unitary")
    return u


def apply_passive_transform(
    state: CorrelationState, u_a: np.ndarray, u_b: np.ndarray
) -> CorrelationState:
    """Re-express the state in broadband modes A = U_a a, B = U_b b.

    The correlation matrices transform as D' = U* D U^T and C' = U C U^T
    with U = U_a (+) U_b block-diagonal; total photon number is preserved.
    """
    n = state.n
    u_a = _check_unitary(u_a, "U_a")
    u_b = _check_unitary(u_b, "U_b")
    if u_a.shape[0] != n or u_b.shape[0] != n:
        raise InvalidInputError("U_a and U_b must match the grid size")
    u = np.zeros((2 * n, 2 * n), dtype=complex)
    u[:n, :n] = u_a
    u[n:, n:] = u_b
    d = u.conj() @ state.d @ u.T
    c = u @ state.c @ u.T
    return CorrelationState(grid=state.grid, d=d, c=c, z=state.z)


def apply_external_loss(
    state: CorrelationState, t_a: np.ndarray, t_b: np.ndarray
) -> CorrelationState:
    """Attenuate each monochromatic mode by a field transmission t, |t| <= 1.

    Implements a_n -> t_n a_n on the correlators: D'_ij = conj(t_i) t_j D_ij,
    C'_ij = t_i t_j C_ij with t the concatenated (t_a, t_b) vector.
    """
    n = state.n
    t_a = np.asarray(t_a, dtype=complex)
    t_b = np.asarray(t_b, dtype=complex)
    if t_a.shape != (n,) or t_b.shape != (n,):
        raise InvalidInputError("transmission vectors must have one entry per frequency")
    t = np.concatenate([t_a, t_b])
    if np.any(np.abs(t) > 1.0 + 1e-12):
        raise InvalidInputError("|t| > 1 is amplification, not loss")
    d = np.outer(t.conj(), t) * state.d
    c = np.outer(t, t) * state.c
    return CorrelationState(grid=state.grid, d=d, c=c, z=state.z)


def symplectic_spectrum(cov: CovarianceMatrix) -> np.ndarray:
    """Symplectic eigenvalues of sigma: moduli of eig(i Omega sigma).

    The raw spectrum carries each value twice; the returned array collapses
    the pairs and is sorted in descending order (one value per mode).
    """
    omega = omega_matrix(cov.n_modes)
    raw = np.abs(np.linalg.eigvals(omega @ cov.sigma))
    raw.sort()
    lo, hi = raw[0::2], raw[1::2]
    scale = max(1.0, raw[-1])
    if np.abs(hi - lo).max() > 1e-6 * scale:
        warnings.warn("symplectic spectrum pairs match poorly; input near-singular?")
    return 0.5 * (lo + hi)[::-1].copy()


def smallest_cov_eigenvalue(cov: CovarianceMatrix) -> tuple[float, np.ndarray]:
    """Smallest ordinary eigenvalue of sigma and its eigenvector.

    The eigenvector (returned second) is the quadrature direction with the
    smallest variance; ties within 1e-10 relative gap are resolved by the
    eigensolver order, and its sign is fixed so the largest-magnitude
    component is positive.
    """
    vals, vecs = np.linalg.eigh(cov.sigma)
    v = vecs[:, 0]
    k = np.argmax(np.abs(v))
    if v[k] < 0:
        v = -v
    return float(vals[0]), v
