"""Broadband mode bases: Mercer-Wolf, Williamson-Euler, maximally-squeezed.

Each construction yields one measurement mode per partition (a ModePair).
Mode phases are fixed so that the anomalous correlator <A B> of the pair is
real and non-negative, which puts the two-mode covariance matrix in the
standard form used throughout the package.

Quadrature eigenvectors are unpacked into complex mode amplitudes with the
rule v_n = y_n + i x_n, where (x_n, y_n) are the (q_n, p_n) components; the
resulting mode F = sum v_n c_n has the eigenvector direction as its p
quadrature.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

from .errors import InvalidInputError, PartitionDegeneracyError
from .gaussian import (
    BroadbandMode,
    CorrelationState,
    CovarianceMatrix,
    ModePair,
    cov_from_correlations,
    omega_matrix,
    smallest_cov_eigenvalue,
)

DEGENERACY_RTOL = 1e-10
CLUSTER_RTOL = 1e-8
PHYSICALITY_SLACK = 1e-6
ORTHO_SYMPLECTIC_ATOL = 1e-8
RECONSTRUCTION_RTOL = 1e-6


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate a vector's global phase so its largest component is real positive.

    Ties in magnitude (within 1e-12 relative) resolve to the lowest index.
    """
    mags = np.abs(v)
    k = int(np.argmax(mags > mags.max() * (1.0 - 1e-12)))
    ph = v[k] / abs(v[k]) if mags[k] > 0 else 1.0
    return v / ph


def _phase_fix_pair(state: CorrelationState, u_a: np.ndarray, u_b: np.ndarray):
    """Split a joint phase rotation over both modes so that <AB> >= 0."""
    cab = u_a @ state.ab @ u_b
    if abs(cab) > 0.0:
        half = np.exp(-0.5j * np.angle(cab))
        u_a = u_a * half
        u_b = u_b * half
    return u_a, u_b


def _pair(state: CorrelationState, u_a, u_b, label: str) -> ModePair:
    u_a, u_b = _phase_fix_pair(state, u_a, u_b)
    return ModePair(u_a=BroadbandMode(u_a), u_b=BroadbandMode(u_b), label=label)


def _top_eigenvector(h: np.ndarray, part: str) -> np.ndarray:
    vals, vecs = np.linalg.eigh(h)
    if h.shape[0] > 1 and vals[-1] > 0:
        gap = vals[-1] - vals[-2]
        if gap < DEGENERACY_RTOL * vals[-1]:
            warnings.warn(
                f"top photon-number eigenvalue of the {part} block is degenerate "
                f"(gap {gap:.2e}); mode choice resolved by deterministic tie-break"
            )
    return _fix_phase(vecs[:, -1])


def mercer_wolf_modes(state: CorrelationState) -> ModePair:
    """First eigenvectors of <a^dag a> and <b^dag b> (descending order).

    The dominant eigenvector of each photon-number block carries the largest
    possible photon number per mode; the joint phase is then fixed so the
    anomalous correlator of the pair is real non-negative.
    """
    v_a = _top_eigenvector(state.aa, "signal")
    v_b = _top_eigenvector(state.bb, "idler")
    return _pair(state, v_a, v_b, "MW")


def unpack_quadrature_vector(vec: np.ndarray, n: int):
    """Split a 4N quadrature vector into complex signal/idler amplitudes.

    The vector is ordered (q^a_1, p^a_1, ..., q^a_N, p^a_N; q^b_1, ...);
    amplitudes follow v_n = y_n + i x_n.  Returned vectors are unnormalized.
    """
    vec = np.asarray(vec, dtype=float)
    if vec.shape != (4 * n,):
        raise InvalidInputError("quadrature vector length must be 4N")
    sig, idl = vec[: 2 * n], vec[2 * n :]
    v_a = sig[1::2] + 1j * sig[0::2]
    v_b = idl[1::2] + 1j * idl[0::2]
    return v_a, v_b


def _modes_from_quadrature_vector(state: CorrelationState, vec, label: str) -> ModePair:
    v_a, v_b = unpack_quadrature_vector(vec, state.n)
    na, nb = np.linalg.norm(v_a), np.linalg.norm(v_b)
    if na < 1e-8 or nb < 1e-8:
        raise PartitionDegeneracyError(
            f"quadrature eigenvector has no {'signal' if na < 1e-8 else 'idler'} "
            "support; the joint mode does not span both partitions"
        )
    return _pair(state, v_a / na, v_b / nb, label)


def msq_modes(state: CorrelationState) -> ModePair:
    """Modes of the maximally-squeezed joint quadrature.

    Built from the eigenvector of the smallest eigenvalue of the full
    covariance matrix; the resulting pair reproduces that eigenvalue as the
    smallest eigenvalue of its own two-mode covariance matrix.  States with
    no squeezing (lambda_min >= 1) have no preferred joint quadrature; they
    fall back to the Mercer-Wolf modes with a warning.
    """
    cov = cov_from_correlations(state)
    lam_min, vec = smallest_cov_eigenvalue(cov)
    if lam_min >= 1.0 - 1e-9:
        warnings.warn(
            "state carries no squeezing (lambda_min >= 1); MSq modes are not "
            "unique and fall back to the Mercer-Wolf pair"
        )
        mw = mercer_wolf_modes(state)
        return ModePair(u_a=mw.u_a, u_b=mw.u_b, label="MSq")
    return _modes_from_quadrature_vector(state, vec, "MSq")


@dataclass(frozen=True)
class WilliamsonEulerResult:
    """Factorization sigma = O_l Lambda O_r D O_r^T Lambda O_l^T.

    ``dw`` holds the symplectic eigenvalues (duplicated per mode, in the
    slot order of the Williamson step); ``lam`` the interleaved squeezing
    factors (e^{r_k}, e^{-r_k}) with ``r`` sorted descending.  Both
    orthogonal factors are symplectic for the interleaved (q, p) ordering.
    """

    o_l: np.ndarray
    o_r: np.ndarray
    dw: np.ndarray
    lam: np.ndarray
    r: np.ndarray

    def reconstruct(self) -> np.ndarray:
        inner = self.o_r @ (self.dw[:, None] * self.o_r.T)
        return self.o_l @ (self.lam[:, None] * inner * self.lam[None, :]) @ self.o_l.T


def _skew_canonical_frame(w: np.ndarray):
    """Orthogonal Q and positive rates t with w = Q (+)_k t_k omega Q^T.

    Real Schur form of the (normal) skew-symmetric matrix ``w``; block signs
    are normalized and modes sorted by descending t.
    """
    t_form, q = schur(w, output="real")
    m = w.shape[0] // 2
    ts = np.empty(m)
    for k in range(m):
        b = t_form[2 * k, 2 * k + 1]
        if b < 0:
            q[:, [2 * k, 2 * k + 1]] = q[:, [2 * k + 1, 2 * k]]
            b = -b
        ts[k] = b
    order = np.argsort(-ts, kind="stable")
    cols = np.empty(2 * m, dtype=int)
    cols[0::2] = 2 * order
    cols[1::2] = 2 * order + 1
    return q[:, cols], ts[order]


def _squeeze_eigenframe(g: np.ndarray, omega: np.ndarray):
    """Orthogonal symplectic O and r >= 0 (descending, one per mode) with
    g = O diag(e^{2r_1}, e^{-2r_1}, ...) O^T for symmetric symplectic g.

    Eigenvectors of strongly squeezed directions (r above a split point)
    come from the dense eigensolver; the near-unit sector is re-solved in
    its own projected subspace where reciprocal pairs down to r ~ 1e-9 are
    resolvable, and anything below counts as unsqueezed.  Every accepted
    column is Gram-Schmidt cleaned against all previously accepted ones
    before its partner omega^T v is formed: the chosen set is itself
    omega-paired, so the cleaning corrections cancel in the symplectic
    products and the frame stays symplectic to machine precision even when
    the eigensolver mixes tightly clustered reciprocal pairs.
    """
    n2 = g.shape[0]
    r_split = 1e-4
    gvals, gvecs = np.linalg.eigh(g)
    if gvals[0] <= 0:
        raise InvalidInputError("squeezer part must be positive definite")
    r_all = 0.5 * np.log(gvals)

    chosen = np.empty((n2, 0))
    cols: list[np.ndarray] = []
    rs: list[float] = []

    def clean(v):
        for _ in range(2):
            v = v - chosen @ (chosen.T @ v)
        nrm = np.linalg.norm(v)
        return (v / nrm, nrm)

    def accept(v, r):
        nonlocal chosen
        v, nrm = clean(v)
        if nrm < 0.5:
            raise RuntimeError("degenerate direction while building the frame")
        w, _ = clean(omega.T @ v)
        chosen = np.column_stack([chosen, v, w])
        cols.extend([v, w])
        rs.append(float(r))

    for k in np.flatnonzero(r_all > r_split)[::-1]:  # descending r
        accept(_fix_phase(gvecs[:, k]), r_all[k])

    near = np.flatnonzero(np.abs(r_all) <= r_split)
    if near.size:
        b = gvecs[:, near]
        g_hat = 0.5 * (b.T @ g @ b + (b.T @ g @ b).T)
        hvals, hvecs = np.linalg.eigh(g_hat)
        hr = 0.5 * np.log(hvals)
        floor = 1e-9
        for k in np.flatnonzero(hr > floor)[::-1]:
            accept(_fix_phase(b @ hvecs[:, k]), hr[k])
        unit = np.flatnonzero(np.abs(hr) <= floor)
        if unit.size:
            # Each accepted unit vector consumes its omega partner too, so
            # candidates are picked by largest residual (pivoted), never in
            # blind order, to avoid stranding directions of big clusters.
            resid = b @ hvecs[:, unit]
            resid = resid - chosen @ (chosen.T @ resid)
            while len(cols) < n2:
                norms = np.linalg.norm(resid, axis=0)
                k = int(np.argmax(norms))
                if norms[k] < 1e-6:
                    raise RuntimeError("unsqueezed subspace exhausted prematurely")
                new = chosen.shape[1]
                accept(_fix_phase(resid[:, k] / norms[k]), 0.0)
                pair_cols = chosen[:, new:]
                resid = resid - pair_cols @ (pair_cols.T @ resid)
    if len(cols) != n2:
        raise RuntimeError("squeezing eigenframe has unexpected dimension")
    return np.column_stack(cols), np.asarray(rs)


def williamson_euler(cov: CovarianceMatrix) -> WilliamsonEulerResult:
    """Williamson factorization sigma = S D S^T followed by the Euler
    (Bloch-Messiah) splitting S = O_l Lambda O_r.

    The Williamson step diagonalizes sigma^{-1/2} Omega sigma^{-1/2}; the
    Euler step eigendecomposes S S^T, pairing each squeezed direction v with
    Omega^T v and pairing the unsqueezed subspace explicitly.  Validates
    orthogonality/symplecticity of the factors and the reconstruction
    residual before returning.
    """
    sigma = cov.sigma
    n2 = sigma.shape[0]
    omega = omega_matrix(n2 // 2)

    vals, vecs = np.linalg.eigh(sigma)
    if vals[0] <= 0:
        raise InvalidInputError("covariance matrix must be positive definite")
    inv_sqrt = vecs @ ((1.0 / np.sqrt(vals))[:, None] * vecs.T)
    sqrt_sigma = vecs @ (np.sqrt(vals)[:, None] * vecs.T)

    w = inv_sqrt @ omega @ inv_sqrt
    w = 0.5 * (w - w.T)
    q, ts = _skew_canonical_frame(w)
    nus = 1.0 / ts  # ascending
    if nus[0] < 1.0 - PHYSICALITY_SLACK:
        raise InvalidInputError(
            f"unphysical covariance matrix: smallest symplectic eigenvalue {nus[0]:.8f}"
        )
    s = sqrt_sigma @ (q * np.repeat(np.sqrt(ts), 2)[None, :])
    dw = np.repeat(nus, 2)

    g = s @ s.T
    o_l, r = _squeeze_eigenframe(g, omega)
    lam = np.empty(n2)
    lam[0::2] = np.exp(r)
    lam[1::2] = 1.0 / lam[0::2]  # exact reciprocal pairs

    o_r = (1.0 / lam)[:, None] * (o_l.T @ s)

    for name, o in (("O_l", o_l), ("O_r", o_r)):
        if np.abs(o.T @ o - np.eye(n2)).max() > ORTHO_SYMPLECTIC_ATOL:
            raise RuntimeError(f"{name} failed the orthogonality check")
        if np.abs(o.T @ omega @ o - omega).max() > ORTHO_SYMPLECTIC_ATOL:
            raise RuntimeError(f"{name} failed the symplectic check")
    result = WilliamsonEulerResult(
        o_l=o_l, o_r=o_r, dw=dw, lam=lam, r=np.asarray(r)
    )
    resid = np.abs(result.reconstruct() - sigma).max()
    if resid > RECONSTRUCTION_RTOL * np.abs(sigma).max():
        raise RuntimeError(f"Williamson-Euler reconstruction residual {resid:.2e}")
    return result


def williamson_euler_modes(state: CorrelationState) -> ModePair:
    """Modes unpacked from the first column of the Euler factor O_l.

    That column is the most-squeezed axis of the pure-squeezer part of the
    state; for lossless states it coincides with the Mercer-Wolf and MSq
    constructions.
    """
    cov = cov_from_correlations(state)
    result = williamson_euler(cov)
    return _modes_from_quadrature_vector(state, result.o_l[:, 0], "WE")
