"""The five figure kinds, rendered deterministically to SVG plus PNG.

Determinism: fixed hash salt, text kept as text (no font glyph paths), no
date metadata; identical inputs give byte-identical SVG, which the test
suite pins by hash.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams.update(
    {
        "svg.hashsalt": "figrender",
        "svg.fonttype": "none",
        "figure.dpi": 100,
        "font.family": "DejaVu Sans",
    }
)

import matplotlib.pyplot as plt
import numpy as np

from .io import FigureError, read_gain, read_jsi, read_modes, read_sweep
from .jobs import FigureJob

BASIS_ORDER = ("MW", "WE", "MSq")
SVG_METADATA = {"Date": None, "Creator": "figrender"}


def _save(fig, output: Path) -> dict:
    output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(output, format="svg", metadata=SVG_METADATA)
    png = output.with_suffix(".png")
    fig.savefig(png, format="png", dpi=200)
    plt.close(fig)
    return {"svg": output, "png": png}


def _bases_present(rows):
    return [b for b in BASIS_ORDER if any(r["basis"] == b for r in rows)]


def render_jsi(job: FigureJob) -> dict:
    axis_s, axis_i, body = read_jsi(job.input_csv)
    fig, ax = plt.subplots(figsize=(4.6, 4.0))
    mesh = ax.pcolormesh(axis_i / 1e12, axis_s / 1e12, body, cmap="viridis", vmin=0, vmax=1)
    fig.colorbar(mesh, ax=ax, label="normalized JSI")
    ax.set_xlabel(r"$\delta\omega_i$ (10$^{12}$ rad/s)")
    ax.set_ylabel(r"$\delta\omega_s$ (10$^{12}$ rad/s)")
    ax.set_title("Joint spectral intensity (low gain)")
    fig.tight_layout()
    return _save(fig, job.output)


def render_gain(job: FigureJob) -> dict:
    rows = sorted(read_gain(job.input_csv), key=lambda r: r["n_photons"])
    n = [r["n_photons"] for r in rows]
    lam = [r["lambda_minus"] for r in rows]
    e = [r["E_nats"] for r in rows]
    fig, ax = plt.subplots(figsize=(4.8, 3.4))
    ax.semilogy(n, lam, "o-", color="tab:purple")
    ax.set_xlabel(r"photons per mode $N_A = N_B$")
    ax.set_ylabel(r"$\lambda_-(\sigma)$", color="tab:purple")
    ax2 = ax.twinx()
    ax2.plot(n, e, "s--", color="tab:orange")
    ax2.set_ylabel(r"$\mathcal{E}(\sigma)$ (nats)", color="tab:orange")
    ax.set_title("Squeezing and entanglement vs gain (lossless)")
    fig.tight_layout()
    return _save(fig, job.output)


def separable_intervals(rows) -> list[tuple]:
    """Maximal runs of consecutive loss points where lambda_-(MW) > 1."""
    mw = sorted((r for r in rows if r["basis"] == "MW"), key=lambda r: r["eta_bar_db"])
    intervals = []
    run = []
    for r in mw:
        if r["lambda_minus"] > 1.0:
            run.append(r["eta_bar_db"])
        elif run:
            intervals.append((run[0], run[-1]))
            run = []
    if run:
        intervals.append((run[0], run[-1]))
    return intervals


def render_loss_sweep(job: FigureJob) -> dict:
    rows = read_sweep(job.input_csv)
    bases = _bases_present(rows)
    if not bases:
        raise FigureError(f"{job.input_csv}: no known basis rows")
    fig, axes = plt.subplots(3, 1, figsize=(5.0, 8.4), sharex=True)
    ax_n, ax_lam, ax_mu = axes
    for basis in bases:
        sub = sorted((r for r in rows if r["basis"] == basis), key=lambda r: r["eta_bar_db"])
        eta = [r["eta_bar_db"] for r in sub]
        color = job.colors.get(basis)
        ax_n.plot(eta, [r["N_A"] for r in sub], "-", color=color, label=f"{basis} $N_A$")
        ax_n.plot(eta, [r["N_B"] for r in sub], "--", color=color, label=f"{basis} $N_B$")
        ax_lam.semilogy(eta, [r["lambda_minus"] for r in sub], "-", color=color, label=basis)
        ax_mu.semilogy(eta, [r["purity"] for r in sub], "-", color=color, label=basis)
    intervals = separable_intervals(rows)
    for lo, hi in intervals:
        ax_lam.axvspan(lo, hi, color="0.85", zorder=0)
    ax_lam.axhline(1.0, color="0.5", lw=0.8)
    ax_n.set_ylabel("photons")
    ax_lam.set_ylabel(r"$\lambda_-(\sigma)$")
    ax_mu.set_ylabel("purity")
    ax_mu.set_xlabel(r"$\bar\eta$ (dB)")
    ax_n.legend(fontsize=7, ncol=3)
    ax_lam.legend(fontsize=8)
    fig.tight_layout()
    out = _save(fig, job.output)
    out["shaded_intervals"] = intervals
    return out


def render_cov(job: FigureJob) -> dict:
    rows = read_sweep(job.input_csv)
    etas = sorted({r["eta_bar_db"] for r in rows})
    eta = job.loss_db if job.loss_db is not None else etas[0]
    sub = [r for r in rows if r["eta_bar_db"] == eta]
    if not sub:
        raise FigureError(f"{job.input_csv}: no rows at eta_bar_db = {eta}")
    bases = _bases_present(sub)
    fig, axes = plt.subplots(1, len(bases), figsize=(2.9 * len(bases), 3.0))
    axes = np.atleast_1d(axes)
    scale = max(max(r["alpha"], r["beta"], abs(r["gamma"])) for r in sub)
    for ax, basis in zip(axes, bases):
        r = next(x for x in sub if x["basis"] == basis)
        a, b, g = r["alpha"], r["beta"], r["gamma"]
        sigma = np.array([[a, 0, g, 0], [0, a, 0, -g], [g, 0, b, 0], [0, -g, 0, b]])
        im = ax.imshow(sigma, cmap="RdBu_r", vmin=-scale, vmax=scale)
        ax.set_title(rf"$\sigma^{{{basis}}}$")
        ax.set_xticks(range(4), [r"$q_A$", r"$p_A$", r"$q_B$", r"$p_B$"], fontsize=7)
        ax.set_yticks(range(4), [r"$q_A$", r"$p_A$", r"$q_B$", r"$p_B$"], fontsize=7)
    fig.colorbar(im, ax=list(axes), shrink=0.8)
    return _save(fig, job.output)


def render_modes(job: FigureJob) -> dict:
    rows = read_modes(job.input_csv)
    bases = _bases_present(rows)
    if not bases:
        raise FigureError(f"{job.input_csv}: no known basis rows")
    fig, axes = plt.subplots(2, 2, figsize=(7.4, 5.2), sharex=True)
    for col, partition in enumerate(("A", "B")):
        for basis in bases:
            sub = [r for r in rows if r["basis"] == basis and r["partition"] == partition]
            sub.sort(key=lambda r: r["omega_rad_s"])
            w = np.array([r["omega_rad_s"] for r in sub])
            w0 = 0.5 * (w[0] + w[-1])
            color = job.colors.get(basis)
            axes[0, col].plot((w - w0) / 1e12, [r["abs_u"] for r in sub], color=color, label=basis)
            axes[1, col].plot((w - w0) / 1e12, [r["arg_u"] for r in sub], color=color, label=basis)
        axes[0, col].set_title(f"partition {partition}")
        axes[1, col].set_xlabel(r"$\delta\omega$ (10$^{12}$ rad/s)")
    axes[0, 0].set_ylabel(r"$|u|$")
    axes[1, 0].set_ylabel(r"$\arg u$ (rad)")
    axes[0, 0].legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, job.output)


RENDERERS = {
    "jsi": render_jsi,
    "gain": render_gain,
    "loss-sweep": render_loss_sweep,
    "cov": render_cov,
    "modes": render_modes,
}


def render(job: FigureJob) -> dict:
    """Render one job; returns the written paths (and shaded intervals for
    loss sweeps).  Raises FigureError without writing anything if the input
    is missing, empty, or lacks documented columns."""
    return RENDERERS[job.kind](job)
