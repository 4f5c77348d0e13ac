"""Deterministic CSV and metadata writers for scenario runs.

Every CSV starts with a comment block that embeds the fully resolved
configuration as one JSON line, so a figure can be regenerated from the
output alone.  No timestamps are written: identical configurations produce
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__

SWEEP_COLUMNS = (
    "scenario,eta_bar_db,r_eta,basis,N_A,N_B,alpha,beta,gamma,"
    "nu_minus,lambda_minus,E_nats,squeezing_db,purity"
)
MODE_COLUMNS = "basis,partition,omega_rad_s,abs_u,arg_u"
GAIN_COLUMNS = "gamma_per_m,n_photons,lambda_minus,E_nats"


def fmt(x) -> str:
    return format(float(x), ".12g")


def _header(kind: str, config: dict) -> list[str]:
    return [
        f"# lossypdc {kind}",
        "# config: " + json.dumps(config, sort_keys=True, separators=(",", ":")),
    ]


def write_sweep_csv(path, result, config: dict):
    lines = _header("sweep", config)
    lines.append(SWEEP_COLUMNS)
    for row in result.rows:
        r = row.report
        lines.append(
            ",".join(
                [row.scenario, fmt(row.eta_bar_db), fmt(row.r_eta), r.basis]
                + [
                    fmt(v)
                    for v in (
                        r.n_a, r.n_b, r.alpha, r.beta, r.gamma,
                        r.nu_minus, r.lambda_minus, r.log_negativity,
                        r.squeezing_db, r.purity,
                    )
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_mode_csv(path, result, eta_bar_db: float, config: dict):
    """Spectral profiles |u|, arg u of every basis at one sweep point."""
    lines = _header("modes", config)
    lines.append(MODE_COLUMNS)
    for row in result.rows:
        if row.eta_bar_db != eta_bar_db:
            continue
        for partition, u in (("A", row.u_a), ("B", row.u_b)):
            for w, amp in zip(result.omegas, u):
                lines.append(
                    ",".join(
                        [row.report.basis, partition, fmt(w), fmt(abs(amp)), fmt(np.angle(amp))]
                    )
                )
    Path(path).write_text("\n".join(lines) + "\n")


def write_jsi_csv(path, delta_omega, matrix, config: dict):
    """Matrix layout: first row carries the idler axis, first column the
    signal axis, both as angular-frequency offsets in rad/s."""
    lines = _header("jsi", config)
    lines.append("# first column: delta_omega_s_rad_s; first row: delta_omega_i_rad_s")
    lines.append("," + ",".join(fmt(w) for w in delta_omega))
    for i, w in enumerate(delta_omega):
        lines.append(fmt(w) + "," + ",".join(fmt(v) for v in matrix[i]))
    Path(path).write_text("\n".join(lines) + "\n")


def write_gain_csv(path, rows, config: dict):
    lines = _header("gain-sweep", config)
    lines.append(GAIN_COLUMNS)
    for row in rows:
        lines.append(
            ",".join(fmt(row[k]) for k in ("gamma_per_m", "n_photons", "lambda_minus", "E_nats"))
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_metadata(path, config: dict, extra: dict):
    meta = {"tool": "lossypdc", "version": __version__, "config": config}
    meta.update(extra)
    Path(path).write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")


def read_csv_rows(path):
    """Parse a sweep or gain CSV back into dict rows (strings preserved)."""
    lines = [l for l in Path(path).read_text().splitlines() if not l.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]
