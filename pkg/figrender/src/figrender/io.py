"""Readers for the lossypdc CSV formats (documented in its docs/config.md).

Only documented columns are consumed; anything missing fails loudly.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


class FigureError(ValueError):
    """Input data is missing, empty, or lacks documented columns."""


SWEEP_REQUIRED = (
    "eta_bar_db", "basis", "N_A", "N_B", "alpha", "beta", "gamma",
    "lambda_minus", "E_nats", "purity",
)
MODE_REQUIRED = ("basis", "partition", "omega_rad_s", "abs_u", "arg_u")
GAIN_REQUIRED = ("n_photons", "lambda_minus", "E_nats")


def _data_lines(path) -> list[str]:
    lines = [l for l in Path(path).read_text().splitlines() if l and not l.startswith("#")]
    if len(lines) < 2:
        raise FigureError(f"{path}: no data rows")
    return lines


def read_table(path, required) -> list[dict]:
    lines = _data_lines(path)
    header = lines[0].split(",")
    missing = [c for c in required if c not in header]
    if missing:
        raise FigureError(f"{path}: missing columns {missing} (have {header})")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != len(header):
            raise FigureError(f"{path}: ragged row: {line[:60]}")
        rows.append(dict(zip(header, cells)))
    return rows


def read_sweep(path):
    rows = read_table(path, SWEEP_REQUIRED)
    for r in rows:
        for k in SWEEP_REQUIRED:
            if k != "basis":
                r[k] = float(r[k])
    return rows


def read_modes(path):
    rows = read_table(path, MODE_REQUIRED)
    for r in rows:
        for k in ("omega_rad_s", "abs_u", "arg_u"):
            r[k] = float(r[k])
    return rows


def read_gain(path):
    rows = read_table(path, GAIN_REQUIRED)
    for r in rows:
        for k in GAIN_REQUIRED:
            r[k] = float(r[k])
    return rows


def read_jsi(path):
    """Matrix layout: first row = idler axis, first column = signal axis."""
    lines = _data_lines(path)
    first = lines[0].split(",")
    if first[0] != "":
        raise FigureError(f"{path}: JSI matrix must start with an axis row")
    axis_i = np.array([float(x) for x in first[1:]])
    axis_s = []
    body = []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != len(first):
            raise FigureError(f"{path}: ragged JSI row")
        axis_s.append(float(cells[0]))
        body.append([float(x) for x in cells[1:]])
    return np.array(axis_s), axis_i, np.array(body)
