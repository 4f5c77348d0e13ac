"""Figure job definitions and the TOML job-file loader."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

KINDS = ("jsi", "gain", "loss-sweep", "cov", "modes")

# default per-basis colors: MW blue, WE green, MSq red
DEFAULT_COLORS = {"MW": "tab:blue", "WE": "tab:green", "MSq": "tab:red"}


class JobError(ValueError):
    """The job file is malformed or references missing inputs."""


@dataclass(frozen=True)
class FigureJob:
    kind: str
    input_csv: Path
    output: Path
    colors: dict = field(default_factory=lambda: dict(DEFAULT_COLORS))
    loss_db: float | None = None  # row selector for cov figures

    def __post_init__(self):
        if self.kind not in KINDS:
            raise JobError(f"job.kind: must be one of {KINDS}, got {self.kind!r}")
        if not Path(self.input_csv).exists():
            raise JobError(f"job.input_csv: file not found: {self.input_csv}")
        if Path(self.output).suffix.lower() != ".svg":
            raise JobError("job.output: must end in .svg (a .png is written alongside)")


def load_job(path) -> FigureJob:
    p = Path(path)
    if not p.exists():
        raise JobError(f"job file not found: {p}")
    with open(p, "rb") as f:
        raw = tomllib.load(f)
    job = raw.get("job")
    if not isinstance(job, dict):
        raise JobError("job: table is required")
    for key in ("kind", "input_csv", "output"):
        if key not in job:
            raise JobError(f"job.{key}: required")
    colors = dict(DEFAULT_COLORS)
    colors.update(raw.get("style", {}).get("colors", {}))
    base = p.parent
    return FigureJob(
        kind=job["kind"],
        input_csv=base / job["input_csv"],
        output=base / job["output"],
        colors=colors,
        loss_db=job.get("loss_db"),
    )
