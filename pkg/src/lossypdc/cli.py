"""Command-line runner: scenario sweeps, JSI maps, gain sweeps, and the
bundled three-basis comparison.

Exit codes: 0 success, 2 configuration/schema error, 3 solver convergence
or calibration failure.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .config import (
    build_scenario,
    gain_scales,
    jsi_max_photons,
    load_toml,
    resolved_config,
)
from .errors import CalibrationError, ConvergenceError, NumericalBlowupError, SchemaError
from .output import (
    fmt,
    write_gain_csv,
    write_jsi_csv,
    write_metadata,
    write_mode_csv,
    write_sweep_csv,
)
from .scenarios import grid_check, run_gain_sweep, run_jsi, run_scenario


def bundled_config_path(name: str) -> Path:
    """Path of a configuration file shipped with the package."""
    return Path(resources.files("lossypdc").joinpath("configs", name))


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lossypdc", description=__doc__)
    p.add_argument("--config", type=Path, help="TOML configuration file")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--threads", type=int, default=1, help="sweep worker threads")
    p.add_argument("--seed", type=int, default=0, help="seed recorded in metadata")
    p.add_argument(
        "--grid-check",
        action="store_true",
        help="run the step/grid doubling convergence gate before the main run",
    )
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("scenario", help="loss sweep over a waveguide scenario")
    sub.add_parser("jsi", help="low-gain joint spectral intensity map")
    sub.add_parser("gain-sweep", help="lossless metrics versus parametric gain")
    sub.add_parser("table1", help="three-basis comparison at one loss point")
    return p


def _load(args, default_bundle: str | None = None) -> dict:
    path = args.config
    if path is None:
        if default_bundle is None:
            raise SchemaError("--config is required for this command")
        path = bundled_config_path(default_bundle)
    return load_toml(path)


def _maybe_grid_check(args, sc):
    if not args.grid_check:
        return
    deltas = grid_check(sc)
    print(
        "grid check: step doubling dTr={:.2e} (pass={}), grid doubling "
        "dN={:.2e} dlam={:.2e} (pass={})".format(
            deltas["steps_total_photons_rel"],
            deltas["steps_pass"],
            deltas["grid_dominant_photons_rel"],
            deltas["grid_lambda_min_rel"],
            deltas["grid_pass"],
        )
    )
    if not (deltas["steps_pass"] and deltas["grid_pass"]):
        raise ConvergenceError("grid check failed; increase steps or grid span/points")


def _run_scenario_files(args, cfg, prefix: str):
    sc = build_scenario(cfg)
    resolved = resolved_config(cfg, sc)
    _maybe_grid_check(args, sc)
    result = run_scenario(sc, threads=max(1, args.threads))
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(out / f"{prefix}_sweep.csv", result, resolved)
    for eta in sc.eta_bar_db:
        write_mode_csv(out / f"{prefix}_modes_eta_{fmt(eta)}db.csv", result, eta, resolved)
    write_metadata(
        out / f"{prefix}_metadata.json",
        resolved,
        {
            "command": prefix,
            "seed": args.seed,
            "gamma_per_m": result.gamma,
            "grid_points": sc.grid_points,
            "grid_span_rad_s": [float(result.omegas[0]), float(result.omegas[-1])],
            "steps": sc.steps,
        },
    )
    print(f"wrote {prefix}_sweep.csv with {len(result.rows)} rows to {out}")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "scenario":
            cfg = _load(args)
            _run_scenario_files(args, cfg, build_scenario(cfg).name.lower())
        elif args.command == "table1":
            cfg = _load(args, default_bundle="wg2_table1.toml")
            _run_scenario_files(args, cfg, "table1")
        elif args.command == "jsi":
            cfg = _load(args)
            sc = build_scenario(cfg)
            resolved = resolved_config(cfg, sc)
            _maybe_grid_check(args, sc)
            delta_omega, matrix, gamma = run_jsi(sc, jsi_max_photons(cfg))
            args.out.mkdir(parents=True, exist_ok=True)
            write_jsi_csv(args.out / "jsi.csv", delta_omega, matrix, resolved)
            write_metadata(
                args.out / "jsi_metadata.json",
                resolved,
                {"command": "jsi", "seed": args.seed, "gamma_per_m": gamma,
                 "grid_points": sc.grid_points, "steps": sc.steps},
            )
            print(f"wrote jsi.csv ({matrix.shape[0]}x{matrix.shape[1]}) to {args.out}")
        elif args.command == "gain-sweep":
            cfg = _load(args)
            sc = build_scenario(cfg)
            resolved = resolved_config(cfg, sc)
            _maybe_grid_check(args, sc)
            rows = run_gain_sweep(sc, gain_scales(cfg))
            args.out.mkdir(parents=True, exist_ok=True)
            write_gain_csv(args.out / "gain_sweep.csv", rows, resolved)
            write_metadata(
                args.out / "gain_sweep_metadata.json",
                resolved,
                {"command": "gain-sweep", "seed": args.seed,
                 "grid_points": sc.grid_points, "steps": sc.steps},
            )
            print(f"wrote gain_sweep.csv with {len(rows)} rows to {args.out}")
    except SchemaError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, NumericalBlowupError, CalibrationError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
