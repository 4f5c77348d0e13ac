"""End-to-end pipeline: loss sweep through the CLI layer, then figures.

Runs a reduced WG2 sweep with the scenario runner, writes the documented
CSV outputs, and (when figrender is installed) renders the loss-sweep and
mode-profile figures from those files alone.  Runtime: ~20 s.
"""

from pathlib import Path

from lossypdc.cli import bundled_config_path, main

out = Path("demo_output")
rc = main(
    [
        "--config", str(bundled_config_path("quick_sweep_wg2.toml")),
        "--out", str(out),
        "--threads", "2",
        "scenario",
    ]
)
assert rc == 0
print("CSV outputs:", sorted(p.name for p in out.iterdir()))

try:
    from figrender.jobs import FigureJob
    from figrender.render import render
except ImportError:
    print("figrender not installed; skipping figure rendering")
else:
    figs = out / "figures"
    loss = render(FigureJob(kind="loss-sweep", input_csv=out / "wg2_sweep.csv",
                            output=figs / "loss_sweep.svg"))
    print(f"loss-sweep figure: {loss['svg']} (separable region(s): "
          f"{loss['shaded_intervals'] or 'none'})")
    modes = render(FigureJob(kind="modes", input_csv=out / "wg2_modes_eta_6db.csv",
                             output=figs / "modes.svg"))
    print(f"mode-profile figure: {modes['svg']}")
