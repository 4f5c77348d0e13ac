"""fig-render: render one figure job described by a TOML file."""

from __future__ import annotations

import argparse
import sys

from .io import FigureError
from .jobs import JobError, load_job
from .render import render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="fig-render", description=__doc__)
    parser.add_argument("--job", required=True, help="TOML job file")
    args = parser.parse_args(argv)
    try:
        job = load_job(args.job)
        out = render(job)
    except (JobError, FigureError) as exc:
        print(f"fig-render error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out['svg']} and {out['png']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
