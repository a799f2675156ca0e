"""Write the data behind the four state-space figures as CSV, plus a JSON summary.

fig1.csv   N=4: state triangle, its partial time reversal, PPT polygon.
fig2.csv   State triangle and PPT polygon for several N.
fig3.csv   N=4: PPT polygon, line h through F, ellipse arc and a sampled cloud.
fig4.csv   epsilon_0(lambda) for several N.

Usage
-----
PYTHONPATH=. python scripts/reproduce_figures.py --seed 7
PYTHONPATH=. python scripts/reproduce_figures.py --seed 7 --samples 50000 --out-dir figures
"""

from __future__ import annotations

import argparse
import json
import logging
from pathlib import Path

import pandas as pd

# ---------------------------------------------------------------------------
# Defaults
# ---------------------------------------------------------------------------

DEFAULT_OUT_DIR = Path("figures")
DEFAULT_SAMPLES = 20_000
FIG2_N = (3, 4, 8)
FIG4_N = (3, 4, 5, 6, 8, 10)


def _stacked(name: str, inputs: dict, parts: dict[int, pd.DataFrame], results: dict):
    from src.cli.records import OutputRecord  # noqa: PLC0415
    from src.config import get_settings  # noqa: PLC0415

    table = pd.concat(
        [part.assign(N=n) for n, part in parts.items()], ignore_index=True
    )
    record = OutputRecord(
        command=f"figures {name}",
        inputs=inputs,
        tolerance=get_settings().numerics.region_tol,
        results=results,
    )
    return record, table


def main() -> None:
    from src.cli.commands import cmd_epsilon, cmd_geometry  # noqa: PLC0415
    from src.cli.records import write_record  # noqa: PLC0415
    from src.config import SAMPLING_SCHEMES  # noqa: PLC0415
    from src.separability.geometry import ppt_polygon, state_triangle  # noqa: PLC0415

    parser = argparse.ArgumentParser(description="Write figure data for 3 x N geometry")
    parser.add_argument("--seed", type=int, required=True, help="Seed for the fig3 cloud")
    parser.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    parser.add_argument("--scheme", choices=SAMPLING_SCHEMES, default="haar")
    parser.add_argument("--grid", type=int, default=None, help="lambda grid for fig4")
    parser.add_argument("--out-dir", type=Path, default=DEFAULT_OUT_DIR)
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args.out_dir.mkdir(parents=True, exist_ok=True)
    summary: dict[str, dict] = {}

    fig1 = cmd_geometry(4)
    write_record(fig1.record, fig1.table, "csv", args.out_dir / "fig1.csv")
    summary["fig1"] = {"points": fig1.record.results["points"]}

    geometries = {n: cmd_geometry(n) for n in FIG2_N}
    record, table = _stacked(
        "fig2",
        {"N": list(FIG2_N)},
        {n: g.table for n, g in geometries.items()},
        {
            "areas": {
                str(n): {
                    "state_triangle": state_triangle(n).area,
                    "ppt_polygon": ppt_polygon(n).area,
                }
                for n in FIG2_N
            }
        },
    )
    write_record(record, table, "csv", args.out_dir / "fig2.csv")
    summary["fig2"] = {
        str(n): g.record.results["large_n_trend"] for n, g in geometries.items()
    }

    fig3 = cmd_geometry(4, samples=args.samples, seed=args.seed, scheme=args.scheme)
    write_record(fig3.record, fig3.table, "csv", args.out_dir / "fig3.csv")
    summary["fig3"] = {
        "F": fig3.record.results["points"]["F"],
        "witness_line_beta2": fig3.record.results["witness_line_beta2"],
        "samples": args.samples,
        "seed": args.seed,
    }

    curves = {n: cmd_epsilon(n, grid=args.grid) for n in FIG4_N}
    record, table = _stacked(
        "fig4",
        {"N": list(FIG4_N), "grid": args.grid},
        {n: c.table for n, c in curves.items()},
        {"columns": ["lam", "eps0", "first_diff", "second_diff", "N"]},
    )
    write_record(record, table, "csv", args.out_dir / "fig4.csv")
    summary["fig4"] = {
        str(n): {
            key: c.record.results[key]
            for key in ("eps0_at_1", "closed_form_at_1", "monotone", "convex")
        }
        for n, c in curves.items()
    }

    path = args.out_dir / "summary.json"
    path.write_text(json.dumps(summary, indent=2))
    print(f"Figure data written to {args.out_dir}/")


if __name__ == "__main__":
    main()
