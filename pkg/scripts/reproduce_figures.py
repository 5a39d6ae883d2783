#!/usr/bin/env python3
"""Run the bundled experiment sweeps and emit CSV + SVG artifacts.

Usage:
    python3 scripts/reproduce_figures.py [--fast] [--out DIR] [KIND ...]

With no KIND arguments, runs every sweep. --fast swaps in the small presets
(minutes instead of hours at the Erdos-Renyi scale).
"""

import argparse
import json
import pathlib
import sys
import time

from masckit.experiments import KINDS, ExperimentConfig, run_experiment


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("kinds", nargs="*", default=[], metavar="KIND")
    parser.add_argument("--fast", action="store_true")
    parser.add_argument("--out", default="figures")
    args = parser.parse_args()

    kinds = args.kinds or [k for k in KINDS if k != "custom"]
    bad = [k for k in kinds if k not in KINDS or k == "custom"]
    if bad:
        parser.error(f"unknown or unsupported kinds: {', '.join(bad)}")

    outdir = pathlib.Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for kind in kinds:
        stem = outdir / kind
        cfg_json = json.dumps(
            {
                "kind": kind,
                "output_csv": str(stem) + ".csv",
                "output_svg": str(stem) + ".svg",
            }
        )
        cfg = ExperimentConfig.from_json(cfg_json, fast=args.fast)
        t0 = time.time()
        summary = run_experiment(cfg)
        summary["seconds"] = round(time.time() - t0, 1)
        print(json.dumps(summary))
    return 0


if __name__ == "__main__":
    sys.exit(main())
