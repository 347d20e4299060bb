"""Command-line entry point: stable-tv-lab <campaign> [--config FILE] ...

Exit status is nonzero iff at least one check fails.  STABLE_TV_LAB_SEED
and STABLE_TV_LAB_WORKERS override seed and worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from stable_tv_lab.campaigns import CAMPAIGNS, ExperimentConfig, run_campaign


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stable-tv-lab")
    parser.add_argument("campaign", choices=sorted(CAMPAIGNS))
    parser.add_argument("--config", help="JSON config file {seed, params, output_dir}")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default=None, help="output directory for report.json and data/")
    parser.add_argument("--workers", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    seed = args.seed
    if seed is None and "STABLE_TV_LAB_SEED" in os.environ:
        seed = int(os.environ["STABLE_TV_LAB_SEED"])
    workers = args.workers
    if workers is None and "STABLE_TV_LAB_WORKERS" in os.environ:
        workers = int(os.environ["STABLE_TV_LAB_WORKERS"])
    if args.config:
        cfg = ExperimentConfig.from_file(
            args.config, campaign=args.campaign, seed=seed, output_dir=args.out, workers=workers
        )
    else:
        cfg = ExperimentConfig(
            campaign=args.campaign,
            seed=seed if seed is not None else 0,
            output_dir=args.out,
            workers=workers if workers is not None else 1,
        )
    report = run_campaign(cfg)
    json.dump(report.as_dict(), sys.stdout, indent=2)
    print()
    return 0 if report.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
