#!/usr/bin/env python3
"""Profile the fractional Poisson solutions f_alpha for the OU drift, h = cos.

Writes a CSV with x, f_2(x), f_alpha(x) for each requested alpha, plus the
generator residuals A f - (h - mu(h)) at a few interior points, and prints
the linear-growth-norm differences ||f_alpha - f_2|| / (1 + |x|) with their
normalizations by (2 - alpha) and by (2 - alpha) log(1/(2 - alpha)).

Usage:
    python3 scripts/poisson_profile.py [--alphas 1.8 1.9 1.95] [--out poisson_profile.csv]
"""

import argparse
import csv
import math
import sys

import numpy as np

from stable_tv_lab import PoissonProblem, drift_registry, generator_p, generator_q, lin_norm_diff
from stable_tv_lab.pde import poisson_solution_grid


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--alphas", type=float, nargs="+", default=[1.8, 1.9, 1.95, 1.99])
    parser.add_argument("--half-width", type=float, default=15.0)
    parser.add_argument("--step", type=float, default=0.01)
    parser.add_argument("--out", default="poisson_profile.csv")
    args = parser.parse_args(argv)

    ou = drift_registry("ou")
    grid = np.arange(-args.half_width, args.half_width + args.step / 2, args.step)
    probes = np.arange(-3.0, 3.0 + 1e-9, 1.0)

    f2 = poisson_solution_grid(PoissonProblem(h=np.cos, alpha=2.0, drift=ou), grid)
    mu2 = math.exp(-0.25)
    res2 = max(abs(generator_q(f2, ou, x) - (math.cos(x) - mu2)) for x in probes)
    print(f"alpha = 2.00: f(0) = {float(f2(0.0)):+.8f}, max residual {res2:.2e}")

    solutions = {}
    for alpha in sorted(args.alphas):
        fa = poisson_solution_grid(PoissonProblem(h=np.cos, alpha=alpha, drift=ou), grid)
        solutions[alpha] = fa
        mua = math.exp(-1.0 / (2.0 * alpha))
        res = max(abs(generator_p(fa, ou, alpha, x) - (math.cos(x) - mua)) for x in probes)
        eps = 2.0 - alpha
        diff = lin_norm_diff(fa, f2)
        print(
            f"alpha = {alpha:.2f}: f(0) = {float(fa(0.0)):+.8f}, max residual {res:.2e}, "
            f"||f_a - f_2|| = {diff:.6f}, /eps = {diff / eps:.4f}, "
            f"/(eps log 1/eps) = {diff / (eps * math.log(1.0 / eps)):.4f}"
        )

    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "f_2"] + [f"f_{a}" for a in sorted(solutions)])
        for i, x in enumerate(grid):
            writer.writerow([x, f2.values[i]] + [solutions[a].values[i] for a in sorted(solutions)])
    print(f"wrote {args.out} ({grid.size} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
