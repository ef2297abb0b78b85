#!/usr/bin/env python3
"""Tabulate the three moment routes side by side at the symmetric point.

Usage: python scripts/compare_routes.py [--order 12] [--out routes.csv]
"""

import argparse
import csv

import numpy as np

from freejacobi.moments import (
    ProcessParams,
    closed_form_moments,
    expansion_moments,
    integrate_moments,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--order", type=int, default=12)
    parser.add_argument("--out", default="routes.csv")
    args = parser.parse_args()

    times = (0.25, 0.5, 1.0, 2.0, 4.0)
    traj = integrate_moments(
        ProcessParams(lam=1.0, theta=0.5), max(times), order=args.order
    )
    rows = []
    worst = 0.0
    for t in times:
        ode = traj.at(t)
        closed = closed_form_moments(t, args.order)
        expansion = expansion_moments(0.5, t, args.order)
        for n in range(args.order + 1):
            spread = max(ode[n], closed[n], expansion[n]) - min(
                ode[n], closed[n], expansion[n]
            )
            worst = max(worst, spread)
            rows.append((t, n, f"{ode[n]:.12g}", f"{closed[n]:.12g}",
                         f"{expansion[n]:.12g}", f"{spread:.3g}"))

    with open(args.out, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", "n", "ode", "closed_form", "expansion", "spread"])
        writer.writerows(rows)
    print(f"max spread across routes: {worst:.3g}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
