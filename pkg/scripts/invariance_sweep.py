"""Sweep the half-width a in the double integral and report the deviation from G.

Usage: python3 scripts/invariance_sweep.py [--cdf1 normal] [--cdf2 cauchy] [--points 25]
"""
import argparse

import numpy as np

from catalankit.cdf import parse_cdf
from catalankit.constants import G_FLOAT
from catalankit.representations import double_integral


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cdf1", default="rademacher")
    ap.add_argument("--cdf2", default="rademacher")
    ap.add_argument("--points", type=int, default=25)
    args = ap.parse_args()
    g1, g2 = parse_cdf(args.cdf1), parse_cdf(args.cdf2)
    print(f"{'a':>10} {'value':>20} {'|dev|':>10} {'evals':>8}")
    for a in np.geomspace(0.1, 10.0, args.points):
        res = double_integral(g1, g2, float(a))
        print(f"{a:>10.4f} {res.value:>20.16f} {abs(res.value - G_FLOAT):>10.2e} {res.evaluations:>8}")


if __name__ == "__main__":
    main()
