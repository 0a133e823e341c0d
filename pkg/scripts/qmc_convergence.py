"""Standard error and deviation of the QMC estimate versus sample count.

Usage: python3 scripts/qmc_convergence.py [--r 4] [--max-log2 20] [--seed 1]
"""
import argparse

from catalankit.cdf import make_builtin
from catalankit.constants import G_FLOAT
from catalankit.representations import RepresentationSpec, multi_integral


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, default=4)
    ap.add_argument("--cdf", default="rademacher")
    ap.add_argument("--min-log2", type=int, default=12)
    ap.add_argument("--max-log2", type=int, default=20)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    spec = RepresentationSpec.build([make_builtin(args.cdf)] * args.r)
    print(f"{'n':>9} {'value':>20} {'std err':>10} {'|dev|':>10} {'dev/se':>7}")
    for k in range(args.min_log2, args.max_log2 + 1):
        res = multi_integral(spec, n_samples=2**k, seed=args.seed)
        dev = abs(res.value - G_FLOAT)
        ratio = dev / res.error_estimate if res.error_estimate else float("nan")
        print(f"{2**k:>9} {res.value:>20.15f} {res.error_estimate:>10.2e} {dev:>10.2e} {ratio:>7.2f}")


if __name__ == "__main__":
    main()
