#!/usr/bin/env python3
"""Convergence tables for the split-integral asymptotics.

Prints, over a degree ladder at fixed z: the ratio of the descent-contour
integral to its leading saddle-point term (should approach 1 like 1/n), and
the n-th root of the endpoint tail factor (should approach 1).

    python scripts/asymptotics_table.py --alpha-re 1 --alpha-im 1 \
        --z 1.2,0.3 --n 10,20,40,80
"""

import argparse
import math
import sys

from hypzero.flows import classify_region
from hypzero.kernel import Alpha
from hypzero.quadrature import descent_integral, endpoint_integral
from hypzero.saddle import descent_integral_estimate


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha-re", type=float, default=1.0)
    ap.add_argument("--alpha-im", type=float, default=1.0)
    ap.add_argument("--z", default="1.2,0.3")
    ap.add_argument("--n", default="10,20,40,80")
    args = ap.parse_args()

    alpha = Alpha(args.alpha_re, args.alpha_im)
    re_s, _, im_s = args.z.partition(",")
    z = complex(float(re_s), float(im_s or 0))
    label = classify_region(z, alpha)
    print(f"z = {z}  region: {label.label} (margin {label.margin:.3g})")
    if label.label != "InE":
        print("point is outside the admissible region; aborting")
        return 1

    print(f"{'n':>5} {'|I1|/leading':>13} {'n*|ratio-1|':>12} "
          f"{'|K|^(1/n)':>10}")
    for n in (int(s) for s in args.n.split(",")):
        i1 = descent_integral(n, alpha, z, epsilon=1e-5, check_region=False)
        est = descent_integral_estimate(n, z, alpha)
        ratio = math.exp(i1.log_modulus - est.log_modulus)
        k = endpoint_integral(n, alpha, z, check_region=False).k_value
        print(f"{n:>5} {ratio:>13.6f} {abs(ratio-1)*n:>12.3f} "
              f"{abs(k) ** (1.0 / n):>10.5f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
