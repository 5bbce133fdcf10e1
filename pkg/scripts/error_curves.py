"""Exact PPT error against copy number, three routes side by side.

For Phi_d against its complement: the closed form, the symmetric LP, the
certified lower bound, and the one-way LOCC test that attains it.  The
fitted slope of -log P_e is printed at the end.

    python3 scripts/error_curves.py --d 3 --p 0.4 --n-max 8
"""

import argparse
import math

from pptdisc.exponents import empirical_exponent
from pptdisc.formatting import fmt
from pptdisc.ppt import exp_lower_bound
from pptdisc.states import schmidt_state
from pptdisc.symmetric_lp import locc_achievability, solve_symmetric_lp


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--d", type=int, default=2)
    parser.add_argument("--p", type=float, default=0.5)
    parser.add_argument("--n-max", type=int, default=6)
    args = parser.parse_args()

    phi = schmidt_state([1 / args.d] * args.d)
    print("n  closed_form         lp                  lower_cert          locc")
    pts = []
    for n in range(1, args.n_max + 1):
        closed = min((1 - args.p) * (args.d + 1.0) ** -n, args.p)
        lp = solve_symmetric_lp(n, args.d, args.p).value
        cert = exp_lower_bound(phi, args.p, n).bound
        locc = locc_achievability(n, args.d, args.p).value
        pts.append((n, lp))
        print(f"{n:<2d} {fmt(closed):19s} {fmt(lp):19s} {fmt(cert):19s} {fmt(locc)}")
    if len(pts) > 1:
        print(f"fitted exponent {fmt(empirical_exponent(pts))}  (log(d+1) = {fmt(math.log(args.d + 1))})")


if __name__ == "__main__":
    main()
