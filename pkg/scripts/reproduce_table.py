"""Print the exponent table for chosen (d, m, lambda) as CSV.

    python3 scripts/reproduce_table.py --d 3 --m 2 --lambda 0.25 --r 0.5 1 2
"""

import argparse
import csv
import sys

from pptdisc.exponents import REPORT_COLUMNS, CaseParams, exponents_table
from pptdisc.formatting import fmt
from pptdisc.states import TABLE_ROWS


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--d", type=int, default=3)
    parser.add_argument("--m", type=int, default=2)
    parser.add_argument("--lambda", dest="lam", type=float, default=0.5)
    parser.add_argument("--r", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    parser.add_argument("--describe", action="store_true", help="print piecewise formulas instead of values")
    args = parser.parse_args()
    params = CaseParams(d=args.d, m=args.m, lam=args.lam)
    if args.describe:
        for row, case in enumerate(TABLE_ROWS, 1):
            rep = exponents_table(case, params).to_dict()
            print(f"{row} {case:13s} chernoff={fmt(rep['chernoff'])} stein={fmt(rep['stein'])} "
                  f"hoeffding=[{rep['hoeffding']}] strong_converse=[{rep['strong_converse']}]")
        return
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for case in TABLE_ROWS:
        rep = exponents_table(case, params)
        for r in args.r:
            row = rep.evaluate(r)
            writer.writerow([row["case"]] + [fmt(row[c]) for c in REPORT_COLUMNS[1:]])


if __name__ == "__main__":
    main()
