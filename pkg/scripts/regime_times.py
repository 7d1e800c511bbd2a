"""Measured charging time against the low-filling and half-filling predictions."""
import argparse
from dataclasses import replace

from csbattery import ModelParams
from csbattery.analysis import find_charging_time, predict_regimes

from _common import write_rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--nb", type=int, default=2)
    ap.add_argument("--nc", type=int, default=500)
    ap.add_argument("--stride", type=int, default=1)
    args = ap.parse_args()
    base = ModelParams(B=1, h=1, A=1, delta=0, n_b=args.nb, n_c=args.nc, m=1)
    rows = []
    for m in range(1, args.nc + 1, args.stride):
        p = replace(base, m=m)
        pred = predict_regimes(p)
        T = find_charging_time(p).T
        rows.append((m, pred.k, T, pred.T_tc, "" if pred.T_ntc is None else pred.T_ntc))
    write_rows(f"{args.out}/regimes.csv", ["m", "k", "T_measured", "T_tc", "T_ntc"], rows)


if __name__ == "__main__":
    main()
