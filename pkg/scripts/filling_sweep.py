"""Ergotropy and entropy at the charging time versus charger excitation count m."""
import argparse

from csbattery import ModelParams
from csbattery.analysis import sweep_m

from _common import write_rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--nc", type=int, default=10)
    ap.add_argument("--objective", choices=["de", "erg"], default="de")
    args = ap.parse_args()
    rows = []
    for nb in (2, 4, 6):
        base = ModelParams(B=1, h=1, A=1, delta=0, n_b=nb, n_c=args.nc, m=1)
        for m, s in sweep_m(base, (1, args.nc), objective=args.objective):
            r = s.report_at_T
            rows.append((nb, m, s.T, r.erg, r.S, r.dE))
    write_rows(f"{args.out}/sweep_m.csv", ["n_b", "m", "T", "erg_T", "S_T", "dE_T"], rows)


if __name__ == "__main__":
    main()
