"""Charging traces for one, two and ten battery cells.

Writes one CSV per case with t, S, dE and ergotropy over two charging periods.
"""
import argparse

import numpy as np

from csbattery import ModelParams
from csbattery.analysis import find_charging_time
from csbattery.dynamics import trace

from _common import write_rows

CASES = {
    "single_cell": ModelParams(B=1, h=4, A=1, delta=0, n_b=1, n_c=20, m=20),
    "two_cells": ModelParams(B=1, h=1, A=1, delta=0, n_b=2, n_c=200, m=100),
    "ten_cells": ModelParams(B=1, h=1, A=1, delta=0, n_b=10, n_c=20, m=20),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--steps", type=int, default=2049)
    args = ap.parse_args()
    for name, p in CASES.items():
        s = find_charging_time(p)
        tr = trace(p, np.linspace(0, 2 * s.T, args.steps))
        rows = zip(tr.t, tr.S, tr.dE, tr.erg)
        write_rows(f"{args.out}/traces_{name}.csv", ["t", "S", "dE", "erg"], list(rows))
        print(f"  {name}: T={s.T:.6g} erg(T)={s.report_at_T.erg:.6g} S(T)={s.report_at_T.S:.3g}")


if __name__ == "__main__":
    main()
