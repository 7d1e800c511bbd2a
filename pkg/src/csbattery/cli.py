"""Command-line entry point: ``csbattery {trace,charge,sweep,regimes,oracle-check}``.

Exit codes: 0 ok, 2 invalid parameters (or system too large for the
oracle), 3 output I/O failure, 4 nothing can charge, 5 oracle deviation
above 1e-9.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import analysis, oracle
from .dynamics import default_grid, trace
from .errors import InvalidParams, NoChargingPossible, TooLarge
from .model import ModelParams, build_hamiltonian
from .spectral import diagonalize

EXIT_OK, EXIT_PARAMS, EXIT_IO, EXIT_NO_CHARGE, EXIT_DEVIATION = 0, 2, 3, 4, 5
ORACLE_TOL = 1e-9

COMMANDS = ("trace", "charge", "sweep", "regimes", "oracle-check")


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: ModelParams
    tmax: float | None
    steps: int | None
    objective: str
    out: str | None
    format: str
    m_range: tuple[int, int] | None = None


def _num(x):
    """Shortest round-trip decimal; blank for missing values."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _default_tmax(p: ModelParams) -> float:
    try:
        return analysis.charging_window(diagonalize(build_hamiltonian(p)))[1]
    except NoChargingPossible:
        return 2 * math.pi / p.B


def _table(header, rows, fmt) -> str:
    if fmt == "json":
        return json.dumps({"columns": list(header), "rows": [list(r) for r in rows]}, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_num(v) for v in row])
    return buf.getvalue()


def _record(obj: dict, fmt) -> str:
    if fmt == "csv":
        flat = {}
        for key, value in obj.items():
            if isinstance(value, list):
                for i, v in enumerate(value):
                    flat[f"{key}{i}"] = v
            else:
                flat[key] = value
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(flat)
        writer.writerow([v if isinstance(v, str) else _num(v) for v in flat.values()])
        return buf.getvalue()
    return json.dumps(obj, indent=2) + "\n"


def cmd_trace(cfg: RunConfig) -> str:
    p = cfg.params
    tmax = cfg.tmax if cfg.tmax is not None else _default_tmax(p)
    tr = trace(p, default_grid(tmax, cfg.steps or 2048))
    header = ["t", *(f"p{j}" for j in range(p.dim)), "S", "dE", "erg"]
    rows = [
        [tr.t[i], *tr.populations[i], tr.S[i], tr.dE[i], tr.erg[i]]
        for i in range(len(tr))
    ]
    return _table(header, rows, cfg.format)


def _search_kwargs(cfg: RunConfig) -> dict:
    kw = {"objective": cfg.objective}
    if cfg.tmax is not None:
        kw["window"] = (0.0, cfg.tmax)
    if cfg.steps is not None:
        kw["samples"] = cfg.steps
    return kw


def cmd_charge(cfg: RunConfig) -> str:
    s = analysis.find_charging_time(cfg.params, **_search_kwargs(cfg))
    r = s.report_at_T
    obj = {
        "T": s.T,
        "dE_T": r.dE,
        "erg_T": r.erg,
        "S_T": r.S,
        "Ep_T": r.Ep,
        "populations_T": [float(x) for x in s.populations_at_T.p],
        "objective": s.objective,
        "window": list(s.window),
    }
    return _record(obj, cfg.format)


def cmd_sweep(cfg: RunConfig) -> str:
    rows = [
        [m, s.T, s.report_at_T.erg, s.report_at_T.S, s.report_at_T.dE]
        for m, s in analysis.sweep_m(cfg.params, cfg.m_range, **_search_kwargs(cfg))
    ]
    return _table(["m", "T", "erg_T", "S_T", "dE_T"], rows, cfg.format)


def cmd_regimes(cfg: RunConfig) -> str:
    rows = []
    for m, s in analysis.sweep_m(cfg.params, cfg.m_range, **_search_kwargs(cfg)):
        pred = analysis.predict_regimes(replace(cfg.params, m=m))
        rows.append([m, s.T, pred.T_tc, pred.T_ntc])
    return _table(["m", "T_measured", "T_tc", "T_ntc"], rows, cfg.format)


def cmd_oracle_check(cfg: RunConfig) -> tuple[str, bool]:
    p = cfg.params
    if p.n_b + p.n_c > oracle.MAX_QUBITS:
        raise TooLarge(f"n_b + n_c = {p.n_b + p.n_c} exceeds {oracle.MAX_QUBITS}")
    tmax = cfg.tmax if cfg.tmax is not None else _default_tmax(p)
    times = default_grid(tmax, cfg.steps or 20)
    report = oracle.compare(p, times)
    passed = report.passed(ORACLE_TOL)
    obj = report.as_dict() | {"tolerance": ORACLE_TOL, "passed": passed}
    return _record(obj, cfg.format), passed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csbattery",
        description="Exact dynamics of the central-spin quantum battery.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--nb", type=int, required=True, help="battery cells N_b")
        sp.add_argument("--nc", type=int, required=True, help="charger units N_c")
        sp.add_argument("--m", type=int, required=name not in ("sweep", "regimes"),
                        help="charger spins up at t=0")
        sp.add_argument("--B", type=float, default=1.0)
        sp.add_argument("--h", type=float, default=1.0)
        sp.add_argument("--A", type=float, default=1.0)
        sp.add_argument("--delta", type=float, default=0.0)
        sp.add_argument("--tmax", type=float, default=None,
                        help="end of the time grid / search window")
        sp.add_argument("--steps", type=int, default=None,
                        help="grid points (trace, oracle-check) or search samples")
        sp.add_argument("--objective", choices=("de", "erg"), default="de")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        default_fmt = "json" if name in ("charge", "oracle-check") else "csv"
        sp.add_argument("--format", choices=("csv", "json"), default=default_fmt)
        if name in ("sweep", "regimes"):
            sp.add_argument("--m-min", type=int, default=1)
            sp.add_argument("--m-max", type=int, default=None)
    return parser


def _config(args) -> RunConfig:
    m_range = None
    m = args.m
    if args.command in ("sweep", "regimes"):
        m_max = args.m_max if args.m_max is not None else args.nc
        m_range = (args.m_min, m_max)
        if m is None:
            m = args.m_min
    params = ModelParams(B=args.B, h=args.h, A=args.A, delta=args.delta,
                         n_b=args.nb, n_c=args.nc, m=m)
    if m_range is not None and not 1 <= m_range[0] <= m_range[1] <= params.n_c:
        raise InvalidParams("m", f"need 1 <= m-min <= m-max <= nc, got {m_range}")
    if args.steps is not None and args.steps < 1:
        raise InvalidParams("steps", "must be >= 1")
    if args.tmax is not None and not (math.isfinite(args.tmax) and args.tmax > 0):
        raise InvalidParams("tmax", "must be finite and > 0")
    return RunConfig(args.command, params, args.tmax, args.steps, args.objective,
                     args.out, args.format, m_range)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    status = EXIT_OK
    try:
        cfg = _config(args)
        if cfg.command == "oracle-check":
            text, passed = cmd_oracle_check(cfg)
            status = EXIT_OK if passed else EXIT_DEVIATION
        else:
            handler = {"trace": cmd_trace, "charge": cmd_charge,
                       "sweep": cmd_sweep, "regimes": cmd_regimes}[cfg.command]
            text = handler(cfg)
    except (InvalidParams, TooLarge, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except NoChargingPossible as exc:
        print(f"error: NoChargingPossible: {exc}", file=sys.stderr)
        return EXIT_NO_CHARGE
    try:
        if cfg.out is None:
            sys.stdout.write(text)
        else:
            with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return status


if __name__ == "__main__":
    sys.exit(main())
