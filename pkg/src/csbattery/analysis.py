"""Charging-time search, m sweeps, closed-form predictors and the entropy/ergotropy checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import xlogy

from . import thermo
from .dynamics import (
    SYMMETRY_RTOL,
    BatteryPopulations,
    ladder_populations,
    symmetric_frequency,
)
from .errors import (
    DegenerateFilling,
    NoChargingPossible,
    OutOfRangeM,
    PropertyViolation,
    UnsupportedRegime,
    WrongCellCount,
)
from .model import ModelParams, build_hamiltonian
from .spectral import Spectrum, diagonalize, is_symmetric_charging

__all__ = [
    "ChargingSummary",
    "RegimePrediction",
    "TheoremReport",
    "OBJECTIVES",
    "charging_window",
    "find_charging_time",
    "sweep_m",
    "predict_tc_time",
    "predict_ntc_time",
    "predict_regimes",
    "ergotropy_at_T_nb1",
    "ergotropy_at_T_nb2_formula",
    "piecewise_nb2",
    "antiorder_violations",
    "check_single_cell_antiorder",
    "check_two_cell_charged_state",
    "check_sweep_antiorder",
    "check_theorems",
]

OBJECTIVES = {
    "de": "injected-energy",
    "injected-energy": "injected-energy",
    "erg": "ergotropy",
    "ergotropy": "ergotropy",
}
DEFAULT_SAMPLES = 4096
# how many of the best sampled local maxima get refined
_CANDIDATES = 8
# pairs closer than this in either quantity are not ordered
ORDER_TOL = 1e-9


@dataclass(frozen=True)
class ChargingSummary:
    T: float
    report_at_T: thermo.ThermoReport
    populations_at_T: BatteryPopulations
    objective: str
    window: tuple[float, float]
    samples: int


@dataclass(frozen=True)
class RegimePrediction:
    k: float
    T_tc: float
    T_ntc: float | None


def _objective_name(objective: str) -> str:
    try:
        return OBJECTIVES[objective]
    except KeyError:
        raise ValueError(
            f"unknown objective {objective!r}; choose from {sorted(OBJECTIVES)}"
        ) from None


def charging_window(spectrum: Spectrum) -> tuple[float, float]:
    """[0, 2 pi / g_min] with g_min the smallest nonzero eigenvalue gap."""
    gaps = spectrum.gaps()
    scale = max(1.0, float(np.max(np.abs(spectrum.eigenvalues))))
    gaps = gaps[gaps > 1e-12 * scale]
    if gaps.size == 0:
        raise NoChargingPossible("spectrum has no nonzero gap; nothing evolves")
    return 0.0, 2 * math.pi / float(gaps.min())


def _objective_values(p, spectrum, times, name) -> np.ndarray:
    pops, _ = ladder_populations(spectrum, times)
    E = thermo.energy_of(pops, p)
    if name == "injected-energy":
        return E - p.ground_energy
    return E - thermo.passive_energy_of(pops, p)


def _local_maxima(f: np.ndarray) -> np.ndarray:
    if f.size == 1:
        return np.zeros(1, dtype=int)
    left = np.concatenate(([True], f[1:] >= f[:-1]))
    right = np.concatenate((f[:-1] >= f[1:], [True]))
    return np.flatnonzero(left & right)


def find_charging_time(
    p: ModelParams,
    objective: str = "de",
    window: tuple[float, float] | None = None,
    samples: int = DEFAULT_SAMPLES,
) -> ChargingSummary:
    """Time of the largest injected energy (``"de"``) or ergotropy (``"erg"``).

    Samples the window on a uniform grid, then refines the best sampled
    local maxima with bounded Brent (parabolic) steps down to 1e-10 of the
    window length.  Ties go to the earliest time.
    """
    name = _objective_name(objective)
    if p.A == 0 or p.m == 0:
        raise NoChargingPossible(
            f"objective is identically zero (A={p.A}, m={p.m})"
        )
    if samples < 3:
        raise ValueError("need at least 3 samples")
    spectrum = diagonalize(build_hamiltonian(p))
    if window is None:
        window = charging_window(spectrum)
    lo, hi = float(window[0]), float(window[1])
    if not (0 <= lo < hi and math.isfinite(hi)):
        raise ValueError(f"bad search window {window!r}")

    grid = np.linspace(lo, hi, samples)
    f = _objective_values(p, spectrum, grid, name)
    peaks = _local_maxima(f)
    peaks = peaks[np.argsort(-f[peaks], kind="stable")][:_CANDIDATES]

    def negated(t):
        return -float(_objective_values(p, spectrum, [t], name)[0])

    xatol = 1e-10 * (hi - lo)
    best_t, best_f = None, -math.inf
    tie = 1e-12 * max(1.0, float(np.max(np.abs(f))))
    for i in sorted(peaks):
        a, b = grid[max(i - 1, 0)], grid[min(i + 1, samples - 1)]
        t, value = grid[i], f[i]
        res = minimize_scalar(negated, bounds=(a, b), method="bounded",
                              options={"xatol": xatol})
        if -res.fun > value:
            t, value = float(res.x), -float(res.fun)
        if value > best_f + tie:
            best_t, best_f = float(t), float(value)

    pops = BatteryPopulations(best_t, ladder_populations(spectrum, [best_t])[0][0], p)
    return ChargingSummary(
        T=best_t,
        report_at_T=thermo.report(pops),
        populations_at_T=pops,
        objective=name,
        window=(lo, hi),
        samples=samples,
    )


def sweep_m(
    p: ModelParams,
    m_range: tuple[int, int],
    objective: str = "de",
    window: tuple[float, float] | None = None,
    samples: int = DEFAULT_SAMPLES,
) -> list[tuple[int, ChargingSummary]]:
    """Charging summaries for m = m_range[0] .. m_range[1] inclusive."""
    m_min, m_max = m_range
    if not 1 <= m_min <= m_max <= p.n_c:
        raise OutOfRangeM("m", f"need 1 <= m_min <= m_max <= n_c, got {m_range!r}")
    return [
        (m, find_charging_time(replace(p, m=m), objective, window, samples))
        for m in range(m_min, m_max + 1)
    ]


def predict_tc_time(p: ModelParams) -> float:
    """Tavis-Cummings-limit charging time pi / (2 A sqrt(m n_c))."""
    if p.m < 1:
        raise DegenerateFilling("m must be >= 1")
    return math.pi / (2 * p.A * math.sqrt(p.m * p.n_c))


def predict_ntc_time(p: ModelParams) -> float:
    """Non-TC-limit charging time pi / (2 A sqrt(k(1-k)) n_c), k = m / n_c.

    Only A, n_c and m enter; the battery size and the fields do not.
    """
    if p.m == 0 or p.m == p.n_c:
        raise DegenerateFilling(f"k(1-k) = 0 for m = {p.m}, n_c = {p.n_c}")
    k = p.m / p.n_c
    return math.pi / (2 * p.A * math.sqrt(k * (1 - k)) * p.n_c)


def predict_regimes(p: ModelParams) -> RegimePrediction:
    try:
        t_ntc = predict_ntc_time(p)
    except DegenerateFilling:
        t_ntc = None
    return RegimePrediction(k=p.m / p.n_c, T_tc=predict_tc_time(p), T_ntc=t_ntc)


def ergotropy_at_T_nb1(p: ModelParams) -> float:
    """Closed-form one-cell ergotropy at the charging time (delta = 0).

    This is -B r(T) without clipping; it goes negative when the coupling is
    too weak to invert the cell, where the true ergotropy is zero.
    """
    if p.n_b != 1:
        raise WrongCellCount(f"needs n_b == 1, got {p.n_b}")
    if p.delta != 0:
        raise UnsupportedRegime("closed form assumes delta == 0")
    if p.A == 0 or p.m == 0:
        raise NoChargingPossible("no charging for A == 0 or m == 0")
    detuning2 = (p.h - p.B) ** 2
    return p.B * (1 - 2 * detuning2 / (4 * p.A**2 * p.m * (p.n_c - p.m + 1) + detuning2))


def ergotropy_at_T_nb2_formula(p: ModelParams) -> float:
    """Closed-form two-cell ergotropy at T, 2B[-1 + 8 / (u1^2/u2^2 + u2^2/u1^2 + 2)].

    Agrees with the sorted-population ergotropy only at u1 == u2; elsewhere it
    puts the second largest population on the top level and undercounts by
    B (u1^2 - u2^2)^2 / (u1^2 + u2^2)^2.
    """
    if p.n_b != 2:
        raise WrongCellCount(f"needs n_b == 2, got {p.n_b}")
    if not is_symmetric_charging(p):
        raise UnsupportedRegime("closed form needs h == B and delta == 0")
    if p.m < 2:
        raise UnsupportedRegime("closed form needs m >= 2")
    if p.A == 0:
        raise NoChargingPossible("no charging for A == 0")
    u1sq, u2sq = build_hamiltonian(p).offdiag ** 2
    return 2 * p.B * (-1 + 8 / (u1sq / u2sq + u2sq / u1sq + 2))


def ergotropy_at_T_nb2_sorted(p: ModelParams) -> float:
    """Sorted-population ergotropy at cos(omega T) = -1 for two cells, h = B, delta = 0."""
    if p.n_b != 2:
        raise WrongCellCount(f"needs n_b == 2, got {p.n_b}")
    if not is_symmetric_charging(p) or p.m < 2:
        raise UnsupportedRegime("needs h == B, delta == 0, m >= 2")
    u1sq, u2sq = build_hamiltonian(p).offdiag ** 2
    w4 = (u1sq + u2sq) ** 2
    pops = BatteryPopulations(math.nan, [(u2sq - u1sq) ** 2 / w4, 0.0, 4 * u1sq * u2sq / w4], p)
    return thermo.ergotropy(pops)


def piecewise_nb2(p: ModelParams, t: float) -> tuple[float, float]:
    """(ergotropy, entropy) from the symmetric two-cell closed forms.

    Branches switch at cos(omega t) = 1/3, 0, -1/3, i.e. at t1, t*, t2 on
    the first charging cycle; selecting by x = cos(omega t) keeps the
    expressions valid past T as well.
    """
    omega = symmetric_frequency(p)
    x = math.cos(omega * t)
    if x > 1 / 3:
        erg = 0.0
    elif x > 0:
        erg = -0.75 * (x + 1 / 3) ** 2 + 1 / 3
    elif x > -1 / 3:
        erg = -0.75 * (x + 1) ** 2 + 1
    else:
        erg = -2 * x
    ln2 = math.log(2)
    S = (
        1.5
        + 0.5 * x * x
        - 0.5 * xlogy((x + 1) ** 2, x + 1) / ln2
        - 0.5 * xlogy((x - 1) ** 2, 1 - x) / ln2
        - 0.5 * xlogy(1 - x * x, 1 - x * x) / ln2
    )
    return p.B * erg, float(S)


def nb2_breakpoints(p: ModelParams) -> dict[str, float]:
    omega = symmetric_frequency(p)
    return {
        "t1": math.acos(1 / 3) / omega,
        "t_star": math.pi / (2 * omega),
        "t2": math.acos(-1 / 3) / omega,
        "T": math.pi / omega,
    }


def antiorder_violations(a, b, pairs=None, tol: float = ORDER_TOL) -> list[tuple[int, int]]:
    """Index pairs where ``a`` and ``b`` are ordered the same way.

    Pairs whose ``a`` or ``b`` values differ by no more than ``tol`` are not
    compared.  ``pairs`` defaults to all i < j.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if pairs is None:
        i, j = np.triu_indices(a.size, 1)
    else:
        pairs = np.asarray(pairs, dtype=int).reshape(-1, 2)
        i, j = pairs[:, 0], pairs[:, 1]
    da = a[i] - a[j]
    db = b[i] - b[j]
    compared = (np.abs(da) > tol) & (np.abs(db) > tol)
    bad = compared & (np.sign(da) == np.sign(db))
    return list(zip(i[bad].tolist(), j[bad].tolist()))


@dataclass
class TheoremReport:
    """Outcome of each check: True passed, None not applicable."""

    single_cell: bool | None = None
    two_cell: bool | None = None
    sweep_antiorder: bool | None = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v is not False for v in (self.single_cell, self.two_cell, self.sweep_antiorder))


def check_single_cell_antiorder(p: ModelParams, times=None, pairs=None) -> dict:
    """One cell: wherever the ergotropy is positive it is anti-ordered with entropy.

    ``times`` may be any nonnegative sample (unsorted is fine); ``pairs``
    indexes into it and defaults to every pair of charged points.
    """
    if p.n_b != 1:
        raise WrongCellCount(f"needs n_b == 1, got {p.n_b}")
    spectrum = diagonalize(build_hamiltonian(p))
    if times is None:
        times = np.linspace(0.0, charging_window(spectrum)[1], 2048)
    times = np.asarray(times, dtype=float)
    pops, _ = ladder_populations(spectrum, times)
    E = thermo.energy_of(pops, p)
    erg = E - thermo.passive_energy_of(pops, p)
    S = thermo.entropy_of(pops)
    charged = np.flatnonzero(erg > ORDER_TOL)
    if pairs is not None:
        pairs = np.asarray(pairs, dtype=int).reshape(-1, 2)
        pairs = pairs[np.isin(pairs, charged).all(axis=1)]
        bad = antiorder_violations(erg, S, pairs)
        n_pairs = len(pairs)
    else:
        sub = antiorder_violations(erg[charged], S[charged])
        bad = [(int(charged[i]), int(charged[j])) for i, j in sub]
        n_pairs = charged.size * (charged.size - 1) // 2
    if bad:
        i, j = bad[0]
        raise PropertyViolation(
            "single cell: ergotropy and entropy ordered alike",
            {"t": (times[i], times[j]), "erg": (erg[i], erg[j]), "S": (S[i], S[j])},
        )
    return {"pairs_checked": int(n_pairs), "charged_points": int(charged.size)}


def check_two_cell_charged_state(p: ModelParams, tol: float = 1e-8) -> dict:
    """Two cells, h = B, delta = 0: the middle level is empty at the charging time."""
    if p.n_b != 2:
        raise WrongCellCount(f"needs n_b == 2, got {p.n_b}")
    if not is_symmetric_charging(p) or p.m < 2:
        raise UnsupportedRegime("needs h == B, delta == 0, m >= 2")
    summary = find_charging_time(p, "de")
    p1 = float(summary.populations_at_T.p[1])
    u1, u2 = build_hamiltonian(p).offdiag
    cos_wT = math.cos(math.hypot(u1, u2) * summary.T)
    if p1 > tol:
        raise PropertyViolation(
            f"two cells: middle population {p1:.3e} > {tol:g} at T",
            {"T": summary.T, "p1": p1, "cos_omega_T": cos_wT},
        )
    return {"T": summary.T, "p1": p1, "cos_omega_T": cos_wT}


def check_sweep_antiorder(
    p: ModelParams,
    m_range: tuple[int, int] | None = None,
    objective: str = "de",
    summaries=None,
) -> dict:
    """Across charger fillings m, E(T) must fall as S(T) rises.

    ``m_range`` defaults to (n_b, n_c).  Below m = n_b the ladder is cut
    short: m = 1 transfers its one excitation completely, giving S(T) = 0
    with small ergotropy, which breaks the ordering against every other m.
    """
    if summaries is None:
        summaries = sweep_m(p, m_range or (min(p.n_b, p.n_c), p.n_c), objective)
    ms = [m for m, _ in summaries]
    erg = [s.report_at_T.erg for _, s in summaries]
    S = [s.report_at_T.S for _, s in summaries]
    bad = antiorder_violations(erg, S)
    if bad:
        i, j = bad[0]
        raise PropertyViolation(
            "sweep: ergotropy and entropy at T ordered alike",
            {"m": (ms[i], ms[j]), "erg": (erg[i], erg[j]), "S": (S[i], S[j]),
             "violations": [(ms[a], ms[b]) for a, b in bad]},
        )
    return {"m": ms, "erg_T": erg, "S_T": S}


def check_theorems(p: ModelParams, raise_on_violation: bool = True) -> TheoremReport:
    """Run every check that applies to ``p``.

    With ``raise_on_violation=False`` violations are recorded in the report
    (``details[name]`` holds the counterexample) instead of raised.
    """
    report = TheoremReport()
    checks = []
    if p.n_b == 1 and p.m >= 1 and p.A > 0:
        checks.append(("single_cell", lambda: check_single_cell_antiorder(p)))
    if p.n_b == 2 and is_symmetric_charging(p) and p.m >= 2 and p.A > 0:
        checks.append(("two_cell", lambda: check_two_cell_charged_state(p)))
    if p.A > 0:
        checks.append(("sweep_antiorder", lambda: check_sweep_antiorder(p)))
    for name, run in checks:
        try:
            report.details[name] = run()
            setattr(report, name, True)
        except PropertyViolation as exc:
            if raise_on_violation:
                raise
            report.details[name] = exc.counterexample
            setattr(report, name, False)
    return report


def symmetric_tolerance_ok(p: ModelParams) -> bool:
    """Whether u1 == u2 within the closed-form tolerance."""
    if p.n_b != 2 or p.m < 2:
        return False
    u1, u2 = build_hamiltonian(p).offdiag
    return math.isclose(u1, u2, rel_tol=SYMMETRY_RTOL)
