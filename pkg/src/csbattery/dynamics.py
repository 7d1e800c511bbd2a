"""Spectral propagation of |0>_b |m>_c and the battery's ladder populations."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import thermo
from .errors import EmptyGrid, UnsupportedRegime, WrongCellCount
from .model import ModelParams, build_hamiltonian
from .spectral import Spectrum, diagonalize, is_symmetric_charging, spectrum_nb1

__all__ = [
    "Amplitudes",
    "BatteryPopulations",
    "ChargingTrace",
    "evolve",
    "evolve_many",
    "ladder_populations",
    "populations",
    "populations_nb1",
    "populations_nb2_symmetric",
    "default_grid",
    "trace",
    "SYMMETRY_RTOL",
]

# relative tolerance on u1 == u2 for the two-cell symmetric closed forms
SYMMETRY_RTOL = 1e-9


@dataclass(frozen=True)
class Amplitudes:
    """Ladder amplitudes psi_1..psi_d of the full state at time ``t``."""

    t: float
    values: np.ndarray


@dataclass(frozen=True)
class BatteryPopulations:
    """Diagonal of the battery's reduced state on the Dicke ladder, p_0..p_{d-1}."""

    t: float
    p: np.ndarray
    params: ModelParams

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.ndim != 1:
            raise ValueError("populations must be a 1-d sequence")
        p.flags.writeable = False
        object.__setattr__(self, "p", p)

    @property
    def dim(self) -> int:
        return self.p.size


def evolve_many(s: Spectrum, times) -> np.ndarray:
    """Amplitudes at each time, shape (len(times), d)."""
    times = np.asarray(times, dtype=float)
    U = s.eigenvectors
    phases = np.exp(-1j * np.multiply.outer(times, s.eigenvalues))
    # psi(t) = U exp(-i D t) U^T e_1
    return (phases * U[0]) @ U.T


def ladder_populations(s: Spectrum, times) -> tuple[np.ndarray, np.ndarray]:
    """Populations |psi_j(t)|^2 rescaled to unit sum, and the raw norms."""
    pops = np.abs(evolve_many(s, times)) ** 2
    norm = pops.sum(axis=-1)
    return pops / norm[..., None], norm


def evolve(s: Spectrum, t: float) -> Amplitudes:
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    values = evolve_many(s, [t])[0]
    values.flags.writeable = False
    return Amplitudes(float(t), values)


def populations(a: Amplitudes, params: ModelParams) -> BatteryPopulations:
    p = np.abs(a.values) ** 2
    return BatteryPopulations(a.t, p / p.sum(), params)


def populations_nb1(p: ModelParams, t: float) -> BatteryPopulations:
    """Closed form for one cell: p = ((1 + r)/2, (1 - r)/2)."""
    if p.n_b != 1:
        raise WrongCellCount(f"populations_nb1 needs n_b == 1, got {p.n_b}")
    angle, spectrum = spectrum_nb1(p)
    gap = spectrum.eigenvalues[1] - spectrum.eigenvalues[0]
    r = angle.cos2 + math.cos(gap * t) * angle.sin2
    return BatteryPopulations(t, [(1 + r) / 2, (1 - r) / 2], p)


def _require_symmetric_nb2(p: ModelParams) -> tuple[float, float]:
    if p.n_b != 2:
        raise WrongCellCount(f"needs n_b == 2, got {p.n_b}")
    if not is_symmetric_charging(p):
        raise UnsupportedRegime("needs h == B and delta == 0")
    if p.m < 2:
        raise UnsupportedRegime("needs m >= 2 (three ladder states)")
    u1, u2 = build_hamiltonian(p).offdiag
    if not math.isclose(u1, u2, rel_tol=SYMMETRY_RTOL):
        raise UnsupportedRegime(f"needs u1 == u2, got u1={u1!r}, u2={u2!r}")
    return u1, u2


def symmetric_frequency(p: ModelParams) -> float:
    """omega = sqrt(u1^2 + u2^2) for the symmetric two-cell case."""
    u1, u2 = _require_symmetric_nb2(p)
    return math.hypot(u1, u2)


def populations_nb2_symmetric(p: ModelParams, t: float) -> BatteryPopulations:
    x = math.cos(symmetric_frequency(p) * t)
    return BatteryPopulations(t, [(1 + x) ** 2 / 4, (1 - x * x) / 2, (1 - x) ** 2 / 4], p)


def default_grid(tmax: float, steps: int = 2048) -> np.ndarray:
    if steps < 1:
        raise EmptyGrid("need at least one grid point")
    if steps == 1:
        return np.zeros(1)
    return np.linspace(0.0, tmax, steps)


@dataclass(frozen=True)
class ChargingTrace:
    """Time series of ladder populations and the derived thermodynamics.

    ``norm`` and ``total_energy`` are the conserved quantities of the full
    state, kept for checking.
    """

    params: ModelParams
    t: np.ndarray
    populations: np.ndarray
    S: np.ndarray
    E: np.ndarray
    dE: np.ndarray
    Ep: np.ndarray
    erg: np.ndarray
    norm: np.ndarray
    total_energy: np.ndarray

    def __len__(self):
        return self.t.size

    def at(self, i: int) -> BatteryPopulations:
        return BatteryPopulations(float(self.t[i]), self.populations[i], self.params)


def _check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise EmptyGrid("time grid is empty")
    if not np.all(np.isfinite(grid)) or grid[0] < 0:
        raise ValueError("time grid must be finite and nonnegative")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("time grid must be strictly increasing")
    return grid


def trace(p: ModelParams, grid, spectrum: Spectrum | None = None) -> ChargingTrace:
    grid = _check_grid(grid)
    H = build_hamiltonian(p)
    if spectrum is None:
        spectrum = diagonalize(H)
    psi = evolve_many(spectrum, grid)
    pops, norm = ladder_populations(spectrum, grid)
    Hpsi = psi @ H.dense()
    total_energy = np.einsum("tj,tj->t", psi.conj(), Hpsi).real
    E = thermo.energy_of(pops, p)
    Ep = thermo.passive_energy_of(pops, p)
    return ChargingTrace(
        params=p,
        t=grid,
        populations=pops,
        S=thermo.entropy_of(pops),
        E=E,
        dE=E - p.ground_energy,
        Ep=Ep,
        erg=np.maximum(E - Ep, 0.0),
        norm=norm,
        total_energy=total_energy,
    )
