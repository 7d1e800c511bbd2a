"""Entropy, energy, passive energy and ergotropy of a ladder population vector.

Array helpers (``*_of``) work on the last axis so they apply to one vector or
a whole time series.  The reduced battery state is diagonal on the Dicke
ladder, so the population vector is the whole state.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .model import ModelParams, ladder_energies

if TYPE_CHECKING:
    from .dynamics import BatteryPopulations

__all__ = [
    "ThermoReport",
    "entropy",
    "battery_energy",
    "passive_energy",
    "ergotropy",
    "injected_energy",
    "report",
    "binary_entropy",
]


def entropy_of(p) -> np.ndarray:
    """Shannon entropy in bits along the last axis, with 0 log 0 = 0.

    Clipped at zero: a rounded population of 1 + 1e-16 would go negative.
    """
    p = np.asarray(p, dtype=float)
    safe = np.where(p > 0, p, 1.0)
    S = -np.sum(np.where(p > 0, p * np.log2(safe), 0.0), axis=-1)
    return np.maximum(S, 0.0)


def energy_of(p, params: ModelParams) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return p @ ladder_energies(params, p.shape[-1])


def passive_energy_of(p, params: ModelParams) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    # largest population onto the lowest level
    descending = -np.sort(-p, axis=-1, kind="stable")
    return descending @ ladder_energies(params, p.shape[-1])


def binary_entropy(q: float) -> float:
    return float(entropy_of([q, 1.0 - q]))


@dataclass(frozen=True)
class ThermoReport:
    S: float
    E: float
    E0: float
    dE: float
    Ep: float
    erg: float


def entropy(pop: BatteryPopulations) -> float:
    return float(entropy_of(pop.p))


def battery_energy(pop: BatteryPopulations) -> float:
    return float(energy_of(pop.p, pop.params))


def passive_energy(pop: BatteryPopulations) -> float:
    return float(passive_energy_of(pop.p, pop.params))


def ergotropy(pop: BatteryPopulations) -> float:
    """E - E_p, clipped at zero against rounding."""
    return max(battery_energy(pop) - passive_energy(pop), 0.0)


def injected_energy(pop: BatteryPopulations) -> float:
    return battery_energy(pop) - pop.params.ground_energy


def report(pop: BatteryPopulations) -> ThermoReport:
    E = battery_energy(pop)
    Ep = passive_energy(pop)
    E0 = pop.params.ground_energy
    return ThermoReport(S=entropy(pop), E=E, E0=E0, dE=E - E0, Ep=Ep, erg=max(E - Ep, 0.0))
