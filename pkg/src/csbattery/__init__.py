"""Exact simulator for the central-spin quantum battery.

N_b battery spins exchange excitations with N_c charger spins prepared in a
Dicke state.  The dynamics stays on a ladder of at most N_b + 1 states, so
everything here is exact and cheap.
"""
from .analysis import (
    ChargingSummary,
    RegimePrediction,
    check_theorems,
    find_charging_time,
    predict_ntc_time,
    predict_tc_time,
    sweep_m,
)
from .dynamics import BatteryPopulations, ChargingTrace, evolve, populations, trace
from .errors import BatteryError
from .model import ModelParams, TridiagonalHamiltonian, build_hamiltonian, validate_params
from .spectral import Spectrum, diagonalize
from .thermo import ThermoReport, entropy, ergotropy, injected_energy, passive_energy

__version__ = "0.1.0"
