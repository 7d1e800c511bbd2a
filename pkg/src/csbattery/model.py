"""Model parameters and the tridiagonal Hamiltonian on the charging ladder.

The initial state |0>_b |m>_c only couples to the ladder states
|j>_b |m-j>_c (Dicke states on both sides), j = 0 .. min(N_b, m), because
H commutes with S^z + J^z.  On that ladder H is real symmetric tridiagonal.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .errors import NonFiniteEnergy, NonPositiveB, NonPositiveCount, OutOfRangeM

__all__ = [
    "ModelParams",
    "TridiagonalHamiltonian",
    "validate_params",
    "subspace_dimension",
    "build_hamiltonian",
    "ladder_energies",
]


def _check_count(name, value, minimum):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise NonPositiveCount(name, f"must be an integer, got {value!r}")
    if value < minimum:
        raise NonPositiveCount(name, f"must be >= {minimum}, got {value}")
    return int(value)


@dataclass(frozen=True)
class ModelParams:
    """Physical knobs of the central-spin battery (hbar = 1).

    B, h: battery / charger fields.  A: flip-flop coupling.  delta: Ising
    coupling.  n_b battery spins, n_c charger spins, m charger spins up at t=0.
    """

    B: float
    h: float
    A: float
    delta: float
    n_b: int
    n_c: int
    m: int

    def __post_init__(self):
        for name in ("B", "h", "A", "delta"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, numbers.Real):
                raise NonFiniteEnergy(name, f"must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise NonFiniteEnergy(name, f"must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.B <= 0:
            raise NonPositiveB("B", f"battery field must be > 0, got {self.B}")
        object.__setattr__(self, "n_b", _check_count("n_b", self.n_b, 1))
        object.__setattr__(self, "n_c", _check_count("n_c", self.n_c, 1))
        if isinstance(self.m, bool) or not isinstance(self.m, numbers.Integral):
            raise OutOfRangeM("m", f"must be an integer, got {self.m!r}")
        if not 0 <= self.m <= self.n_c:
            raise OutOfRangeM("m", f"need 0 <= m <= n_c = {self.n_c}, got {self.m}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def dim(self) -> int:
        return min(self.n_b, self.m) + 1

    @property
    def ground_energy(self) -> float:
        """Energy of the all-down battery, which is also E(0)."""
        return -self.B * self.n_b / 2


_ALIASES = {
    "N_b": "n_b", "Nb": "n_b", "nb": "n_b",
    "N_c": "n_c", "Nc": "n_c", "nc": "n_c",
    "Delta": "delta", "Δ": "delta",
}


def validate_params(raw: Mapping[str, Any] | ModelParams) -> ModelParams:
    """Build a :class:`ModelParams` from a plain mapping, raising on bad input.

    Accepts the field names plus the obvious spellings ``N_b``, ``N_c``,
    ``Delta``.  Unknown keys are rejected rather than ignored.
    """
    if isinstance(raw, ModelParams):
        return raw
    kwargs = {}
    for key, value in raw.items():
        name = _ALIASES.get(key, key)
        if name not in ModelParams.__dataclass_fields__:
            raise TypeError(f"unknown parameter {key!r}")
        if name in kwargs:
            raise TypeError(f"parameter {name!r} given twice")
        kwargs[name] = value
    missing = set(ModelParams.__dataclass_fields__) - set(kwargs)
    if missing:
        raise TypeError(f"missing parameters: {sorted(missing)}")
    return ModelParams(**kwargs)


def subspace_dimension(p: ModelParams) -> int:
    return p.dim


@dataclass(frozen=True)
class TridiagonalHamiltonian:
    """Real symmetric tridiagonal matrix: ``diag`` (length d), ``offdiag`` (d-1)."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.array(self.diag, dtype=float)
        offdiag = np.array(self.offdiag, dtype=float)
        if diag.ndim != 1 or diag.size == 0:
            raise ValueError("diag must be a non-empty 1-d sequence")
        if offdiag.shape != (diag.size - 1,):
            raise ValueError(f"offdiag must have length {diag.size - 1}")
        if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(offdiag))):
            raise ValueError("matrix entries must be finite")
        diag.flags.writeable = False
        offdiag.flags.writeable = False
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)

    @property
    def dim(self) -> int:
        return self.diag.size

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def build_hamiltonian(p: ModelParams) -> TridiagonalHamiltonian:
    d = p.dim
    j = np.arange(d, dtype=float)
    battery_z = j - p.n_b / 2
    charger_z = p.m - j - p.n_c / 2
    diag = p.B * battery_z + p.h * charger_z + 2 * p.delta * battery_z * charger_z
    # u_j couples ladder states j-1 and j; the radicand vanishes at j = m+1,
    # which is why the ladder stops at min(n_b, m).
    k = np.arange(1, d, dtype=float)
    offdiag = p.A * np.sqrt(k * (p.n_b - k + 1) * (p.n_c - p.m + k) * (p.m - k + 1))
    return TridiagonalHamiltonian(diag, offdiag)


def ladder_energies(p: ModelParams, d: int | None = None) -> np.ndarray:
    """Battery energies B (j - n_b/2) of the Dicke ladder levels j = 0..d-1."""
    d = p.dim if d is None else d
    return p.B * (np.arange(d) - p.n_b / 2)
