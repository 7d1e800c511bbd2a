"""Brute-force reference in the full 2^(n_b + n_c) Hilbert space.

Basis index = battery_index * 2**n_c + charger_index, so the battery is the
leading tensor factor.  Within each group qubit q is bit q of its index
(little-endian) and bit value 1 means spin up.  Nothing here uses the ladder
reduction; the dense Hamiltonian is assembled from single-qubit operators
and evolved with a dense eigendecomposition.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import thermo
from .dynamics import BatteryPopulations, ladder_populations
from .errors import TooLarge
from .model import ModelParams, build_hamiltonian
from .spectral import diagonalize

__all__ = [
    "MAX_QUBITS",
    "DenseState",
    "dicke_vector",
    "full_hamiltonian",
    "initial_state",
    "collective_operators",
    "brute_force_populations",
    "brute_force_observables",
    "passive_energy_bruteforce",
    "DeviationReport",
    "compare",
]

MAX_QUBITS = 12
MAX_PERMUTATION_DIM = 8

_SZ = sp.csr_matrix(np.diag([-0.5, 0.5]))
_SPLUS = sp.csr_matrix(np.array([[0.0, 0.0], [1.0, 0.0]]))  # |up><down|


@dataclass(frozen=True)
class DenseState:
    values: np.ndarray
    n_b: int
    n_c: int


def _check_size(n):
    if n > MAX_QUBITS:
        raise TooLarge(f"{n} qubits exceeds the dense limit of {MAX_QUBITS}")


def dicke_vector(n: int, m: int) -> np.ndarray:
    """Uniform superposition of the n-qubit basis states with m spins up."""
    _check_size(n)
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    idx = np.arange(2**n)
    weight = np.array([bin(i).count("1") for i in idx])
    vec = np.where(weight == m, 1.0, 0.0)
    return vec / math.sqrt(math.comb(n, m))


def _site(op, q, n):
    """``op`` on qubit q of an n-qubit register (qubit 0 = least significant bit)."""
    left = sp.identity(2 ** (n - 1 - q), format="csr")
    right = sp.identity(2**q, format="csr")
    return sp.kron(sp.kron(left, op), right, format="csr")


def _collective(op, n):
    return sum((_site(op, q, n) for q in range(n)), sp.csr_matrix((2**n, 2**n)))


def collective_operators(n: int) -> dict[str, sp.csr_matrix]:
    """Total spin operators z, + and - of an n-qubit register."""
    plus = _collective(_SPLUS, n)
    return {"z": _collective(_SZ, n), "+": plus, "-": plus.T.tocsr()}


def _operators(p: ModelParams):
    _check_size(p.n_b + p.n_c)
    S = collective_operators(p.n_b)
    J = collective_operators(p.n_c)
    Ib = sp.identity(2**p.n_b, format="csr")
    Ic = sp.identity(2**p.n_c, format="csr")
    return S, J, Ib, Ic


def full_hamiltonian(p: ModelParams) -> np.ndarray:
    S, J, Ib, Ic = _operators(p)
    H = (
        p.B * sp.kron(S["z"], Ic)
        + p.h * sp.kron(Ib, J["z"])
        + p.A * (sp.kron(S["+"], J["-"]) + sp.kron(S["-"], J["+"]))
        + 2 * p.delta * sp.kron(S["z"], J["z"])
    )
    return H.toarray()


def total_sz(p: ModelParams) -> np.ndarray:
    S, J, Ib, Ic = _operators(p)
    return (sp.kron(S["z"], Ic) + sp.kron(Ib, J["z"])).toarray()


def initial_state(p: ModelParams) -> DenseState:
    _check_size(p.n_b + p.n_c)
    battery = np.zeros(2**p.n_b)
    battery[0] = 1.0
    return DenseState(np.kron(battery, dicke_vector(p.n_c, p.m)), p.n_b, p.n_c)


def _evolved_states(p: ModelParams, times) -> np.ndarray:
    H = full_hamiltonian(p)
    lam, V = np.linalg.eigh(H)
    psi0 = initial_state(p).values
    coeff = V.T @ psi0
    phases = np.exp(-1j * np.multiply.outer(np.asarray(times, dtype=float), lam))
    return (phases * coeff) @ V.T


def brute_force_observables(p: ModelParams, times) -> dict[str, np.ndarray]:
    """Everything the comparison needs, from the full reduced battery state.

    ``ladder`` holds <j|rho_b|j> for all battery Dicke levels j = 0..n_b,
    ``leakage`` the weight outside that ladder, ``offdiag`` the largest
    ladder coherence, ``S`` the von Neumann entropy from the spectrum of
    rho_b and ``E`` the trace of rho_b with B S^z.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    states = _evolved_states(p, times)
    nb_dim, nc_dim = 2**p.n_b, 2**p.n_c
    dicke = np.array([dicke_vector(p.n_b, j) for j in range(p.n_b + 1)])
    battery_h = p.B * collective_operators(p.n_b)["z"].toarray()
    out = {k: [] for k in ("ladder", "leakage", "offdiag", "S", "E", "norm")}
    for psi in states:
        M = psi.reshape(nb_dim, nc_dim)
        rho = M @ M.conj().T
        in_ladder = dicke @ rho @ dicke.T
        diag = in_ladder.diagonal().real
        out["ladder"].append(diag)
        out["leakage"].append(np.trace(rho).real - diag.sum())
        out["offdiag"].append(np.max(np.abs(in_ladder - np.diag(diag)), initial=0.0))
        w = np.linalg.eigvalsh(rho)
        out["S"].append(float(thermo.entropy_of(np.clip(w, 0.0, None))))
        out["E"].append(np.trace(rho @ battery_h).real)
        out["norm"].append(np.vdot(psi, psi).real)
    return {k: np.array(v) for k, v in out.items()} | {"t": times}


def brute_force_populations(p: ModelParams, t: float) -> BatteryPopulations:
    """Ladder populations of the full-space evolution, truncated to the d reachable levels."""
    obs = brute_force_observables(p, [t])
    return BatteryPopulations(float(t), obs["ladder"][0][: p.dim], p)


def passive_energy_bruteforce(pop: BatteryPopulations) -> float:
    """Minimum of sum_j p_sigma(j) eps_j over every permutation sigma."""
    d = pop.dim
    if d > MAX_PERMUTATION_DIM:
        raise TooLarge(f"d = {d} exceeds the permutation limit of {MAX_PERMUTATION_DIM}")
    eps = pop.params.B * (np.arange(d) - pop.params.n_b / 2)
    return min(
        float(np.dot(pop.p[list(perm)], eps)) for perm in itertools.permutations(range(d))
    )


@dataclass(frozen=True)
class DeviationReport:
    """Largest oracle-vs-ladder deviation of each quantity over the times."""

    populations: float
    entropy: float
    energy: float
    ergotropy: float
    leakage: float
    coherence: float
    times: int

    def max_deviation(self) -> float:
        return max(self.populations, self.entropy, self.energy, self.ergotropy,
                   self.leakage, self.coherence)

    def passed(self, tol: float = 1e-9) -> bool:
        return self.max_deviation() <= tol

    def as_dict(self) -> dict:
        return {
            "populations": self.populations,
            "entropy": self.entropy,
            "energy": self.energy,
            "ergotropy": self.ergotropy,
            "leakage": self.leakage,
            "coherence": self.coherence,
            "times": self.times,
        }


def compare(p: ModelParams, times) -> DeviationReport:
    times = np.atleast_1d(np.asarray(times, dtype=float))
    obs = brute_force_observables(p, times)
    spectrum = diagonalize(build_hamiltonian(p))
    pops, _ = ladder_populations(spectrum, times)
    d = p.dim
    # levels above the reachable ladder must stay empty, so pad the engine's vector
    padded = np.zeros((times.size, p.n_b + 1))
    padded[:, :d] = pops
    erg_oracle = []
    for row in obs["ladder"]:
        pop = BatteryPopulations(0.0, row[:d], p)
        if d <= MAX_PERMUTATION_DIM:
            ep = passive_energy_bruteforce(pop)
        else:
            ep = thermo.passive_energy(pop)
        erg_oracle.append(thermo.battery_energy(pop) - ep)
    E = thermo.energy_of(pops, p)
    erg = np.maximum(E - thermo.passive_energy_of(pops, p), 0.0)
    return DeviationReport(
        populations=float(np.max(np.abs(padded - obs["ladder"]))),
        entropy=float(np.max(np.abs(thermo.entropy_of(pops) - obs["S"]))),
        energy=float(np.max(np.abs(E - obs["E"]))),
        ergotropy=float(np.max(np.abs(erg - np.maximum(erg_oracle, 0.0)))),
        leakage=float(np.max(np.abs(obs["leakage"]))),
        coherence=float(np.max(obs["offdiag"])),
        times=int(times.size),
    )
