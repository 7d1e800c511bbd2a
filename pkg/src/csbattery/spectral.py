"""Eigendecomposition of the ladder Hamiltonian.

``diagonalize`` is the general path, an implicit-shift QL iteration for
symmetric tridiagonal matrices.  ``spectrum_nb1`` and ``spectrum_nb2`` are
the closed forms for one and two battery cells; they share no code with the
iteration so the two can check each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, UnsupportedRegime, WrongCellCount
from .model import ModelParams, TridiagonalHamiltonian, build_hamiltonian

__all__ = [
    "Spectrum",
    "MixingAngle",
    "diagonalize",
    "spectrum_nb1",
    "spectrum_nb2",
    "is_symmetric_charging",
]

_EPS = np.finfo(float).eps
# columns whose leading entries are below this are treated as zero when fixing signs
_SIGN_TOL = 1e-12


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues; column k of ``eigenvectors`` belongs to ``eigenvalues[k]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.T

    def gaps(self) -> np.ndarray:
        """All pairwise differences lambda_k - lambda_l with k > l."""
        lam = self.eigenvalues
        lower, upper = np.triu_indices(lam.size, 1)
        return lam[upper] - lam[lower]


@dataclass(frozen=True)
class MixingAngle:
    """Rotation angle of the two-level (one cell) eigenbasis, in [0, pi]."""

    theta: float

    @property
    def sin2(self) -> float:
        return math.sin(self.theta) ** 2

    @property
    def cos2(self) -> float:
        return math.cos(self.theta) ** 2


def _fix_signs(U: np.ndarray) -> np.ndarray:
    U = U.copy()
    for k in range(U.shape[1]):
        col = U[:, k]
        nonzero = np.flatnonzero(np.abs(col) > _SIGN_TOL)
        if nonzero.size and col[nonzero[0]] < 0:
            U[:, k] = -col
    return U


def _freeze(lam, U) -> Spectrum:
    lam = np.asarray(lam, dtype=float)
    U = np.asarray(U, dtype=float)
    lam.flags.writeable = False
    U.flags.writeable = False
    return Spectrum(lam, U)


def _tql(diag, offdiag, max_iter):
    """Implicit QL with Wilkinson-type shift; returns (eigenvalues, vectors)."""
    n = diag.size
    d = diag.astype(float).copy()
    e = np.zeros(n)
    e[: n - 1] = offdiag
    z = np.eye(n)
    # couplings below eps * ||H|| are negligible at the backward-error level
    floor = _EPS * float(np.max(np.abs(d)) + 2 * np.max(np.abs(e), initial=0.0))
    iterations = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd or abs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            iterations += 1
            if iterations > max_iter:
                raise ConvergenceFailure(
                    f"QL iteration did not converge within {max_iter} sweeps"
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # underflow split: restart this block
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi = z[:, i].copy()
                z[:, i] = c * zi - s * z[:, i + 1]
                z[:, i + 1] = s * zi + c * z[:, i + 1]
                i -= 1
            if not deflated:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    return d, z


def diagonalize(H: TridiagonalHamiltonian, max_iter: int | None = None) -> Spectrum:
    """Eigenvalues ascending, orthonormal eigenvectors with a fixed sign convention.

    ``max_iter`` defaults to 50 * dim QL sweeps in total.
    """
    n = H.dim
    if max_iter is None:
        max_iter = 50 * n
    lam, U = _tql(H.diag, H.offdiag, max_iter)
    order = np.argsort(lam, kind="stable")
    return _freeze(lam[order], _fix_signs(U[:, order]))


def spectrum_nb1(p: ModelParams) -> tuple[MixingAngle, Spectrum]:
    """Closed-form two-level spectrum for a single battery cell.

    Upper level d1 = eigenvalues[1], lower level d2 = eigenvalues[0].
    """
    if p.n_b != 1:
        raise WrongCellCount(f"spectrum_nb1 needs n_b == 1, got {p.n_b}")
    if p.m < 1:
        raise UnsupportedRegime("spectrum_nb1 needs m >= 1 (two ladder states)")
    H = build_hamiltonian(p)
    b0, b1 = H.diag
    u1 = H.offdiag[0]
    half_split = (b0 - b1) / 2
    radius = math.hypot(u1, half_split)
    theta = math.atan2(u1, half_split)
    mean = (b0 + b1) / 2
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    # columns: lower level d2, upper level d1
    U = np.array([[-s, c], [c, s]])
    return MixingAngle(theta), _freeze([mean - radius, mean + radius], _fix_signs(U))


def is_symmetric_charging(p: ModelParams, rtol: float = 1e-12) -> bool:
    """True when h == B and delta == 0, where the two-cell closed forms hold."""
    return math.isclose(p.h, p.B, rel_tol=rtol, abs_tol=0.0) and p.delta == 0.0


def spectrum_nb2(p: ModelParams) -> Spectrum:
    """Closed-form three-level spectrum for two cells with h = B, delta = 0.

    With e1 the unshifted level, eigenvalues = (e1 - omega, e1, e1 + omega).
    """
    if p.n_b != 2:
        raise WrongCellCount(f"spectrum_nb2 needs n_b == 2, got {p.n_b}")
    if not is_symmetric_charging(p):
        raise UnsupportedRegime("spectrum_nb2 needs h == B and delta == 0")
    if p.m < 2:
        raise UnsupportedRegime("spectrum_nb2 needs m >= 2 (three ladder states)")
    u1, u2 = build_hamiltonian(p).offdiag
    e1 = p.B * (p.m - 1 - p.n_c / 2)
    omega = math.hypot(u1, u2)
    if omega == 0.0:
        return _freeze([e1, e1, e1], np.eye(3))
    r2 = math.sqrt(2.0)
    U = np.array(
        [
            [u1, r2 * u2, u1],
            [-omega, 0.0, omega],
            [u2, -r2 * u1, u2],
        ]
    ) / (r2 * omega)
    return _freeze([e1 - omega, e1, e1 + omega], _fix_signs(U))
