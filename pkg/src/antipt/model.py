"""
Hamiltonians of the dissipative qubit and their symmetry structure.

Units: ``J`` and ``gamma`` are angular frequencies in 1/us, times are in us.
The population of ``|1>`` decays at rate ``4*gamma`` under pure dissipation.
"""
from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

import numpy as np

from .errors import UndefinedNormalization
from .linalg import I2, IX, IZ, SX, norm

DEFAULT_TOL_EP = 1e-9

#: parity operator P = 2 Ix (an involution)
P = SX.copy()


class Regime(enum.Enum):
    APT_SYMMETRIC = "apt_symmetric"  # J < gamma, imaginary spectrum
    EXCEPTIONAL = "exceptional"
    APT_BROKEN = "apt_broken"  # J > gamma, eigenvalues get real parts


@dataclass(frozen=True)
class SystemParams:
    """Coupling ``J`` and dissipation ``gamma`` (both 1/us, non-negative)."""

    J: float
    gamma: float
    tol_ep: float = DEFAULT_TOL_EP

    def __post_init__(self):
        if not (np.isfinite(self.J) and np.isfinite(self.gamma)):
            raise ValueError("J and gamma must be finite")
        if self.J < 0 or self.gamma < 0:
            raise ValueError(f"J and gamma must be >= 0, got J={self.J}, gamma={self.gamma}")

    @property
    def omega_squared(self) -> float:
        # factored form keeps J == gamma exactly zero
        return (self.J - self.gamma) * (self.J + self.gamma)

    @property
    def omega(self) -> complex:
        """sqrt(J^2 - gamma^2) on the principal branch (imaginary below the EP)."""
        return cmath.sqrt(self.omega_squared)

    @property
    def regime(self) -> Regime:
        if abs(self.J - self.gamma) <= self.tol_ep * max(self.J, self.gamma):
            return Regime.EXCEPTIONAL
        return Regime.APT_BROKEN if self.J > self.gamma else Regime.APT_SYMMETRIC

    @property
    def loss_rate(self) -> float:
        return 4 * self.gamma


def pt_map(m: np.ndarray) -> np.ndarray:
    """Antilinear PT action on operators, ``K(M) = P conj(M) P^-1``."""
    return P @ np.conj(m) @ P


def h_apt(params: SystemParams) -> np.ndarray:
    """Anti-PT Hamiltonian ``-2J Iz + 2i gamma Ix - i gamma I``."""
    J, g = params.J, params.gamma
    return -2 * J * IZ + 2j * g * IX - 1j * g * I2


def h_m(params: SystemParams) -> np.ndarray:
    """Passive PT Hamiltonian ``2i gamma Iz + 2J Ix - i gamma I`` = [[0, J], [J, -2i gamma]]."""
    J, g = params.J, params.gamma
    return 2j * g * IZ + 2 * J * IX - 1j * g * I2


def anticommutator_pt(h: np.ndarray) -> float:
    """Anti-PT defect ``||K(H) + H||``; zero for anti-PT-symmetric ``H``."""
    return norm(pt_map(h) + h)


def commutator_pt(h: np.ndarray) -> float:
    """PT defect ``||K(H) - H||``; zero for PT-symmetric ``H``."""
    return norm(pt_map(h) - h)


def eigenvalues_apt(params: SystemParams, normalized: bool = True) -> tuple[complex, complex]:
    """
    Eigenvalues of the anti-PT Hamiltonian.

    Returns ``(E+, E-)`` with ``E+- = -i gamma +- sqrt(J^2 - gamma^2)``, or the
    same divided by ``gamma`` when ``normalized`` is true.
    """
    w = params.omega
    g = params.gamma
    if normalized:
        if g == 0:
            raise UndefinedNormalization("normalized eigenvalues undefined for gamma = 0")
        return complex(-1j + w / g), complex(-1j - w / g)
    return complex(-1j * g + w), complex(-1j * g - w)
