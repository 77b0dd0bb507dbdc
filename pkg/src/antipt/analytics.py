"""
Closed-form time-domain predictions for evolution under H_APT.

All functions are branch-safe: below the exceptional point the oscillatory
functions of ``omega*tau`` turn into hyperbolic ones, and within
``|omega*tau| <= 1e-6`` they are replaced by their series in
``x = (J^2 - gamma^2) tau^2``, which is valid on both sides.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidOverlap
from .model import SystemParams

_EP_WINDOW_SQ = 1e-12  # (omega*tau)**2


@dataclass(frozen=True)
class DensityMatrix2:
    """Single-qubit density matrix, trace <= 1 allowed."""

    rho00: float
    rho11: float
    rho01: complex

    @property
    def trace(self) -> float:
        return self.rho00 + self.rho11

    def to_array(self) -> np.ndarray:
        return np.array([[self.rho00, self.rho01],
                         [np.conj(self.rho01), self.rho11]], dtype=complex)

    @classmethod
    def from_array(cls, rho: np.ndarray) -> "DensityMatrix2":
        rho = np.asarray(rho)
        return cls(float(rho[0, 0].real), float(rho[1, 1].real), complex(rho[0, 1]))


def _cos_sinc(params: SystemParams, tau: float) -> tuple[float, float]:
    """Return ``cos(omega tau)`` and ``sin(omega tau)/omega`` as real numbers."""
    w2 = params.omega_squared
    x = w2 * tau * tau
    if abs(x) <= _EP_WINDOW_SQ:
        c = 1 - x / 2 + x * x / 24
        s = tau * (1 - x / 6 + x * x / 120)
    elif w2 > 0:
        w = math.sqrt(w2)
        c = math.cos(w * tau)
        s = math.sin(w * tau) / w
    else:
        k = math.sqrt(-w2)
        c = math.cosh(k * tau)
        s = math.sinh(k * tau) / k
    return c, s


def amplitudes_from_zero(params: SystemParams, tau: float) -> np.ndarray:
    """State ``exp(-i H_APT tau)|0>`` in closed form."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    c, s = _cos_sinc(params, tau)
    decay = math.exp(-params.gamma * tau)
    return np.array([decay * (c + 1j * params.J * s), decay * params.gamma * s])


def rho_closed(params: SystemParams, tau: float) -> DensityMatrix2:
    """
    Density matrix at time ``tau`` starting from ``|0>``.

    ``rho00 = exp(-2 gamma tau) [cos^2(w tau) + (J sin(w tau)/w)^2]`` and
    ``rho11 = exp(-2 gamma tau) gamma^2 sin^2(w tau)/w^2``; the coherence is
    taken as ``a0 * conj(a1)`` from the closed-form amplitudes so its branch
    is consistent with the populations.
    """
    a0, a1 = amplitudes_from_zero(params, tau)
    return DensityMatrix2(
        rho00=float(abs(a0) ** 2),
        rho11=float(abs(a1) ** 2),
        rho01=complex(a0 * np.conj(a1)),
    )


def overlap_p(params: SystemParams, tau: float) -> float:
    """Return-probability ``cos^2(w tau) exp(-2 gamma tau)`` for ``(|0> - i|1>)/sqrt(2)``."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    c, _ = _cos_sinc(params, tau)
    return c * c * math.exp(-2 * params.gamma * tau)


def dissipation_decay(gamma: float, tau: float) -> float:
    """Population left in ``|1>`` after pure dissipation: ``exp(-4 gamma tau)``."""
    if tau < 0 or gamma < 0:
        raise ValueError("gamma and tau must be >= 0")
    return math.exp(-4 * gamma * tau)


def invert_overlap(P: float, tau0: float, gamma: float, q_tol: float = 1e-12) -> complex:
    """
    Recover ``w = sqrt(J^2 - gamma^2)`` from a measured overlap.

    With ``q = sqrt(P exp(2 gamma tau0))``: ``q <= 1`` gives the real
    ``arccos(q)/tau0``, ``q > 1`` the imaginary ``i arccosh(q)/tau0``.
    Values within ``q_tol`` of 1 map to ``w = 0``; the inversion has an
    infinite slope there and round-off alone would otherwise give
    ``|w tau0| ~ 1e-8``.

    Branches are unique only while ``|w tau0| < pi/2``, which holds for the
    ``tau0 = 1/J`` choice used by the protocol. Other ``tau0`` values alias
    onto the principal branch.
    """
    if not (P > 0) or tau0 <= 0 or gamma < 0:
        raise InvalidOverlap(f"cannot invert P={P}, tau0={tau0}, gamma={gamma}")
    q = math.sqrt(P * math.exp(2 * gamma * tau0))
    if not math.isfinite(q):
        raise InvalidOverlap(f"non-finite q for P={P}")
    if abs(q - 1) <= q_tol:
        return 0j
    if q < 1:
        return complex(math.acos(q) / tau0, 0.0)
    return complex(0.0, math.acosh(q) / tau0)
