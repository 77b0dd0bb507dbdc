"""
CPT inner product and non-Hermitian Bloch-sphere coordinates for H_M.

For ``r = gamma/J < 1`` the operator ``C = 2/sqrt(1 - r^2) (Ix + i r Iz)``
commutes with H_M and with the PT map, and ``<phi|P^T C^T|psi>`` is a
positive inner product under which the two eigenstates of H_M are
orthonormal. A state is written as
``R cos(Theta/2) |e+> + R sin(Theta/2) exp(i Phi) |e->``.

For ``r >= 1`` the construction breaks down (the metric becomes
indefinite). Frames built with ``allow_continuation=True`` still return
coordinates there, by expanding states in the Dirac-normalized eigenbasis,
and mark them ``physical = False``.
"""
from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidRegime, ZeroState
from .linalg import IX, IZ, eig2
from .model import P, SystemParams, h_m
from .pulses import HoldHM, segment_propagator

TRAJECTORY_COLUMNS = ("t_us", "x", "y", "z", "x_norm", "y_norm", "z_norm", "R", "Theta", "Phi")

_POLE_TOL = 1e-12


def c_operator(r: float) -> np.ndarray:
    """``C = 2/sqrt(1 - r^2) (Ix + i r Iz)`` (complex square root for r > 1)."""
    if r == 1:
        raise InvalidRegime("C is singular at r = 1")
    return 2 / cmath.sqrt(1 - r * r) * (IX + 1j * r * IZ)


@dataclass(frozen=True)
class CptFrame:
    params: SystemParams
    r: float
    C: np.ndarray
    eps_plus: np.ndarray
    eps_minus: np.ndarray
    regime_valid: bool
    physical: bool

    @classmethod
    def from_params(cls, params: SystemParams, allow_continuation: bool = False) -> "CptFrame":
        if params.J <= 0:
            raise InvalidRegime("CPT frame needs J > 0 (r = gamma/J)")
        r = params.gamma / params.J
        valid = r < 1
        if not valid and not allow_continuation:
            raise InvalidRegime(
                f"r = gamma/J = {r:g} >= 1: C = 2/sqrt(1-r^2)(Ix + i r Iz) is only defined for r < 1"
            )
        if r == 1:
            raise InvalidRegime("r = 1 is the exceptional point; no eigenbasis exists")
        C = c_operator(r)
        pair = eig2(h_m(params))
        # eigvec1 belongs to -i gamma + w, the larger real part
        ep, em = pair.eigvec1, pair.eigvec2
        if valid:
            ep = ep / math.sqrt(_cpt_form(C, ep, ep).real)
            em = em / math.sqrt(_cpt_form(C, em, em).real)
        return cls(params, r, C, ep, em, valid, valid)

    @property
    def metric(self) -> np.ndarray:
        """``P^T C^T``, the matrix of the CPT form."""
        return P.T @ self.C.T

    def coefficients(self, psi: np.ndarray) -> tuple[complex, complex]:
        """Expansion coefficients of ``psi`` in ``(eps_plus, eps_minus)``."""
        psi = np.asarray(psi, dtype=complex)
        if self.regime_valid:
            return cpt_inner(self, self.eps_plus, psi), cpt_inner(self, self.eps_minus, psi)
        c = np.linalg.solve(np.column_stack([self.eps_plus, self.eps_minus]), psi)
        return complex(c[0]), complex(c[1])


def _cpt_form(C: np.ndarray, phi: np.ndarray, psi: np.ndarray) -> complex:
    return complex(np.conj(phi) @ P.T @ C.T @ psi)


def cpt_inner(frame: CptFrame, phi: np.ndarray, psi: np.ndarray) -> complex:
    """``<phi|P^T C^T|psi>``, antilinear in ``phi``."""
    return _cpt_form(frame.C, np.asarray(phi, dtype=complex), np.asarray(psi, dtype=complex))


@dataclass(frozen=True)
class BlochPoint:
    R: float
    Theta: float
    Phi: float
    physical: bool = True

    @property
    def x(self) -> float:
        return self.R * math.sin(self.Theta) * math.cos(self.Phi)

    @property
    def y(self) -> float:
        return self.R * math.sin(self.Theta) * math.sin(self.Phi)

    @property
    def z(self) -> float:
        return self.R * math.cos(self.Theta)

    @property
    def cartesian(self) -> tuple[float, float, float]:
        return self.x, self.y, self.z

    def normalized(self) -> "BlochPoint":
        return BlochPoint(1.0, self.Theta, self.Phi, self.physical)


def _wrap(phi: float) -> float:
    w = (phi + math.pi) % (2 * math.pi) - math.pi
    return -math.pi if w >= math.pi else w


def to_bloch(frame: CptFrame, psi: np.ndarray) -> BlochPoint:
    psi = np.asarray(psi, dtype=complex)
    if not np.any(psi):
        raise ZeroState("cannot place the zero vector on the sphere")
    cp, cm = frame.coefficients(psi)
    R = math.hypot(abs(cp), abs(cm))
    theta = 2 * math.atan2(abs(cm), abs(cp))
    if abs(cp) <= _POLE_TOL * R or abs(cm) <= _POLE_TOL * R:
        phi = 0.0
    else:
        phi = _wrap(cmath.phase(cm) - cmath.phase(cp))
    return BlochPoint(R, theta, phi, frame.physical)


def from_bloch(frame: CptFrame, point: BlochPoint) -> np.ndarray:
    """State with the given coordinates (global phase fixed by a real ``eps_plus`` weight)."""
    return (point.R * math.cos(point.Theta / 2) * frame.eps_plus
            + point.R * math.sin(point.Theta / 2) * cmath.exp(1j * point.Phi) * frame.eps_minus)


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    raw: BlochPoint
    normalized: BlochPoint


def trajectory_hm(params: SystemParams, psi0: np.ndarray, tau_max: float, n_steps: int,
                  allow_continuation: bool = False) -> list[TrajectorySample]:
    """
    Sample the evolution of ``psi0`` under H_M on the Bloch sphere.

    ``n_steps`` samples are taken uniformly on ``[0, tau_max]``. Each sample
    carries the raw point (its radius decays as ``exp(-gamma t)``) and its
    projection onto the unit sphere.
    """
    if n_steps < 2:
        raise ValueError("n_steps must be >= 2")
    frame = CptFrame.from_params(params, allow_continuation)
    psi0 = np.asarray(psi0, dtype=complex)
    out = []
    for t in np.linspace(0.0, tau_max, n_steps):
        psi = segment_propagator(HoldHM(params, float(t))) @ psi0
        pt = to_bloch(frame, psi)
        out.append(TrajectorySample(float(t), pt, pt.normalized()))
    return out


def trajectory_rows(samples: list[TrajectorySample]) -> list[tuple[float, ...]]:
    rows = []
    for s in samples:
        rows.append((s.t, *s.raw.cartesian, *s.normalized.cartesian,
                     s.raw.R, s.raw.Theta, s.raw.Phi))
    return rows


def trajectory_csv(samples: list[TrajectorySample], comments: list[str] = ()) -> str:
    """CSV text with columns ``t_us, x, y, z, x_norm, y_norm, z_norm, R, Theta, Phi``."""
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRAJECTORY_COLUMNS)
    for row in trajectory_rows(samples):
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()
