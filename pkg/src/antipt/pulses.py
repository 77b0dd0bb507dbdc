"""
Pulse sequences and their propagators.

List order is temporal order: the first segment acts first on the state, so
the propagator of a sequence is the reverse-order product of segment
propagators.

Rotation sign convention::

    Rotation("y", theta)  ->  exp(-i theta Iy)
    Y(+pi/2) pulse         ->  Rotation("y", +pi/2)
    Y(-pi/2) pulse         ->  Rotation("y", -pi/2)

Rotations are instantaneous; holds have a duration in us.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .linalg import I2, IX, IY, IZ, expm_closed
from .model import SystemParams, h_m

_AXES = {"x": IX, "y": IY, "z": IZ}


@dataclass(frozen=True)
class Rotation:
    axis: str
    angle: float

    def __post_init__(self):
        if self.axis not in _AXES:
            raise ValueError(f"axis must be one of x, y, z; got {self.axis!r}")
        if not math.isfinite(self.angle):
            raise ValueError("rotation angle must be finite")


def _check_duration(duration: float):
    if not (math.isfinite(duration) and duration >= 0):
        raise ValueError(f"duration must be finite and >= 0, got {duration}")


@dataclass(frozen=True)
class HoldHM:
    """Simultaneous coupling ``J`` and dissipation ``gamma``: evolution under H_M."""

    params: SystemParams
    duration: float

    def __post_init__(self):
        _check_duration(self.duration)


@dataclass(frozen=True)
class HoldDissipation:
    """Dissipative beam only; generator ``-2i gamma |1><1|``."""

    gamma: float
    duration: float

    def __post_init__(self):
        _check_duration(self.duration)


@dataclass(frozen=True)
class HoldRabi:
    """Coupling only; generator ``2J Ix``."""

    J: float
    duration: float

    def __post_init__(self):
        _check_duration(self.duration)


PulseSegment = Union[Rotation, HoldHM, HoldDissipation, HoldRabi]


def segment_propagator(seg: PulseSegment) -> np.ndarray:
    match seg:
        case Rotation(axis=axis, angle=angle):
            return expm_closed(-1j * angle * _AXES[axis])
        case HoldHM(params=params, duration=tau):
            return expm_closed(-1j * h_m(params) * tau)
        case HoldDissipation(gamma=gamma, duration=tau):
            return np.diag([1.0, math.exp(-2 * gamma * tau)]).astype(complex)
        case HoldRabi(J=J, duration=tau):
            return expm_closed(-2j * J * IX * tau)
    raise TypeError(f"not a pulse segment: {seg!r}")


@dataclass(frozen=True)
class PulseSequence:
    segments: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))

    def __add__(self, other: "PulseSequence") -> "PulseSequence":
        return PulseSequence(self.segments + tuple(other.segments))

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def propagator(self) -> np.ndarray:
        u = I2.copy()
        for seg in self.segments:
            u = segment_propagator(seg) @ u
        return u

    def to_json(self) -> str:
        return json.dumps([_segment_to_dict(s) for s in self.segments])

    @classmethod
    def from_json(cls, text: str) -> "PulseSequence":
        return cls(tuple(_segment_from_dict(d) for d in json.loads(text)))


def _segment_to_dict(seg: PulseSegment) -> dict:
    match seg:
        case Rotation():
            return {"kind": "rotation", "axis": seg.axis, "angle": seg.angle}
        case HoldHM():
            return {"kind": "hold_hm", "j": seg.params.J, "gamma": seg.params.gamma,
                    "duration": seg.duration}
        case HoldDissipation():
            return {"kind": "hold_dissipation", "gamma": seg.gamma, "duration": seg.duration}
        case HoldRabi():
            return {"kind": "hold_rabi", "j": seg.J, "duration": seg.duration}
    raise TypeError(f"not a pulse segment: {seg!r}")


def _segment_from_dict(d: dict) -> PulseSegment:
    kind = d.get("kind")
    if kind == "rotation":
        return Rotation(d["axis"], float(d["angle"]))
    if kind == "hold_hm":
        return HoldHM(SystemParams(float(d["j"]), float(d["gamma"])), float(d["duration"]))
    if kind == "hold_dissipation":
        return HoldDissipation(float(d["gamma"]), float(d["duration"]))
    if kind == "hold_rabi":
        return HoldRabi(float(d["j"]), float(d["duration"]))
    raise ValueError(f"unknown segment kind {kind!r}")


def compile_apt_evolution(params: SystemParams, tau: float) -> PulseSequence:
    """
    Pulse sequence whose propagator is ``exp(-i H_APT tau)``.

    A ``-pi/2`` y-pulse, an H_M hold of length ``tau``, then a ``+pi/2``
    y-pulse: ``Ry(pi/2) exp(-i H_M tau) Ry(-pi/2) = exp(-i H_APT tau)``.
    """
    return PulseSequence((
        Rotation("y", -math.pi / 2),
        HoldHM(params, tau),
        Rotation("y", math.pi / 2),
    ))


def evolve(seq: PulseSequence, psi0: np.ndarray) -> np.ndarray:
    """Apply the sequence to a (possibly sub-normalized) state."""
    psi = np.asarray(psi0, dtype=complex)
    for seg in seq:
        psi = segment_propagator(seg) @ psi
    return psi
