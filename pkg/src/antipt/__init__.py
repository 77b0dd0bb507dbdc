"""
``antipt`` simulates a dissipative qubit driven by an anti-PT-symmetric
Hamiltonian that is built from a passive PT-symmetric one sandwiched
between two pi/2 pulses.

Modules
-------
linalg     2x2 complex algebra, closed-form and series matrix exponentials
model      H_APT, H_M, the PT map and the eigenvalue formula
pulses     pulse segments, sequences and propagators
analytics  closed-form rho(tau), overlap P(tau) and its inversion
cpt        C operator, CPT inner product, non-Hermitian Bloch coordinates
lab        shot sampling, calibration fits, eigenvalue protocol, tomography
cli        command-line driver (``antipt``)

Units: J and gamma in 1/us (angular), times in us.
"""

__version__ = "0.1.0"

from .analytics import (DensityMatrix2, dissipation_decay, invert_overlap,
                        overlap_p, rho_closed)
from .cpt import BlochPoint, CptFrame, cpt_inner, from_bloch, to_bloch, trajectory_hm
from .errors import (AliasWarning, DegenerateTrace, FitDiverged, InvalidOverlap,
                     InvalidRegime, InvalidState, UndefinedNormalization, ZeroState)
from .lab import (EigenvalueEstimate, MeasurementRecord, ShotConfig, calibrate_gamma,
                  calibrate_j, fidelity, measure_overlap_p, run_eigenvalue_protocol,
                  sample_measurement, tomography)
from .linalg import EigenPair2, eig2, expm_closed, expm_series
from .model import (Regime, SystemParams, anticommutator_pt, eigenvalues_apt, h_apt, h_m,
                    pt_map)
from .pulses import (HoldDissipation, HoldHM, HoldRabi, PulseSequence, Rotation,
                     compile_apt_evolution, evolve, segment_propagator)
