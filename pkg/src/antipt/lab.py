"""
Simulated experiment: shot sampling, calibration, eigenvalue protocol, tomography.

Every measurement has three outcomes: the qubit is found in ``|0>``, in
``|1>``, or it has been lost to the dissipative channel (probability
``1 - |a0|^2 - |a1|^2``). Counts are drawn from a multinomial distribution
with a ``numpy.random.Generator``; passing the same seed reproduces every
result bit for bit.

``ShotConfig(n_shots=None)`` switches sampling off: records then hold the
exact outcome probabilities, which is the infinite-shot limit.

Measurement bases are reached with ideal pulses before a Z readout:

=====  =================  =====================
basis  pre-rotation        ``p0 - p1`` measures
=====  =================  =====================
Z      none               ``<sz>``
X      ``Ry(-pi/2)``      ``<sx>``
Y      ``Rx(+pi/2)``      ``<sy>``
=====  =================  =====================
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import analytics
from .errors import DegenerateTrace, FitDiverged, InvalidOverlap, InvalidState
from .fitting import FitResult, fit_decay, fit_rabi
from .linalg import KET0, KET1
from .model import SystemParams, eigenvalues_apt
from .pulses import (HoldDissipation, HoldRabi, PulseSequence, Rotation,
                     compile_apt_evolution, evolve)

BASES = ("Z", "X", "Y")
_BASIS_PULSE = {"Z": None, "X": ("y", -math.pi / 2), "Y": ("x", math.pi / 2)}


@dataclass(frozen=True)
class ShotConfig:
    """
    Sampling and noise settings.

    gamma_jitter is a relative Gaussian spread on gamma, angle_jitter an
    absolute Gaussian spread (rad) on every pulse angle; both are redrawn
    for each run. readout_p01 is P(read 1 | 0), readout_p10 is P(read 0 | 1).
    """

    n_shots: int | None = 1000
    seed: int = 0
    gamma_jitter: float = 0.0
    angle_jitter: float = 0.0
    readout_p01: float = 0.0
    readout_p10: float = 0.0

    def __post_init__(self):
        if self.n_shots is not None and self.n_shots < 1:
            raise ValueError("n_shots must be >= 1 (or None for exact probabilities)")
        if self.gamma_jitter < 0 or self.angle_jitter < 0:
            raise ValueError("jitter widths must be >= 0")
        for p in (self.readout_p01, self.readout_p10):
            if not 0 <= p <= 1:
                raise ValueError("readout error probabilities must lie in [0, 1]")

    @property
    def exact(self) -> bool:
        return self.n_shots is None

    @property
    def noise_model(self) -> dict:
        return {"gamma_jitter": self.gamma_jitter, "angle_jitter": self.angle_jitter,
                "readout_p01": self.readout_p01, "readout_p10": self.readout_p10}

    def rng(self, index: int | None = None) -> np.random.Generator:
        """Generator for the whole run, or for sweep point ``index`` (seed ^ index)."""
        seed = self.seed if index is None else self.seed ^ index
        return np.random.default_rng(seed)


@dataclass(frozen=True)
class MeasurementRecord:
    """
    Outcome counts ``(n0, n1, n_lost)`` of one setting.

    In exact mode ``n_shots`` is None and ``counts`` are probabilities.
    """

    basis: str
    counts: tuple
    n_shots: int | None
    tau: float
    params_nominal: SystemParams | None = None

    @property
    def frequencies(self) -> np.ndarray:
        c = np.asarray(self.counts, dtype=float)
        return c if self.n_shots is None else c / self.n_shots

    @property
    def p0(self) -> float:
        return float(self.frequencies[0])

    @property
    def p1(self) -> float:
        return float(self.frequencies[1])


@dataclass(frozen=True)
class EigenvalueEstimate:
    ratio: float
    E_plus: complex
    E_minus: complex
    std_real: float
    std_imag: float
    n_ok: int
    samples: tuple = field(default=(), repr=False)

    @property
    def missing(self) -> bool:
        return self.n_ok == 0


def _jittered(angle: float, cfg: ShotConfig, rng) -> float:
    if cfg.angle_jitter > 0 and rng is not None:
        return angle + cfg.angle_jitter * rng.standard_normal()
    return angle


def _noisy_sequence(seq: PulseSequence, cfg: ShotConfig, rng) -> PulseSequence:
    if cfg.angle_jitter == 0:
        return seq
    return PulseSequence(tuple(
        Rotation(s.axis, _jittered(s.angle, cfg, rng)) if isinstance(s, Rotation) else s
        for s in seq
    ))


def _actual_params(params: SystemParams, cfg: ShotConfig, rng) -> SystemParams:
    if cfg.gamma_jitter == 0:
        return params
    g = params.gamma * (1 + cfg.gamma_jitter * rng.standard_normal())
    return replace(params, gamma=max(g, 0.0))


def sample_measurement(psi: np.ndarray, basis: str, cfg: ShotConfig,
                       rng: np.random.Generator | None = None, tau: float = 0.0,
                       params_nominal: SystemParams | None = None) -> MeasurementRecord:
    """Rotate ``psi`` into ``basis`` and draw ``cfg.n_shots`` three-outcome samples."""
    psi = np.asarray(psi, dtype=complex)
    norm2 = float(np.vdot(psi, psi).real)
    if norm2 > 1 + 1e-6:
        raise InvalidState(f"state norm^2 = {norm2} exceeds 1")
    if basis not in BASES:
        raise ValueError(f"basis must be one of {BASES}")
    if rng is None:
        rng = cfg.rng()
    pulse = _BASIS_PULSE[basis]
    if pulse is not None:
        axis, angle = pulse
        psi = evolve(PulseSequence((Rotation(axis, _jittered(angle, cfg, rng)),)), psi)

    p0, p1 = abs(psi[0]) ** 2, abs(psi[1]) ** 2
    # readout errors act only on the population still in the qubit manifold
    p0, p1 = (p0 * (1 - cfg.readout_p01) + p1 * cfg.readout_p10,
              p1 * (1 - cfg.readout_p10) + p0 * cfg.readout_p01)
    p_lost = max(1.0 - p0 - p1, 0.0)
    probs = np.array([p0, p1, p_lost])
    probs = probs / probs.sum()
    if cfg.exact:
        counts = tuple(float(v) for v in probs)
    else:
        counts = tuple(int(v) for v in rng.multinomial(cfg.n_shots, probs))
    return MeasurementRecord(basis, counts, cfg.n_shots, tau, params_nominal)


# -- calibration -------------------------------------------------------------

def default_decay_times(gamma: float, n: int = 20) -> np.ndarray:
    """``n`` uniform times on ``[0, 2/(4 gamma)]``."""
    return np.linspace(0.0, 2 / (4 * gamma), n)


def simulate_dissipation(gamma: float, taus, cfg: ShotConfig,
                         rng: np.random.Generator | None = None) -> list[MeasurementRecord]:
    """Prepare ``|1>``, hold under pure dissipation, measure Z at each time."""
    if rng is None:
        rng = cfg.rng()
    params = SystemParams(0.0, gamma)
    actual = _actual_params(params, cfg, rng).gamma
    seqs = [PulseSequence((HoldDissipation(actual, float(t)),)) for t in taus]
    return [sample_measurement(evolve(s, KET1), "Z", cfg, rng, float(t), params)
            for s, t in zip(seqs, taus)]


def simulate_rabi(J: float, taus, cfg: ShotConfig,
                  rng: np.random.Generator | None = None) -> list[MeasurementRecord]:
    """Prepare ``|0>``, drive with coupling ``J`` only, measure Z at each time."""
    if rng is None:
        rng = cfg.rng()
    params = SystemParams(J, 0.0)
    return [sample_measurement(evolve(PulseSequence((HoldRabi(J, float(t)),)), KET0),
                               "Z", cfg, rng, float(t), params)
            for t in taus]


def _times_and_p1(records) -> tuple[np.ndarray, np.ndarray, int | None]:
    t = np.array([r.tau for r in records], dtype=float)
    p = np.array([r.p1 for r in records], dtype=float)
    shots = {r.n_shots for r in records}
    if len(shots) != 1:
        raise ValueError("records must share one shot count")
    return t, p, shots.pop()


def calibrate_gamma(records: list[MeasurementRecord]) -> FitResult:
    """Fit the ``|1>`` population of pure-dissipation runs to ``exp(-4 gamma tau)``."""
    return fit_decay(*_times_and_p1(records))


def calibrate_j(records: list[MeasurementRecord]) -> FitResult:
    """Fit the ``|1>`` population of Rabi runs to ``sin^2(J tau)``."""
    return fit_rabi(*_times_and_p1(records))


# -- eigenvalue protocol -------------------------------------------------------

def overlap_sequence(params: SystemParams, tau: float) -> PulseSequence:
    """``Rx(pi/2)``, the H_APT sandwich, then ``Rx(-pi/2)``."""
    return (PulseSequence((Rotation("x", math.pi / 2),))
            + compile_apt_evolution(params, tau)
            + PulseSequence((Rotation("x", -math.pi / 2),)))


def measure_overlap_p(params: SystemParams, tau: float, cfg: ShotConfig,
                      rng: np.random.Generator | None = None) -> float:
    """Estimated return probability ``P(tau)``: the fraction of shots read in ``|0>``."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if rng is None:
        rng = cfg.rng()
    actual = _actual_params(params, cfg, rng)
    seq = _noisy_sequence(overlap_sequence(actual, tau), cfg, rng)
    rec = sample_measurement(evolve(seq, KET0), "Z", cfg, rng, tau, params)
    return rec.p0


def _std(values: np.ndarray) -> float:
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


def run_eigenvalue_protocol(gamma_nominal: float, j_list, cfg: ShotConfig,
                            n_repeats: int = 3, decay_times=None) -> list[EigenvalueEstimate]:
    """
    Recover the normalized eigenvalues at each coupling in ``j_list``.

    For every ``J`` and every repetition: re-calibrate gamma from fresh
    dissipation data, measure ``P`` at ``tau0 = 1/J``, invert it to
    ``w = sqrt(J^2 - gamma^2)`` and form ``E+- = -i +- w/gamma_cal``. Each
    point ``k`` draws from its own generator seeded with ``cfg.seed ^ k``.
    Failed repetitions are dropped; a point with none left has NaN entries.
    """
    if gamma_nominal <= 0:
        raise ValueError("gamma_nominal must be > 0")
    if n_repeats < 1:
        raise ValueError("n_repeats must be >= 1")
    if decay_times is None:
        decay_times = default_decay_times(gamma_nominal)
    out = []
    for k, J in enumerate(j_list):
        if J <= 0:
            raise ValueError("all J must be > 0")
        rng = cfg.rng(k)
        params = SystemParams(float(J), gamma_nominal)
        tau0 = 1.0 / J
        samples = []
        for _ in range(n_repeats):
            try:
                g_cal = calibrate_gamma(simulate_dissipation(gamma_nominal, decay_times, cfg, rng)).value
                P = measure_overlap_p(params, tau0, cfg, rng)
                w = analytics.invert_overlap(P, tau0, g_cal)
            except (InvalidOverlap, FitDiverged):
                continue
            samples.append(-1j + w / g_cal)
        ratio = J / gamma_nominal
        if not samples:
            nan = complex(math.nan, math.nan)
            out.append(EigenvalueEstimate(ratio, nan, nan, math.nan, math.nan, 0))
            continue
        s = np.array(samples)
        ep = complex(s.mean())
        out.append(EigenvalueEstimate(
            ratio, ep, -2j - ep, _std(s.real), _std(s.imag), len(samples), tuple(samples)))
    return out


def sweep_csv(estimates: list[EigenvalueEstimate], gamma: float, comments=()) -> str:
    """Sweep table with measured and theoretical ``E+`` columns (NaN -> empty field)."""
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ratio", "re_E_plus", "im_E_plus", "std_re", "std_im", "n_ok",
                "re_E_plus_theory", "im_E_plus_theory"])
    for e in estimates:
        th, _ = eigenvalues_apt(SystemParams(e.ratio * gamma, gamma))

        def f(v):
            return "" if math.isnan(v) else repr(float(v))
        w.writerow([f(e.ratio), f(e.E_plus.real), f(e.E_plus.imag), f(e.std_real),
                    f(e.std_imag), e.n_ok, f(th.real), f(th.imag)])
    return buf.getvalue()


def sweep_json(estimates: list[EigenvalueEstimate], gamma: float, cfg: ShotConfig,
               n_repeats: int) -> str:
    def num(v):
        return None if math.isnan(v) else float(v)
    doc = {
        "params": {"gamma": gamma, "n_repeats": n_repeats, "n_shots": cfg.n_shots},
        "tau_us": [1.0 / (e.ratio * gamma) for e in estimates],
        "estimates": [
            {"ratio": e.ratio, "re_E_plus": num(e.E_plus.real), "im_E_plus": num(e.E_plus.imag),
             "re_E_minus": num(e.E_minus.real), "im_E_minus": num(e.E_minus.imag),
             "std_re": num(e.std_real), "std_im": num(e.std_imag), "n_ok": e.n_ok}
            for e in estimates
        ],
        "seeds": [cfg.seed ^ k for k in range(len(estimates))],
        "noise_model": cfg.noise_model,
    }
    return json.dumps(doc, indent=2)


# -- tomography ----------------------------------------------------------------

@dataclass(frozen=True)
class TomographyResult:
    rho_exp: np.ndarray
    rho_theory: np.ndarray
    fidelity: float
    records: tuple = field(default=(), repr=False)


def fidelity(rho_th: np.ndarray, rho_exp: np.ndarray) -> float:
    """``|Tr(a b)| / sqrt(Tr(a^2) Tr(b^2))`` of the trace-normalized matrices."""
    a = np.asarray(rho_th, dtype=complex)
    b = np.asarray(rho_exp, dtype=complex)
    a = a / np.trace(a)
    b = b / np.trace(b)
    num = abs(np.trace(a @ b))
    den = math.sqrt(abs(np.trace(a @ a)) * abs(np.trace(b @ b)))
    return float(min(num / den, 1.0))


def project_psd(rho: np.ndarray) -> np.ndarray:
    """Clip negative eigenvalues of a Hermitian matrix to zero."""
    rho = (rho + rho.conj().T) / 2
    vals, vecs = np.linalg.eigh(rho)
    if vals.min() >= 0:
        return rho
    vals = np.clip(vals, 0.0, None)
    return (vecs * vals) @ vecs.conj().T


def reconstruct(records: dict[str, MeasurementRecord]) -> np.ndarray:
    """
    Sub-normalized density matrix from Z, X and Y records.

    Populations come from the Z record; ``<sx>`` and ``<sy>`` from the
    ``p0 - p1`` imbalances, all per shot so the lost fraction stays out of
    the trace.
    """
    fz, fx, fy = (records[b].frequencies for b in BASES)
    sx = fx[0] - fx[1]
    sy = fy[0] - fy[1]
    rho01 = (sx - 1j * sy) / 2
    return np.array([[fz[0], rho01], [np.conj(rho01), fz[1]]], dtype=complex)


def tomography(params: SystemParams, tau: float, cfg: ShotConfig,
               rng: np.random.Generator | None = None) -> TomographyResult:
    """Tomography of the state reached from ``|0>`` after ``exp(-i H_APT tau)``."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if rng is None:
        rng = cfg.rng()
    records = {}
    for basis in BASES:
        actual = _actual_params(params, cfg, rng)
        seq = _noisy_sequence(compile_apt_evolution(actual, tau), cfg, rng)
        records[basis] = sample_measurement(evolve(seq, KET0), basis, cfg, rng, tau, params)
    rho = project_psd(reconstruct(records))
    tr = float(np.trace(rho).real)
    if tr <= 1e-6:
        raise DegenerateTrace(f"reconstructed trace {tr:g} <= 1e-6")
    theory = analytics.rho_closed(params, tau).to_array()
    return TomographyResult(rho, theory, fidelity(theory, rho), tuple(records.values()))


def record_to_dict(rec: MeasurementRecord) -> dict:
    d = asdict(rec)
    d["counts"] = list(rec.counts)
    if rec.params_nominal is not None:
        d["params_nominal"] = {"J": rec.params_nominal.J, "gamma": rec.params_nominal.gamma}
    return d
