import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from antipt.analytics import dissipation_decay, overlap_p
from antipt.errors import AliasWarning, DegenerateTrace, InvalidState
from antipt.fitting import fit_decay
from antipt.lab import (EigenvalueEstimate, ShotConfig, calibrate_gamma, calibrate_j,
                        default_decay_times, fidelity, measure_overlap_p, project_psd,
                        run_eigenvalue_protocol, sample_measurement, simulate_dissipation,
                        simulate_rabi, sweep_csv, sweep_json, tomography)
from antipt.linalg import KET0, KET1
from antipt.model import SystemParams, eigenvalues_apt
from antipt.pulses import HoldDissipation, PulseSequence, evolve

EXACT = ShotConfig(n_shots=None)
RABI_TIMES = np.linspace(0.0, 100.0, 21)


# -- sampling ----------------------------------------------------------------------

def test_ground_state_z_counts():
    rec = sample_measurement(KET0, "Z", ShotConfig(1000, seed=3))
    assert rec.counts == (1000, 0, 0)


def test_counts_sum_and_basis_rotations():
    psi = np.array([0.6, 0.8j]) * 0.9
    for basis in "ZXY":
        rec = sample_measurement(psi, basis, ShotConfig(5000, seed=1))
        assert sum(rec.counts) == 5000 and min(rec.counts) >= 0
    plus = (KET0 + KET1) / math.sqrt(2)
    plus_i = (KET0 + 1j * KET1) / math.sqrt(2)
    assert sample_measurement(plus, "X", EXACT).p0 == pytest.approx(1, abs=1e-15)
    assert sample_measurement(plus_i, "Y", EXACT).p0 == pytest.approx(1, abs=1e-15)


def test_dissipated_population_law_of_large_numbers():
    g, tau, n = 0.05, 5.0, 10**6
    psi = evolve(PulseSequence((HoldDissipation(g, tau),)), KET1)
    rec = sample_measurement(psi, "Z", ShotConfig(n, seed=11))
    p = dissipation_decay(g, tau)
    assert rec.counts[0] == 0
    assert abs(rec.counts[1] / n - p) <= 3 * math.sqrt(p * (1 - p) / n)
    assert rec.counts[2] == n - rec.counts[1]


def test_sampling_is_deterministic():
    psi = np.array([0.5, 0.5j])
    a = sample_measurement(psi, "X", ShotConfig(1234, seed=99))
    b = sample_measurement(psi, "X", ShotConfig(1234, seed=99))
    c = sample_measurement(psi, "X", ShotConfig(1234, seed=100))
    assert a == b and a != c


def test_rejects_overnormalized_state():
    with pytest.raises(InvalidState):
        sample_measurement(np.array([1.0, 0.1]), "Z", EXACT)


def test_readout_error():
    cfg = ShotConfig(None, readout_p01=0.1, readout_p10=0.2)
    assert sample_measurement(KET0, "Z", cfg).p1 == pytest.approx(0.1)
    assert sample_measurement(KET1, "Z", cfg).p0 == pytest.approx(0.2)


# -- calibration -------------------------------------------------------------------

@pytest.mark.parametrize("g", [0.022, 0.050])
def test_gamma_round_trip(g):
    fit = calibrate_gamma(simulate_dissipation(g, default_decay_times(g), EXACT))
    assert abs(fit.value - g) <= 1e-9
    value, stderr = fit
    assert stderr <= 1e-9


def test_gamma_needs_three_times():
    with pytest.raises(ValueError):
        fit_decay([0.0, 1.0, 1.0], [1.0, 0.9, 0.9])


@pytest.mark.slow
@pytest.mark.parametrize("g", [0.022, 0.050])
def test_gamma_coverage(g):
    taus = np.linspace(0, 2 / (4 * g), 10)
    hits = 0
    for seed in range(200):
        fit = calibrate_gamma(simulate_dissipation(g, taus, ShotConfig(1000, seed=seed)))
        hits += abs(fit.value - g) <= 3 * fit.stderr
    assert hits >= 190


@pytest.mark.parametrize("J", [0.06, 0.065])
def test_j_round_trip(J):
    fit = calibrate_j(simulate_rabi(J, RABI_TIMES, EXACT))
    assert abs(fit.value - J) <= 1e-9
    assert not fit.alias_warning


def test_j_noisy_fit_is_close():
    fit = calibrate_j(simulate_rabi(0.06, RABI_TIMES, ShotConfig(1000, seed=5)))
    assert abs(fit.value - 0.06) <= 5 * fit.stderr


def test_j_flat_data_warns():
    with pytest.warns(AliasWarning):
        fit = calibrate_j(simulate_rabi(0.0, RABI_TIMES, EXACT))
    assert fit.alias_warning
    assert abs(fit.value) < 1e-12


# -- overlap and protocol ----------------------------------------------------------

def test_overlap_exact_limits():
    p = SystemParams(0.065, 0.022)
    assert measure_overlap_p(p, 0.0, EXACT) == pytest.approx(1, abs=1e-15)
    for tau in (5.0, 30.0):
        assert measure_overlap_p(p, tau, EXACT) == pytest.approx(overlap_p(p, tau), abs=1e-14)
    ep = SystemParams(0.05, 0.05)
    assert measure_overlap_p(ep, 12.0, EXACT) == pytest.approx(math.exp(-2 * 0.05 * 12), rel=1e-13)


def test_overlap_million_shots():
    p = SystemParams(0.065, 0.022)
    for tau in (10.0, 40.0):
        P = overlap_p(p, tau)
        est = measure_overlap_p(p, tau, ShotConfig(10**6, seed=int(tau)))
        assert abs(est - P) <= 3 * math.sqrt(P * (1 - P) / 10**6)


@pytest.mark.slow
def test_overlap_estimator_variance():
    p, tau, n = SystemParams(0.065, 0.022), 20.0, 500
    P = overlap_p(p, tau)
    est = [measure_overlap_p(p, tau, ShotConfig(n, seed=s)) for s in range(200)]
    ratio = np.var(est, ddof=1) / (P * (1 - P) / n)
    assert 1 / 1.5 <= ratio <= 1.5


def test_noiseless_protocol():
    g = 0.05
    ratios = [0.2, 0.5, 1.0, 1.5, 2.0]
    est = run_eigenvalue_protocol(g, [r * g for r in ratios], EXACT, 3)
    for r, e in zip(ratios, est):
        truth = eigenvalues_apt(SystemParams(r * g, g))
        assert abs(e.E_plus - truth[0]) <= 1e-10 and abs(e.E_minus - truth[1]) <= 1e-10
        assert e.E_plus + e.E_minus == -2j
        assert e.std_real == 0 and e.std_imag == 0 and e.n_ok == 3
        if r < 1:
            assert e.E_plus.real == 0
        elif r == 1:
            assert e.E_plus == e.E_minus == -1j
        else:
            assert e.E_plus.imag == -1
            assert e.E_plus.real == pytest.approx(math.sqrt(r * r - 1), abs=1e-10)


def test_protocol_sum_rule_with_noise():
    est = run_eigenvalue_protocol(0.05, [0.03, 0.08], ShotConfig(500, seed=4), 3)
    for e in est:
        assert abs(e.E_plus + e.E_minus + 2j) <= 1e-12
        assert len(e.samples) == e.n_ok


def test_protocol_is_deterministic():
    cfg = ShotConfig(300, seed=12, gamma_jitter=0.05, angle_jitter=0.02)
    a = run_eigenvalue_protocol(0.05, [0.02, 0.06], cfg, 3)
    b = run_eigenvalue_protocol(0.05, [0.02, 0.06], cfg, 3)
    assert a == b
    assert sweep_csv(a, 0.05) == sweep_csv(b, 0.05)


def test_protocol_missing_points_are_not_fabricated():
    # one shot: P is often exactly 0, which cannot be inverted
    est = run_eigenvalue_protocol(0.05, [0.01] * 8, ShotConfig(1, seed=0), 1)
    missing = [e for e in est if e.missing]
    assert missing
    for e in missing:
        assert math.isnan(e.E_plus.real) and math.isnan(e.std_real)
    assert ",," in sweep_csv(est, 0.05)
    assert "null" in sweep_json(est, 0.05, ShotConfig(1), 1)


def test_estimate_fields():
    e = EigenvalueEstimate(1.0, -1j, -1j, 0.0, 0.0, 3)
    assert not e.missing


# -- tomography --------------------------------------------------------------------

def test_fidelity_limits():
    rho = np.array([[0.3, 0.1j], [-0.1j, 0.2]])
    assert fidelity(rho, rho) == pytest.approx(1, abs=1e-15)
    assert fidelity(rho, 0.37 * rho) == pytest.approx(1, abs=1e-15)
    assert fidelity(np.diag([1.0, 0]), np.diag([0, 1.0])) == 0


@settings(max_examples=50)
@given(st.floats(0.01, 0.3), st.floats(0.01, 0.3), st.floats(0, 20))
def test_ideal_tomography(J, g, tau):
    res = tomography(SystemParams(J, g), tau, EXACT)
    assert res.fidelity == pytest.approx(1, abs=1e-12)


def test_tomography_positivity_and_scaling():
    p = SystemParams(0.06, 0.4)
    for seed in range(10):
        res = tomography(p, 10.0, ShotConfig(300, seed=seed))
        assert np.linalg.eigvalsh(res.rho_exp).min() >= -1e-15
        assert 0 <= res.fidelity <= 1
        assert fidelity(2.5 * res.rho_theory, res.rho_exp) == pytest.approx(res.fidelity, abs=1e-12)


def test_project_psd():
    bad = np.array([[0.5, 0.6], [0.6, 0.5]])
    fixed = project_psd(bad)
    assert np.linalg.eigvalsh(fixed).min() >= -1e-15


def test_degenerate_trace():
    # population almost entirely lost
    with pytest.raises(DegenerateTrace):
        tomography(SystemParams(10.0, 5.0), 10.0, ShotConfig(100, seed=0))


@pytest.mark.slow
def test_tomography_shot_noise_median():
    p = SystemParams(0.15 * 0.4, 0.4)
    fs = [tomography(p, 10.0, ShotConfig(10**4, seed=s)).fidelity for s in range(50)]
    assert np.median(fs) >= 0.99


def test_noise_models_run():
    cfg = ShotConfig(2000, seed=3, gamma_jitter=0.1, angle_jitter=0.05,
                     readout_p01=0.01, readout_p10=0.02)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        res = tomography(SystemParams(0.06, 0.4), 10.0, cfg)
    assert 0.5 < res.fidelity <= 1
