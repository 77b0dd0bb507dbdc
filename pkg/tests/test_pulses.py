import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from antipt.analytics import rho_closed
from antipt.linalg import I2, KET0, KET1, expm_series, norm
from antipt.model import SystemParams, h_apt, h_m
from antipt.pulses import (HoldDissipation, HoldHM, HoldRabi, PulseSequence, Rotation,
                           compile_apt_evolution, evolve, segment_propagator)

from conftest import oracle_propagator

rates = st.floats(0, 0.3)
durations = st.floats(0, 60)
segments = st.one_of(
    st.builds(Rotation, st.sampled_from("xyz"), st.floats(-7, 7)),
    st.builds(HoldHM, st.builds(SystemParams, rates, rates), durations),
    st.builds(HoldDissipation, rates, durations),
    st.builds(HoldRabi, rates, durations),
)
sequences = st.lists(segments, max_size=6).map(PulseSequence)
states = st.tuples(*[st.floats(-1, 1)] * 4).map(
    lambda v: np.array([v[0] + 1j * v[1], v[2] + 1j * v[3]]))


def test_rotation_y_half_pi():
    u = segment_propagator(Rotation("y", math.pi / 2))
    assert norm(u - np.array([[1, -1], [1, 1]]) / math.sqrt(2)) < 1e-15


def test_rotation_x_half_pi_on_ground():
    psi = evolve(PulseSequence((Rotation("x", math.pi / 2),)), KET0)
    assert np.allclose(psi, np.array([1, -1j]) / math.sqrt(2), atol=1e-15)


def test_dissipation_hold_on_excited():
    g, tau = 0.05, 5.0
    psi = evolve(PulseSequence((HoldDissipation(g, tau),)), KET1)
    assert abs(psi[1]) ** 2 == pytest.approx(math.exp(-4 * g * tau), rel=1e-14)


def test_hold_hm_against_series():
    p = SystemParams(0.06, 0.03)
    u = segment_propagator(HoldHM(p, 50.0))
    assert norm(u - expm_series(-1j * h_m(p) * 50.0)) <= 1e-10


def test_rabi_hold_population():
    J, tau = 0.06, 11.0
    psi = evolve(PulseSequence((HoldRabi(J, tau),)), KET0)
    assert abs(psi[1]) ** 2 == pytest.approx(math.sin(J * tau) ** 2, rel=1e-13)


def test_empty_sequence():
    assert np.array_equal(PulseSequence().propagator(), I2)
    psi = np.array([0.6, 0.8j])
    assert np.array_equal(evolve(PulseSequence(), psi), psi)


def test_compile_order_and_zero_time():
    seq = compile_apt_evolution(SystemParams(0.06, 0.03), 0.0)
    assert [type(s) for s in seq] == [Rotation, HoldHM, Rotation]
    assert seq.segments[0].angle == -math.pi / 2
    assert norm(seq.propagator() - I2) < 1e-15


def test_compile_hermitian_limit():
    J, tau = 0.07, 13.0
    u = compile_apt_evolution(SystemParams(J, 0.0), tau).propagator()
    assert norm(u - np.diag([np.exp(1j * J * tau), np.exp(-1j * J * tau)])) < 1e-14


def test_sandwich_identity_grid():
    vals = np.linspace(0, 0.2, 20)
    for J in vals:
        for g in vals:
            p = SystemParams(float(J), float(g))
            for tau in (1.0, 5.0, 10.0, 50.0):
                u = compile_apt_evolution(p, tau).propagator()
                assert norm(u - oracle_propagator(p, tau)) <= 1e-10


def test_sandwich_from_ground_matches_closed_form():
    p = SystemParams(0.06, 0.03)
    for tau in (0.0, 3.0, 10.0, 40.0):
        psi = evolve(compile_apt_evolution(p, tau), KET0)
        rho = rho_closed(p, tau)
        assert abs(psi[0]) ** 2 == pytest.approx(rho.rho00, abs=1e-12)
        assert abs(psi[1]) ** 2 == pytest.approx(rho.rho11, abs=1e-12)


@settings(max_examples=200)
@given(sequences, states)
def test_norm_never_grows(seq, psi):
    n0 = np.linalg.norm(psi)
    assert np.linalg.norm(evolve(seq, psi)) <= n0 * (1 + 1e-12) + 1e-300


@settings(max_examples=100)
@given(sequences, sequences, states)
def test_composition(s1, s2, psi):
    a = evolve(s1 + s2, psi)
    b = evolve(s2, evolve(s1, psi))
    assert np.allclose(a, b, atol=1e-12, rtol=0)


@given(st.builds(SystemParams, rates, rates), durations, durations)
def test_hold_semigroup(p, t1, t2):
    u12 = segment_propagator(HoldHM(p, t1)) @ segment_propagator(HoldHM(p, t2))
    assert norm(u12 - segment_propagator(HoldHM(p, t1 + t2))) <= 1e-10


@given(sequences)
def test_json_round_trip(seq):
    assert PulseSequence.from_json(seq.to_json()) == seq


def test_json_schema():
    seq = compile_apt_evolution(SystemParams(0.1, 1 / 3), 0.1 + 0.2)
    text = seq.to_json()
    assert '"kind": "hold_hm"' in text and '"axis": "y"' in text
    back = PulseSequence.from_json(text)
    assert back.segments[1].params.gamma == 1 / 3
    assert back.segments[1].duration == 0.1 + 0.2


def test_invalid_segments():
    with pytest.raises(ValueError):
        Rotation("w", 1.0)
    with pytest.raises(ValueError):
        HoldDissipation(0.1, -1.0)
    with pytest.raises(ValueError):
        PulseSequence.from_json('[{"kind": "laser"}]')
