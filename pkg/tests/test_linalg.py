import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from antipt.linalg import (I2, IY, EigenPair2, compose, decompose, eig2, expm_closed,
                           expm_series, mat, norm)
from antipt.model import SystemParams, h_apt, h_m

finite = st.floats(-3, 3, allow_nan=False)
cplx = st.builds(complex, finite, finite)
matrices = st.builds(mat, cplx, cplx, cplx, cplx)


def random_unit_disk(rng, n):
    r = np.sqrt(rng.uniform(0, 1, (n, 2, 2)))
    phi = rng.uniform(0, 2 * np.pi, (n, 2, 2))
    return r * np.exp(1j * phi)


@given(cplx, cplx, cplx, cplx)
def test_pauli_round_trip(c0, cx, cy, cz):
    back = decompose(compose(c0, cx, cy, cz))
    assert np.allclose(back, (c0, cx, cy, cz), atol=1e-14, rtol=0)


@pytest.mark.parametrize("expm", [expm_closed, expm_series])
def test_exp_of_zero_is_identity(expm):
    assert np.array_equal(expm(np.zeros((2, 2), complex)), I2)


def test_closed_form_y_rotation_by_pi():
    u = expm_closed(-1j * math.pi * IY)
    assert norm(u - mat(0, -1, 1, 0)) < 1e-15


def test_closed_form_nilpotent_at_ep():
    h = h_apt(SystemParams(0.05, 0.05)) + 1j * 0.05 * I2  # traceless part, squares to zero
    assert norm(h @ h) < 1e-16
    tau = 7.0
    assert norm(expm_closed(-1j * h * tau) - (I2 - 1j * h * tau)) < 1e-15


def test_series_diagonal():
    a, b = 0.3 - 2j, -1.7 + 0.4j
    out = expm_series(np.diag([a, b]))
    assert norm(out - np.diag([cmath.exp(a), cmath.exp(b)])) < 1e-14


def test_cross_oracle_unit_disk(rng):
    for m in random_unit_disk(rng, 1000):
        assert norm(expm_series(m) - expm_closed(m)) <= 1e-10


@settings(max_examples=300)
@given(matrices)
def test_cross_oracle_relative(m):
    a, b = expm_closed(m), expm_series(m)
    assert norm(a - b) <= 1e-10 * max(1.0, norm(b))


@given(matrices, st.floats(0, 2), st.floats(0, 2))
def test_group_law(m, t1, t2):
    lhs = expm_closed(m * (t1 + t2))
    rhs = expm_closed(m * t1) @ expm_closed(m * t2)
    assert norm(lhs - rhs) <= 1e-10 * max(1.0, norm(lhs))


@given(matrices)
def test_det_equals_exp_trace(m):
    e = expm_closed(m)
    det = e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0]
    ref = cmath.exp(m[0, 0] + m[1, 1])
    assert abs(det - ref) <= 1e-10 * abs(ref)


def test_eig_diagonal():
    pair = eig2(np.diag([1.0, -1.0]).astype(complex))
    assert pair.eigenvalues == (1, -1)
    assert np.allclose(pair.eigvec1, [1, 0]) and np.allclose(pair.eigvec2, [0, 1])
    assert not pair.degenerate
    assert pair.condition == pytest.approx(1.0)


def test_eig_at_exceptional_point():
    pair = eig2(h_apt(SystemParams(0.05, 0.05)))
    assert pair.degenerate
    assert pair.eigenvalue1 == pair.eigenvalue2 == -0.05j


def test_eig_hm_quadratic_formula():
    p = SystemParams(0.06, 0.03)
    m = h_m(p)
    pair = eig2(m)
    root = math.sqrt(0.06**2 - 0.03**2)
    assert abs(pair.eigenvalue1 - (-0.03j + root)) < 1e-15
    assert abs(pair.eigenvalue2 - (-0.03j - root)) < 1e-15
    for lam, v in [(pair.eigenvalue1, pair.eigvec1), (pair.eigenvalue2, pair.eigvec2)]:
        assert norm(m @ v - lam * v) <= 1e-10 * norm(m)
        assert np.linalg.norm(v) == pytest.approx(1.0)


def test_eig_scalar_matrix():
    pair = eig2(3j * I2)
    assert pair.degenerate
    assert isinstance(pair, EigenPair2)


@settings(max_examples=300)
@given(matrices)
def test_eigen_residuals(m):
    pair = eig2(m)
    if pair.degenerate:
        assert abs(pair.eigenvalue1 - pair.eigenvalue2) <= 1e-9 * max(norm(m), 1)
        return
    for lam, v in [(pair.eigenvalue1, pair.eigvec1), (pair.eigenvalue2, pair.eigvec2)]:
        assert norm(m @ v - lam * v) <= 1e-10 * max(norm(m), 1e-300) * 10
