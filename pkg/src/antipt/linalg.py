"""
Exact-size 2x2 complex linear algebra.

Matrices are plain ``numpy`` arrays of shape (2, 2) and dtype complex128;
states are arrays of shape (2,). Two independent matrix exponentials are
provided: a closed form (:func:`expm_closed`) and a scaling-and-squaring
Taylor series (:func:`expm_series`) that serves as its oracle.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

I2 = np.eye(2, dtype=complex)
IX = 0.5 * np.array([[0, 1], [1, 0]], dtype=complex)
IY = 0.5 * np.array([[0, -1j], [1j, 0]], dtype=complex)
IZ = 0.5 * np.array([[1, 0], [0, -1]], dtype=complex)
SX, SY, SZ = 2 * IX, 2 * IY, 2 * IZ

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)

DEFAULT_TOL_DEGEN = 1e-9


def mat(a00, a01, a10, a11) -> np.ndarray:
    """Build a 2x2 complex matrix from row-major entries."""
    return np.array([[a00, a01], [a10, a11]], dtype=complex)


def state(amp0, amp1) -> np.ndarray:
    return np.array([amp0, amp1], dtype=complex)


def norm(m: np.ndarray) -> float:
    """Max-absolute-entry norm."""
    return float(np.max(np.abs(m)))


def compose(c0, cx, cy, cz) -> np.ndarray:
    """Return ``c0*I + cx*sx + cy*sy + cz*sz`` (Pauli matrices ``s = 2*I_alpha``)."""
    return c0 * I2 + cx * SX + cy * SY + cz * SZ


def decompose(m: np.ndarray) -> tuple[complex, complex, complex, complex]:
    """Inverse of :func:`compose`."""
    m = np.asarray(m, dtype=complex)
    c0 = (m[0, 0] + m[1, 1]) / 2
    cz = (m[0, 0] - m[1, 1]) / 2
    cx = (m[0, 1] + m[1, 0]) / 2
    cy = (m[1, 0] - m[0, 1]) / 2j
    return complex(c0), complex(cx), complex(cy), complex(cz)


def expm_closed(m: np.ndarray) -> np.ndarray:
    """
    Closed-form exponential of a 2x2 matrix.

    Writes ``M = mu*I + N`` with ``N`` traceless, so that ``N @ N = s**2 * I``
    and ``exp(M) = exp(mu) * (cosh(s) I + sinh(s)/s N)``. For ``|s| <= 1e-6``
    both even functions of ``s`` are replaced by their three-term series,
    which removes the 0/0 when ``N`` is nilpotent.
    """
    m = np.asarray(m, dtype=complex)
    mu = (m[0, 0] + m[1, 1]) / 2
    n = m - mu * I2
    s2 = n[0, 0] * n[0, 0] + n[0, 1] * n[1, 0]
    if abs(s2) <= 1e-12:
        ch = 1 + s2 / 2 + s2 * s2 / 24
        shc = 1 + s2 / 6 + s2 * s2 / 120
    else:
        s = cmath.sqrt(s2)
        ch = cmath.cosh(s)
        shc = cmath.sinh(s) / s
    return cmath.exp(mu) * (ch * I2 + shc * n)


def expm_series(m: np.ndarray) -> np.ndarray:
    """
    Scaling-and-squaring Taylor exponential.

    The matrix is scaled by ``2**-k`` until its norm is at most 0.5, the
    series is summed until a term drops below 1e-18 in norm, and the result
    is squared ``k`` times.
    """
    m = np.asarray(m, dtype=complex)
    nrm = norm(m)
    k = 0
    if nrm > 0.5:
        k = int(np.ceil(np.log2(nrm / 0.5)))
    a = m / 2.0**k
    out = I2.copy()
    term = I2.copy()
    for j in range(1, 100):
        term = term @ a / j
        out = out + term
        if norm(term) < 1e-18:
            break
    for _ in range(k):
        out = out @ out
    return out


@dataclass(frozen=True)
class EigenPair2:
    eigenvalue1: complex
    eigenvalue2: complex
    eigvec1: np.ndarray
    eigvec2: np.ndarray
    degenerate: bool
    condition: float

    @property
    def eigenvalues(self) -> tuple[complex, complex]:
        return self.eigenvalue1, self.eigenvalue2


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # unit Dirac norm, largest component real and positive
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


def _eigvec(m: np.ndarray, lam: complex) -> np.ndarray:
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    v1 = np.array([b, lam - a])
    v2 = np.array([lam - d, c])
    v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
    if np.linalg.norm(v) == 0.0:
        # m is a multiple of the identity; every vector is an eigenvector
        return None
    return _fix_phase(v)


def eig2(m: np.ndarray, tol_degen: float = DEFAULT_TOL_DEGEN) -> EigenPair2:
    """
    Eigen-decomposition through the characteristic quadratic.

    Eigenvalues are ``tr/2 +- sqrt(((a - d)/2)**2 + b*c)``, which equals the
    usual ``sqrt((tr/2)**2 - det)`` but avoids cancellation between the two
    terms. The square root is on the principal branch and ``eigenvalue1``
    takes the ``+`` sign.
    """
    m = np.asarray(m, dtype=complex)
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    half_tr = (a + d) / 2
    disc = ((a - d) / 2) ** 2 + b * c
    root = cmath.sqrt(disc)
    lam1, lam2 = complex(half_tr + root), complex(half_tr - root)
    degenerate = abs(lam1 - lam2) <= tol_degen * max(norm(m), 1.0)

    v1 = _eigvec(m, lam1)
    v2 = _eigvec(m, lam2)
    if v1 is None:
        v1, v2 = KET0.copy(), KET1.copy()
    elif degenerate:
        v2 = v1.copy()
    vmat = np.column_stack([v1, v2])
    sv = np.linalg.svd(vmat, compute_uv=False)
    cond = float(sv[0] / sv[1]) if sv[1] > 0 else float("inf")
    return EigenPair2(lam1, lam2, v1, v2, bool(degenerate), cond)
