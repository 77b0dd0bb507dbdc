"""
One-parameter nonlinear least squares for the calibration curves.

``fit_decay`` fits ``p(t) = exp(-4 gamma t)`` and ``fit_rabi`` fits
``p(t) = sin^2(J t)``. Both refine a starting value with a damped
Gauss-Newton iteration and report a residual-based standard error.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AliasWarning, FitDiverged

MAX_ITER = 50
STEP_TOL = 1e-12
MAX_BAD_STEPS = 10


@dataclass(frozen=True)
class FitResult:
    value: float
    stderr: float
    iterations: int
    alias_warning: bool = False

    def __iter__(self):
        # allows ``value, stderr = fit_decay(...)``
        return iter((self.value, self.stderr))


def gauss_newton_1d(
    model: Callable[[float, np.ndarray], np.ndarray],
    deriv: Callable[[float, np.ndarray], np.ndarray],
    t: np.ndarray,
    y: np.ndarray,
    x0: float,
) -> tuple[float, int]:
    """
    Minimize ``sum((y - model(x, t))**2)`` over a scalar ``x``.

    Each Gauss-Newton step is halved until the cost decreases. Ten halvings
    without a decrease count as divergence unless the proposed step is
    already at round-off level.
    """
    x = float(x0)
    r = y - model(x, t)
    cost = float(r @ r)
    for it in range(1, MAX_ITER + 1):
        jac = deriv(x, t)
        jj = float(jac @ jac)
        if jj == 0.0:
            return x, it
        step = float(jac @ r) / jj
        lam = 1.0
        for _ in range(MAX_BAD_STEPS):
            x_new = x + lam * step
            r_new = y - model(x_new, t)
            cost_new = float(r_new @ r_new)
            if cost_new <= cost:
                break
            lam /= 2
        else:
            if abs(step) <= 1e-7 * max(abs(x), 1e-300) or cost <= 1e-28:
                return x, it
            raise FitDiverged(
                f"cost did not decrease over {MAX_BAD_STEPS} damped steps at x={x!r}")
        x, r, cost = x_new, r_new, cost_new
        if abs(lam * step) <= STEP_TOL * max(abs(x), 1e-300):
            return x, it
    return x, MAX_ITER


def _stderr(jac: np.ndarray, r: np.ndarray, p_model: np.ndarray, n_shots: int | None) -> float:
    """
    Standard error of the least-squares estimate.

    With a known shot count the binomial variance ``p(1-p)/N`` of each
    point is propagated through the (unweighted) normal equations; the
    pooled residual variance would understate the error because the points
    near ``p = 0`` or ``p = 1`` carry almost no noise.
    """
    n = len(r)
    jj = float(jac @ jac)
    if jj == 0.0:
        return float("inf")
    if n_shots is not None:
        var = np.clip(p_model * (1 - p_model), 0.0, None) / n_shots
        return math.sqrt(float(jac**2 @ var)) / jj
    if n < 2:
        return 0.0
    return math.sqrt(float(r @ r) / (n - 1) / jj)


def _decay(g, t):
    return np.exp(-4 * g * t)


def _decay_d(g, t):
    return -4 * t * np.exp(-4 * g * t)


def fit_decay(t, p, n_shots: int | None = None) -> FitResult:
    """
    Fit ``p = exp(-4 gamma t)``, starting from a log-linear fit through the
    origin. ``n_shots`` (None for exact data) selects the error model.
    """
    t = np.asarray(t, dtype=float)
    p = np.asarray(p, dtype=float)
    if len(np.unique(t)) < 3:
        raise ValueError("need at least 3 distinct times")
    mask = (p > 0) & (t > 0)
    if mask.any():
        g0 = -float(t[mask] @ np.log(p[mask])) / (4 * float(t[mask] @ t[mask]))
    else:
        g0 = 1.0 / (4 * t.max())
    g0 = max(g0, 0.0)
    g, it = gauss_newton_1d(_decay, _decay_d, t, p, g0)
    model = _decay(g, t)
    return FitResult(g, _stderr(_decay_d(g, t), p - model, model, n_shots), it)


def _rabi(j, t):
    return np.sin(j * t) ** 2


def _rabi_d(j, t):
    return t * np.sin(2 * j * t)


def fit_rabi(t, p, n_shots: int | None = None, alias_rtol: float = 1e-3) -> FitResult:
    """
    Fit ``p = sin^2(J t)``.

    ``J`` is first located on a grid of spacing ``pi/(4 t_max)`` up to the
    sampling limit ``pi/(2 dt_min)``, then refined. ``alias_warning`` is set
    (and an :class:`AliasWarning` issued) when the data carry no modulation
    or when a second local minimum of the grid cost is within ``alias_rtol``
    of the best one, relative to the data's total sum of squares.
    """
    t = np.asarray(t, dtype=float)
    p = np.asarray(p, dtype=float)
    if len(np.unique(t)) < 8:
        raise ValueError("need at least 8 distinct times")
    ts = np.unique(t)
    t_max = float(ts[-1])
    j_max = math.pi / (2 * float(np.min(np.diff(ts))))
    grid = np.arange(0.0, j_max, math.pi / (4 * t_max))
    cost = np.array([np.sum((p - _rabi(j, t)) ** 2) for j in grid])

    best = int(np.argmin(cost))
    sst = float(np.sum((p - p.mean()) ** 2))
    interior = [k for k in range(len(grid))
                if (k == 0 or cost[k] <= cost[k - 1]) and (k == len(grid) - 1 or cost[k] <= cost[k + 1])]
    others = [cost[k] for k in interior if k != best]
    alias = bool(np.ptp(p) <= 1e-9)
    if others and min(others) - cost[best] <= alias_rtol * sst:
        alias = True

    j, it = gauss_newton_1d(_rabi, _rabi_d, t, p, float(grid[best]))
    j = abs(j)
    model = _rabi(j, t)
    if alias:
        warnings.warn(f"Rabi fit is ambiguous near J={j:g}", AliasWarning, stacklevel=2)
    return FitResult(j, _stderr(_rabi_d(j, t), p - model, model, n_shots), it, alias)
