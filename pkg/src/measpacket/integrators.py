"""Explicit Runge-Kutta integrators.

``dopri5`` is the Dormand-Prince 5(4) embedded pair with local
extrapolation and FSAL. Requested ``stops`` are hit exactly by clipping
steps, so values there are genuine integrator nodes rather than
interpolants. ``rk4`` is the classical fixed-step scheme, kept for
convergence-order studies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NonFiniteState, StepSizeUnderflow

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
# difference between the 5th and embedded 4th order weights
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])

ORDER = 5


class RejectStep(Exception):
    """Raised by a right-hand side to ask the integrator for a smaller step."""


@dataclass
class OdeResult:
    t: np.ndarray
    y: np.ndarray
    f: np.ndarray
    n_rejected: int = 0


def _initial_step(fun, t0, y0, f0, direction, rtol, atol) -> float:
    scale = atol + np.abs(y0) * rtol
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    try:
        f1 = fun(t0 + direction * h0, y0 + direction * h0 * f0)
    except RejectStep:
        return h0
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / ORDER)
    return min(100 * h0, h1)


def dopri5(
    fun: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0: Sequence[float],
    t_end: float,
    *,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    h_min: float = 1e-13,
    h_max: float = math.inf,
    stops: Sequence[float] = (),
    max_steps: int = 1_000_000,
    accept: Callable[[float, np.ndarray], None] | None = None,
) -> OdeResult:
    """Integrate ``y' = fun(t, y)`` forward from ``t0`` to ``t_end``.

    ``accept(t, y)`` is called on every accepted node and may raise to abort.
    Returns every accepted node (including all ``stops`` inside the
    interval) with the right-hand side evaluated there.
    """
    if not t_end > t0:
        raise ValueError("t_end must exceed t0")
    y = np.array(y0, dtype=float)
    t = float(t0)
    f = np.asarray(fun(t, y), dtype=float)
    stops = sorted({float(s) for s in stops if t0 < s < t_end} | {float(t_end)})

    ts, ys, fs = [t], [y.copy()], [f.copy()]
    h = min(_initial_step(fun, t, y, f, 1.0, rtol, atol), h_max, t_end - t0)
    n_rej = 0
    k = np.empty((7, y.size))
    stop_idx = 0
    last_problem = "step"

    for _ in range(max_steps):
        target = stops[stop_idx]
        hit = False
        h_free = h
        if t + h >= target or target - (t + h) < 1e-12 * max(1.0, abs(target)):
            h = target - t
            hit = True

        k[0] = f
        try:
            for s in range(1, 7):
                ys_ = y + h * (np.dot(_A[s], k[:s]))
                k[s] = fun(t + _C[s] * h, ys_)
            y_new = ys_
            err = h * np.dot(_E, k)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err_norm = float(np.sqrt(np.mean((err / scale) ** 2)))
            if not (np.all(np.isfinite(y_new)) and math.isfinite(err_norm)):
                last_problem = "nonfinite"
                err_norm = math.inf
        except RejectStep:
            last_problem = "reject"
            err_norm = math.inf

        if err_norm <= 1.0:
            t_new = target if hit else t + h
            if accept is not None:
                accept(t_new, y_new)
            t, y, f = t_new, y_new, k[6].copy()
            ts.append(t)
            ys.append(y.copy())
            fs.append(f.copy())
            if hit:
                stop_idx += 1
                if stop_idx == len(stops):
                    return OdeResult(np.array(ts), np.array(ys), np.array(fs), n_rej)
            fac = 5.0 if err_norm == 0 else min(5.0, 0.9 * err_norm ** (-1.0 / ORDER))
            # a clipped step says little about the natural step size
            h = min(max(h * fac, h_free) if hit else h * fac, h_max)
            last_problem = "step"
        else:
            n_rej += 1
            fac = 0.2 if not math.isfinite(err_norm) else max(0.2, 0.9 * err_norm ** (-1.0 / ORDER))
            h *= fac
            if h < h_min:
                if last_problem == "nonfinite":
                    raise NonFiniteState(f"non-finite state near t={t:.6g}")
                if last_problem == "reject":
                    raise RejectStep(f"right-hand side rejected every step near t={t:.6g}")
                raise StepSizeUnderflow(f"step size {h:.3g} below h_min at t={t:.6g}")
    raise StepSizeUnderflow(f"exceeded {max_steps} steps before t_end={t_end}")


def rk4(
    fun: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0: Sequence[float],
    t_end: float,
    n_steps: int,
) -> np.ndarray:
    """Classical fixed-step RK4; returns the state at ``t_end``."""
    y = np.array(y0, dtype=float)
    h = (t_end - t0) / n_steps
    for i in range(n_steps):
        t = t0 + i * h
        k1 = fun(t, y)
        k2 = fun(t + h / 2, y + h / 2 * k1)
        k3 = fun(t + h / 2, y + h / 2 * k2)
        k4 = fun(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def hermite(t0, t1, y0, y1, f0, f1, t):
    """Cubic Hermite interpolant on ``[t0, t1]`` from values and slopes."""
    dt = t1 - t0
    s = (t - t0) / dt
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return h00 * y0 + h10 * dt * f0 + h01 * y1 + h11 * dt * f1
