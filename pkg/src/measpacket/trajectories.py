"""Bohmian trajectories of the measured packet.

Two independent routes: the closed form

    x(t) = q(t) + exp(t/2tau) * delta(t)/delta(0) * (x(0) - q(0)),

and direct integration of dx/dt = v(x, t) through the packet's velocity
field on the interpolated envelope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .dynamics import EnvelopeSolution
from .errors import ExponentOverflow, OutOfRange
from .integrators import dopri5
from .packet import velocity_field

Method = Literal["closed_form", "integrated"]

_LOG_MAX = 700.0


@dataclass(frozen=True)
class TrajectoryBundle:
    seeds: np.ndarray
    times: np.ndarray
    paths: np.ndarray  # shape (n_seeds, n_times)
    method: Method

    def half_width(self) -> np.ndarray:
        """Half the spread between the outermost paths at every time."""
        return 0.5 * (self.paths.max(axis=0) - self.paths.min(axis=0))


def stretch_factor(sol: EnvelopeSolution, t: float) -> float:
    """``exp(t/2tau) * delta(t)/delta(0)``, with the exponent kept in log space."""
    st = sol.state_at(t)
    log_f = 0.5 * t * sol.params.inv_tau + math.log(st.delta / sol.ic.a0)
    if log_f > _LOG_MAX:
        raise ExponentOverflow(f"trajectory stretch exp({log_f:.1f}) overflows at t={t!r}")
    return math.exp(log_f)


def trajectory_closed(sol: EnvelopeSolution, seed: float, t: float) -> float:
    if t == 0.0:
        return float(seed)
    st = sol.state_at(t)
    return st.q + stretch_factor(sol, t) * (seed - sol.ic.x0)


def trajectory_integrated(
    sol: EnvelopeSolution,
    seed: float,
    times: Sequence[float],
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> np.ndarray:
    """Positions at ``times`` from integrating the velocity field from ``seed`` at t=0."""
    times = np.asarray(times, dtype=float)
    if times.size and (times.min() < 0 or times.max() > sol.t_end):
        raise OutOfRange(f"times must lie in [0, {sol.t_end!r}]")
    params = sol.params

    def fun(t, x):
        return np.array([velocity_field(sol.state_at(t), x[0], params)])

    out = np.full(times.shape, float(seed))
    t_last = float(times.max()) if times.size else 0.0
    if t_last == 0.0:
        return out
    res = dopri5(fun, 0.0, [seed], t_last, rtol=rtol, atol=atol, stops=times)
    lookup = dict(zip(res.t.tolist(), res.y[:, 0].tolist()))
    for k, t in enumerate(times):
        if t > 0:
            out[k] = lookup[float(t)]
    return out


def bundle(
    sol: EnvelopeSolution,
    seeds: Sequence[float],
    times: Sequence[float],
    method: Method = "closed_form",
) -> TrajectoryBundle:
    seeds = np.asarray(seeds, dtype=float)
    times = np.asarray(times, dtype=float)
    if not np.all(np.isfinite(seeds)):
        raise ValueError("seeds must be finite")
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be sorted")
    if method == "closed_form":
        paths = np.array([[trajectory_closed(sol, s, t) for t in times] for s in seeds])
    elif method == "integrated":
        paths = np.array([trajectory_integrated(sol, s, times) for s in seeds])
    else:
        raise ValueError(f"unknown method {method!r}")
    return TrajectoryBundle(seeds, times, paths.reshape(len(seeds), len(times)), method)
