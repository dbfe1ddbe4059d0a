"""Envelope dynamics: centre, width and phase offset of the Gaussian packet.

The packet is carried by five numbers ``(q, qdot, delta, deltadot, s0)``:

    q''     = -Omega(t)^2 q - (lam/m) X(t)
    delta'' = -delta'/tau - (Omega(t)^2 + 1/(4 tau^2)) delta + hbar^2 / (4 m^2 delta^3)
    s0'     = (m qdot^2/2 - m Omega^2 q^2/2 - lam q X - hbar^2/(4 m delta^2)) / hbar

``s0`` is a phase (dimensionless), integrated alongside the other four so
it shares their error control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .core import ConstantFrequency, InitialConditions, PhysicalParams, validate
from .errors import OutOfRange, WidthUnderflow
from .integrators import RejectStep, dopri5, hermite, rk4


class EnvelopeState(NamedTuple):
    t: float
    q: float
    qdot: float
    delta: float
    deltadot: float
    s0: float

    @property
    def vector(self) -> np.ndarray:
        return np.array(self[1:], dtype=float)


@dataclass(frozen=True)
class Controls:
    rtol: float = 1e-10
    atol: float = 1e-12
    h_min: float = 1e-13
    h_max: float = math.inf
    delta_min: float = 1e-8


def _derivative(t: float, y: np.ndarray, params: PhysicalParams, delta_min: float) -> np.ndarray:
    q, qdot, delta, deltadot, _ = y
    if not delta > delta_min:
        raise WidthUnderflow(f"width {delta:.3g} <= delta_min={delta_min:.3g} at t={t:.6g}")
    m, hbar, g = params.m, params.hbar, params.inv_tau
    w2 = params.omega(t) ** 2
    X = params.drive(t)
    qddot = -w2 * q - params.lam / m * X
    deltaddot = -g * deltadot - (w2 + 0.25 * g * g) * delta + hbar * hbar / (4 * m * m * delta**3)
    s0dot = (
        0.5 * m * qdot * qdot
        - 0.5 * m * w2 * q * q
        - params.lam * q * X
        - hbar * hbar / (4 * m * delta * delta)
    ) / hbar
    return np.array([qdot, qddot, deltadot, deltaddot, s0dot])


def rhs(state: EnvelopeState, params: PhysicalParams, delta_min: float = 1e-8) -> tuple[float, ...]:
    """Time derivative ``(qdot, qddot, deltadot, deltaddot, s0dot)`` of a state."""
    return tuple(float(v) for v in _derivative(state.t, state.vector, params, delta_min))


def initial_state(params: PhysicalParams, ic: InitialConditions) -> EnvelopeState:
    return EnvelopeState(0.0, ic.x0, ic.v0, ic.a0, ic.b0, ic.phase_offset(params))


@dataclass(frozen=True)
class EnvelopeSolution:
    """Integrated envelope with cubic Hermite interpolation between nodes.

    ``t``, ``y`` (rows of ``q, qdot, delta, deltadot, s0``) and ``f`` (their
    time derivatives) hold every accepted integrator node, which includes
    any explicitly requested sample times.
    """

    params: PhysicalParams
    ic: InitialConditions
    t: np.ndarray
    y: np.ndarray
    f: np.ndarray
    controls: Controls = field(default_factory=Controls)

    def __post_init__(self):
        for a in (self.t, self.y, self.f):
            a.setflags(write=False)

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    @property
    def samples(self) -> list[EnvelopeState]:
        return [EnvelopeState(float(t), *map(float, row)) for t, row in zip(self.t, self.y)]

    def __len__(self) -> int:
        return len(self.t)

    def state_at(self, t: float) -> EnvelopeState:
        t = float(t)
        if not 0.0 <= t <= self.t_end:
            raise OutOfRange(f"t={t!r} outside [0, {self.t_end!r}]")
        i = int(np.searchsorted(self.t, t, side="left"))
        if i < len(self.t) and self.t[i] == t:
            return EnvelopeState(t, *map(float, self.y[i]))
        y = hermite(self.t[i - 1], self.t[i], self.y[i - 1], self.y[i], self.f[i - 1], self.f[i], t)
        return EnvelopeState(t, *map(float, y))

    def derivative_at(self, t: float) -> tuple[float, ...]:
        """Right-hand side evaluated on the interpolated state."""
        return rhs(self.state_at(t), self.params, self.controls.delta_min)

    def column(self, name: str) -> np.ndarray:
        return self.y[:, EnvelopeState._fields.index(name) - 1]


def integrate(
    params: PhysicalParams,
    ic: InitialConditions,
    t_end: float,
    controls: Controls | None = None,
    sample_times: Sequence[float] = (),
    n_samples: int = 0,
) -> EnvelopeSolution:
    """Integrate the envelope from the initial conditions up to ``t_end``.

    ``sample_times`` and ``n_samples`` uniform times on ``[0, t_end]`` are
    added to the integrator's own steps as exact nodes.
    """
    validate(params, ic)
    if not t_end > 0:
        raise ValueError(f"t_end must be > 0, got {t_end!r}")
    controls = controls or Controls()
    dmin = controls.delta_min
    if not ic.a0 > dmin:
        raise WidthUnderflow(f"initial width {ic.a0!r} <= delta_min={dmin!r}")

    def fun(t, y):
        try:
            return _derivative(t, y, params, dmin)
        except WidthUnderflow:
            raise RejectStep from None

    def accept(t, y):
        if not y[2] > dmin:
            raise WidthUnderflow(f"width {y[2]:.3g} <= delta_min={dmin:.3g} at t={t:.6g}")

    stops = list(sample_times)
    if n_samples:
        stops.extend(np.linspace(0.0, t_end, n_samples))
    y0 = initial_state(params, ic).vector
    try:
        res = dopri5(
            fun, 0.0, y0, t_end,
            rtol=controls.rtol, atol=controls.atol,
            h_min=controls.h_min, h_max=controls.h_max,
            stops=stops, accept=accept,
        )
    except RejectStep as exc:
        raise WidthUnderflow(f"width reached delta_min={dmin!r}: {exc}") from None
    return EnvelopeSolution(params, ic, res.t, res.y, res.f, controls)


def state_at(sol: EnvelopeSolution, t: float) -> EnvelopeState:
    return sol.state_at(t)


def integrate_fixed(
    params: PhysicalParams, ic: InitialConditions, t_end: float, n_steps: int, delta_min: float = 1e-8
) -> EnvelopeState:
    """Classical RK4 with ``n_steps`` equal steps; returns the final state."""
    validate(params, ic)
    y = rk4(lambda t, y: _derivative(t, y, params, delta_min), 0.0, initial_state(params, ic).vector, t_end, n_steps)
    return EnvelopeState(float(t_end), *map(float, y))


def steady_width(params: PhysicalParams) -> float | None:
    """Stationary width of the width equation for a constant frequency.

    Balances quantum spreading against confinement plus measurement
    localisation. ``None`` for the free packet without measurement.
    """
    if not isinstance(params.omega, ConstantFrequency):
        raise ValueError("steady width needs a constant frequency schedule")
    k = params.omega.omega0**2 + 0.25 * params.inv_tau**2
    if k <= 0:
        return None
    return (params.hbar**2 / (4 * params.m**2 * k)) ** 0.25
