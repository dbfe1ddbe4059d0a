"""Closed-form fields of the Gaussian packet reconstructed from an envelope state.

All field functions accept scalar or array ``x`` and broadcast with numpy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PhysicalParams
from .dynamics import EnvelopeState
from .errors import GridTooCoarse

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SpatialGrid:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise ValueError("grid bounds must be finite")
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be < x_max")
        if self.n < 8:
            raise ValueError("grid needs at least 8 points")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.h * np.arange(self.n)

    @classmethod
    def around(cls, center: float, half_width: float, h: float) -> "SpatialGrid":
        """Grid with spacing exactly ``h`` (up to rounding) over ``center +- half_width``."""
        k = int(math.ceil(half_width / h - 1e-9))
        return cls(center - k * h, center + k * h, 2 * k + 1)

    @classmethod
    def for_state(cls, state: EnvelopeState, window: float = 10.0, n: int = 2001) -> "SpatialGrid":
        return cls(state.q - window * state.delta, state.q + window * state.delta, n)


@dataclass(frozen=True)
class PacketField:
    grid: SpatialGrid
    t: float
    values: np.ndarray

    def norm(self) -> float:
        """Trapezoid integral of ``|psi|^2``."""
        return float(np.trapezoid(np.abs(self.values) ** 2, dx=self.grid.h))


def _offset_rate(state: EnvelopeState, params: PhysicalParams) -> float:
    # deltadot/delta + 1/(2 tau): relative stretching rate of the velocity field
    return state.deltadot / state.delta + 0.5 * params.inv_tau


def density(state: EnvelopeState, x):
    y = np.asarray(x, dtype=float) - state.q
    d2 = state.delta * state.delta
    return np.exp(-y * y / (2 * d2)) / np.sqrt(TWO_PI * d2)


def amplitude(state: EnvelopeState, x):
    """Real amplitude ``sqrt(density)``, evaluated directly."""
    y = np.asarray(x, dtype=float) - state.q
    d2 = state.delta * state.delta
    return np.exp(-y * y / (4 * d2)) * (TWO_PI * d2) ** -0.25


def phase(state: EnvelopeState, x, params: PhysicalParams):
    """Unwrapped phase: s0 + (m qdot/hbar) y + (m/2hbar)(deltadot/delta + 1/2tau) y^2."""
    y = np.asarray(x, dtype=float) - state.q
    k = params.m / params.hbar
    return state.s0 + k * state.qdot * y + 0.5 * k * _offset_rate(state, params) * y * y


def psi(state: EnvelopeState, x, params: PhysicalParams):
    return amplitude(state, x) * np.exp(1j * phase(state, x, params))


def velocity_field(state: EnvelopeState, x, params: PhysicalParams):
    y = np.asarray(x, dtype=float) - state.q
    return _offset_rate(state, params) * y + state.qdot


def quantum_potential_closed(state: EnvelopeState, x, params: PhysicalParams):
    y = np.asarray(x, dtype=float) - state.q
    hb2m = params.hbar**2 / params.m
    d2 = state.delta * state.delta
    return hb2m / (4 * d2) - hb2m * y * y / (8 * d2 * d2)


def second_difference(f: np.ndarray, h: float) -> np.ndarray:
    """Central second difference; second-order one-sided stencils at the ends."""
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / (h * h)
    out[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (h * h)
    out[-1] = (2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]) / (h * h)
    return out


def first_difference(f: np.ndarray, h: float) -> np.ndarray:
    """Central first difference; second-order one-sided stencils at the ends."""
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2 * h)
    out[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
    out[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
    return out


def quantum_potential_from_amplitude(amp: np.ndarray, h: float, params: PhysicalParams) -> np.ndarray:
    """``-(hbar^2/2m) amp''/amp`` with the second derivative by finite differences."""
    return -(params.hbar**2 / (2 * params.m)) * second_difference(amp, h) / amp


def quantum_potential_fd(state: EnvelopeState, grid: SpatialGrid, params: PhysicalParams) -> np.ndarray:
    """Quantum potential from finite differences of ``sqrt(density)`` on ``grid``.

    The end points use one-sided stencils and should be left out of any
    error comparison.
    """
    if grid.h > state.delta / 10:
        raise GridTooCoarse(f"spacing {grid.h:.3g} exceeds delta/10 = {state.delta / 10:.3g}")
    if grid.x_min > state.q - 6 * state.delta or grid.x_max < state.q + 6 * state.delta:
        raise GridTooCoarse("grid must span at least q +- 6 delta")
    amp = np.sqrt(density(state, grid.x))
    return quantum_potential_from_amplitude(amp, grid.h, params)


def classical_potential(x, t: float, params: PhysicalParams):
    x = np.asarray(x, dtype=float)
    return 0.5 * params.m * params.omega(t) ** 2 * x * x + params.lam * x * params.drive(t)


def classical_potential_expanded(x, t: float, q: float, params: PhysicalParams):
    """Second-order expansion of the classical potential about ``q`` (exact for a quadratic)."""
    y = np.asarray(x, dtype=float) - q
    w2, X = params.omega(t) ** 2, params.drive(t)
    m = params.m
    return (
        0.5 * m * w2 * q * q + params.lam * q * X
        + (m * w2 * q + params.lam * X) * y
        + 0.5 * m * w2 * y * y
    )


def packet_field(state: EnvelopeState, params: PhysicalParams, grid: SpatialGrid | None = None) -> PacketField:
    grid = grid or SpatialGrid.for_state(state)
    return PacketField(grid, state.t, psi(state, grid.x, params))
