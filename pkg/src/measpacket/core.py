"""Physical parameters, time schedules and initial conditions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import (
    InvalidSchedule,
    NonFiniteParameter,
    NonPositiveHbar,
    NonPositiveInitialWidth,
    NonPositiveMass,
    NonPositiveTau,
)

# --------------------------------------------------------------------------
# schedules
# --------------------------------------------------------------------------


def _check_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise NonFiniteParameter(f"{name} must be finite, got {v!r}", field=name)


@dataclass(frozen=True)
class ConstantFrequency:
    omega0: float = 0.0

    def __post_init__(self):
        _check_finite("omega.omega0", self.omega0)
        if self.omega0 < 0:
            raise InvalidSchedule("omega0 must be >= 0", field="omega")

    def __call__(self, t: float) -> float:
        return float(self.omega0)

    def encode(self) -> str:
        return f"constant:{self.omega0!r}"


@dataclass(frozen=True)
class CosineFrequency:
    """``omega0 * sqrt(max(0, 1 + epsilon*cos(omega_d*t)))``."""

    omega0: float
    epsilon: float
    omega_d: float

    def __post_init__(self):
        _check_finite("omega", self.omega0, self.epsilon, self.omega_d)
        if self.omega0 < 0:
            raise InvalidSchedule("omega0 must be >= 0", field="omega")

    def __call__(self, t: float) -> float:
        # clamped so the frequency stays real for |epsilon| > 1
        arg = 1.0 + self.epsilon * math.cos(self.omega_d * t)
        return self.omega0 * math.sqrt(max(0.0, arg))

    def encode(self) -> str:
        return f"cosine:{self.omega0!r}:{self.epsilon!r}:{self.omega_d!r}"


@dataclass(frozen=True)
class TableSchedule:
    """Piecewise-linear table, clamped to the end values outside the knots."""

    knots: tuple[tuple[float, float], ...]
    nonnegative: bool = False

    def __post_init__(self):
        knots = tuple((float(t), float(v)) for t, v in self.knots)
        object.__setattr__(self, "knots", knots)
        if len(knots) < 1:
            raise InvalidSchedule("table needs at least one knot", field="table")
        for t, v in knots:
            _check_finite("table", t, v)
            if self.nonnegative and v < 0:
                raise InvalidSchedule("table values must be >= 0", field="table")
        ts = [t for t, _ in knots]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise InvalidSchedule("table times must be strictly increasing", field="table")
        object.__setattr__(self, "_t", np.array(ts))
        object.__setattr__(self, "_v", np.array([v for _, v in knots]))

    def __call__(self, t: float) -> float:
        return float(np.interp(t, self._t, self._v))

    def encode(self) -> str:
        return "table:" + ":".join(f"{t!r}:{v!r}" for t, v in self.knots)


def FrequencyTable(knots) -> TableSchedule:
    return TableSchedule(tuple(knots), nonnegative=True)


def DriveTable(knots) -> TableSchedule:
    return TableSchedule(tuple(knots))


@dataclass(frozen=True)
class ZeroDrive:
    def __call__(self, t: float) -> float:
        return 0.0

    def encode(self) -> str:
        return "zero"


@dataclass(frozen=True)
class ConstantDrive:
    x_c: float

    def __post_init__(self):
        _check_finite("drive.x_c", self.x_c)

    def __call__(self, t: float) -> float:
        return float(self.x_c)

    def encode(self) -> str:
        return f"constant:{self.x_c!r}"


@dataclass(frozen=True)
class SinusoidDrive:
    """``amplitude * sin(omega_x*t + phase)``."""

    amplitude: float
    omega_x: float
    phase: float = 0.0

    def __post_init__(self):
        _check_finite("drive", self.amplitude, self.omega_x, self.phase)

    def __call__(self, t: float) -> float:
        return self.amplitude * math.sin(self.omega_x * t + self.phase)

    def encode(self) -> str:
        return f"sinusoid:{self.amplitude!r}:{self.omega_x!r}:{self.phase!r}"


FrequencySchedule = ConstantFrequency | CosineFrequency | TableSchedule
DriveSchedule = ZeroDrive | ConstantDrive | SinusoidDrive | TableSchedule


def eval_omega(schedule: FrequencySchedule, t: float) -> float:
    return schedule(t)


def eval_drive(schedule: DriveSchedule, t: float) -> float:
    return schedule(t)


# --------------------------------------------------------------------------
# parameters
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PhysicalParams:
    """Constants of the measurement Schrodinger equation.

    ``tau`` is the measurement resolution time; it is ignored when
    ``measurement_off`` is set, in which case every ``1/tau`` term is
    exactly zero. ``lam`` couples the packet linearly to the drive X(t).
    """

    m: float = 1.0
    hbar: float = 1.0
    tau: float = 1.0
    measurement_off: bool = False
    lam: float = 0.0
    omega: FrequencySchedule = field(default_factory=ConstantFrequency)
    drive: DriveSchedule = field(default_factory=ZeroDrive)

    @property
    def inv_tau(self) -> float:
        """``1/tau``, or exactly 0 without measurement."""
        return 0.0 if self.measurement_off else 1.0 / self.tau

    def omega_at(self, t: float) -> float:
        return self.omega(t)

    def drive_at(self, t: float) -> float:
        return self.drive(t)

    @property
    def is_free(self) -> bool:
        """No confinement, no drive, no measurement."""
        return (
            self.measurement_off
            and isinstance(self.omega, ConstantFrequency)
            and self.omega.omega0 == 0.0
            and (self.lam == 0.0 or isinstance(self.drive, ZeroDrive))
        )


@dataclass(frozen=True)
class InitialConditions:
    x0: float = 0.0
    v0: float = 0.0
    a0: float = 1.0
    b0: float = 0.0

    def phase_offset(self, params: PhysicalParams) -> float:
        """Initial phase offset S0(0) = m v0 x0 / hbar."""
        return params.m * self.v0 * self.x0 / params.hbar


def validate(params: PhysicalParams, ic: InitialConditions) -> tuple[PhysicalParams, InitialConditions]:
    """Check the invariants of a configuration and return it unchanged."""
    for f in fields(PhysicalParams):
        v = getattr(params, f.name)
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            if f.name == "tau" and params.measurement_off:
                continue
            _check_finite(f.name, v)
    for f in fields(InitialConditions):
        _check_finite(f.name, getattr(ic, f.name))

    if params.m <= 0:
        raise NonPositiveMass(f"m must be > 0, got {params.m!r}", field="m")
    if params.hbar <= 0:
        raise NonPositiveHbar(f"hbar must be > 0, got {params.hbar!r}", field="hbar")
    if not params.measurement_off and params.tau <= 0:
        raise NonPositiveTau(f"tau must be > 0, got {params.tau!r}", field="tau")
    if ic.a0 <= 0:
        raise NonPositiveInitialWidth(f"a0 must be > 0, got {ic.a0!r}", field="a0")
    if isinstance(params.omega, TableSchedule) and not params.omega.nonnegative:
        if any(v < 0 for _, v in params.omega.knots):
            raise InvalidSchedule("frequency table values must be >= 0", field="omega")
    return params, ic
