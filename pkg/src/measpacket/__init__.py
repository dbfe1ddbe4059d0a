"""Gaussian wave packet under continuous position measurement.

The packet stays Gaussian, so its whole evolution reduces to an envelope
ODE for the centre ``q``, the width ``delta`` and a global phase ``s0``.
This package integrates that envelope, rebuilds the packet fields and
Bohmian trajectories from it, and checks the reconstruction against the
governing equations by finite-difference residuals.
"""

from .core import (
    ConstantDrive,
    ConstantFrequency,
    CosineFrequency,
    DriveTable,
    FrequencyTable,
    InitialConditions,
    PhysicalParams,
    SinusoidDrive,
    TableSchedule,
    ZeroDrive,
    validate,
)
from .dynamics import Controls, EnvelopeSolution, EnvelopeState, integrate, state_at, steady_width
from .packet import SpatialGrid, packet_field, psi, quantum_potential_closed, velocity_field
from .trajectories import bundle, trajectory_closed, trajectory_integrated

__all__ = [
    "ConstantDrive", "ConstantFrequency", "CosineFrequency", "DriveTable", "FrequencyTable",
    "InitialConditions", "PhysicalParams", "SinusoidDrive", "TableSchedule", "ZeroDrive", "validate",
    "Controls", "EnvelopeSolution", "EnvelopeState", "integrate", "state_at", "steady_width",
    "SpatialGrid", "packet_field", "psi", "quantum_potential_closed", "velocity_field",
    "bundle", "trajectory_closed", "trajectory_integrated",
]
