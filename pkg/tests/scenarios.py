"""Parameter sets shared by the unit and acceptance tests (m = hbar = 1)."""

import math

from measpacket.core import ConstantFrequency, InitialConditions, PhysicalParams, SinusoidDrive

SCENARIOS = {
    # measurement on, no potential, width starts 10% above its fixed point
    "measured_free": (PhysicalParams(tau=1.0), InitialConditions(a0=1.1)),
    # free spreading packet with a moving centre
    "free": (PhysicalParams(measurement_off=True), InitialConditions(x0=0.5, v0=0.3, a0=1.0)),
    # coherent state of the unit oscillator
    "oscillator": (
        PhysicalParams(measurement_off=True, omega=ConstantFrequency(1.0)),
        InitialConditions(x0=1.0, a0=math.sqrt(0.5)),
    ),
    # everything switched on
    "driven": (
        PhysicalParams(tau=2.0, lam=0.5, omega=ConstantFrequency(1.0), drive=SinusoidDrive(1.0, 1.0)),
        InitialConditions(x0=0.5, v0=-0.2, a0=0.8, b0=0.1),
    ),
}

STEADY = (PhysicalParams(tau=1.0), InitialConditions(a0=1.0))

RESIDUAL_TIMES = (1.0, 2.5, 4.0)
T_END = 5.0


def seeds_for(ic: InitialConditions, n: int = 5):
    half = (n - 1) // 2
    return [ic.x0 + k * ic.a0 for k in range(-half, half + 1)]
