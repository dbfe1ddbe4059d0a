#!/usr/bin/env python3
"""Residual convergence table for the standard scenarios.

For every scenario, check time and equation, prints the relative L2
residual at the reference resolution and the observed order after each
joint (h, h_t) halving.

    python3 scripts/convergence_table.py [--levels 3] [--times 1,2.5,4]
"""
import argparse
import math

from measpacket.core import ConstantFrequency, InitialConditions, PhysicalParams, SinusoidDrive
from measpacket.verify import EQUATIONS, refinement_study, solve_for_checks

SCENARIOS = {
    "measured_free": (PhysicalParams(tau=1.0), InitialConditions(a0=1.1)),
    "free": (PhysicalParams(measurement_off=True), InitialConditions(x0=0.5, v0=0.3)),
    "oscillator": (PhysicalParams(measurement_off=True, omega=ConstantFrequency(1.0)),
                   InitialConditions(x0=1.0, a0=math.sqrt(0.5))),
    "driven": (PhysicalParams(tau=2.0, lam=0.5, omega=ConstantFrequency(1.0), drive=SinusoidDrive(1.0, 1.0)),
               InitialConditions(x0=0.5, v0=-0.2, a0=0.8, b0=0.1)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=3)
    ap.add_argument("--times", default="1,2.5,4")
    ap.add_argument("--t-end", type=float, default=5.0)
    args = ap.parse_args()
    times = [float(t) for t in args.times.split(",")]

    print(f"{'scenario':<14}{'t':>5}  {'equation':<14}{'h_t':>10}{'rel_l2':>11}  orders")
    for name, (p, ic) in SCENARIOS.items():
        sol = solve_for_checks(p, ic, args.t_end, times, levels=args.levels)
        for t in times:
            for eq in EQUATIONS:
                reps = refinement_study(eq, sol, t, levels=args.levels)
                orders = " ".join(f"{r.order:.3f}" for r in reps[1:])
                print(f"{name:<14}{t:>5g}  {eq:<14}{reps[0].h_t:>10.3g}{reps[0].rel_l2:>11.2e}  {orders}")


if __name__ == "__main__":
    main()
