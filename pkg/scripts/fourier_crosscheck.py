#!/usr/bin/env python3
"""Free packet: closed-form envelope against exact k-space evolution.

Prints the L2 distance between the two constructions at a few times for a
set of initial packets, together with the discrete norm drift.

    python3 scripts/fourier_crosscheck.py [--n 4096] [--half-width 60]
"""
import argparse

import numpy as np

from measpacket.core import InitialConditions, PhysicalParams
from measpacket.dynamics import integrate
from measpacket.packet import PacketField, SpatialGrid, psi
from measpacket.verify import discrete_norm, fourier_free_packet, l2_difference

FREE = PhysicalParams(measurement_off=True)
PACKETS = [
    InitialConditions(a0=1.0),
    InitialConditions(x0=0.5, v0=0.3, a0=1.0),
    InitialConditions(x0=-2.0, v0=1.0, a0=0.7, b0=0.2),
    InitialConditions(a0=1.5, b0=-0.4),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--half-width", type=float, default=60.0)
    ap.add_argument("--times", default="1,2,5")
    args = ap.parse_args()
    grid = SpatialGrid(-args.half_width, args.half_width, args.n)
    times = [float(t) for t in args.times.split(",")]

    print(f"{'x0':>6}{'v0':>6}{'a0':>6}{'b0':>6}" + "".join(f"{'L2 @ t=' + format(t, 'g'):>14}" for t in times)
          + f"{'norm drift':>13}")
    for ic in PACKETS:
        sol = integrate(FREE, ic, max(times), sample_times=times)
        start = PacketField(grid, 0.0, psi(sol.state_at(0.0), grid.x, FREE))
        diffs, drift = [], 0.0
        for t in times:
            ev = fourier_free_packet(start, t, FREE)
            diffs.append(l2_difference(ev, PacketField(grid, t, psi(sol.state_at(t), grid.x, FREE))))
            drift = max(drift, abs(discrete_norm(ev) / discrete_norm(start) - 1))
        print(f"{ic.x0:>6g}{ic.v0:>6g}{ic.a0:>6g}{ic.b0:>6g}" + "".join(f"{d:>14.2e}" for d in diffs)
              + f"{drift:>13.1e}")


if __name__ == "__main__":
    main()
