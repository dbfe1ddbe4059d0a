#!/usr/bin/env python3
"""Relaxation of a perturbed width towards the measurement fixed point.

Starts each run at 1.1 times the steady width and fits the exponential
rate of the envelope of |delta - delta_ss|. Linearising the width
equation about its fixed point gives decay at exactly 1/(2 tau) for any
constant Omega (the roots are -1/(2tau) +- i sqrt(4 Omega^2 + 3/(4 tau^2))),
so the fitted rate times 2 tau should print as 1.

    python3 scripts/width_relaxation.py [--omega 0] [--taus 0.5,1,2,4]
"""
import argparse

import numpy as np

from measpacket.core import ConstantFrequency, InitialConditions, PhysicalParams
from measpacket.dynamics import integrate, steady_width


def decay_rate(t, dev):
    # fit log of the local maxima of |delta - delta_ss|; skip the noise floor
    peaks = [i for i in range(1, len(dev) - 1) if dev[i] >= dev[i - 1] and dev[i] >= dev[i + 1]]
    peaks = [i for i in peaks if dev[i] > 1e-11]
    if len(peaks) < 3:
        return float("nan")
    slope, _ = np.polyfit(t[peaks], np.log(dev[peaks]), 1)
    return -slope


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--omega", type=float, default=0.0)
    ap.add_argument("--taus", default="0.5,1,2,4")
    args = ap.parse_args()

    print(f"{'tau':>6}{'delta_ss':>12}{'rate*2tau':>12}{'dev(20tau)':>13}{'dev(30tau)':>13}")
    for tau in (float(s) for s in args.taus.split(",")):
        p = PhysicalParams(tau=tau, omega=ConstantFrequency(args.omega))
        dss = steady_width(p)
        t_end = 30 * tau
        sol = integrate(p, InitialConditions(a0=1.1 * dss), t_end, n_samples=6001)
        ts = np.linspace(0, t_end, 6001)
        dev = np.array([abs(sol.state_at(t).delta - dss) / dss for t in ts])
        rate = decay_rate(ts, dev)
        d20 = dev[np.searchsorted(ts, 20 * tau):].max()
        print(f"{tau:>6g}{dss:>12.6f}{rate * 2 * tau:>12.4f}{d20:>13.2e}{dev[-1]:>13.2e}")


if __name__ == "__main__":
    main()
