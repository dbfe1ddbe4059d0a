import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from measpacket.core import InitialConditions, PhysicalParams
from measpacket.dynamics import integrate
from measpacket.errors import ExponentOverflow, OutOfRange
from measpacket.trajectories import bundle, stretch_factor, trajectory_closed, trajectory_integrated

from scenarios import SCENARIOS, STEADY, seeds_for

TIMES = np.linspace(0.0, 5.0, 26)


@pytest.fixture(scope="module")
def solutions():
    return {name: integrate(p, ic, 5.0, sample_times=TIMES) for name, (p, ic) in SCENARIOS.items()}


def test_closed_form_examples():
    p, ic = STEADY
    sol = integrate(p, ic, 3.0, sample_times=[2.0])
    assert trajectory_closed(sol, 0.1, 2.0) == pytest.approx(0.1 * math.e, rel=1e-12)
    assert trajectory_closed(sol, 0.37, 0.0) == 0.37


def test_centre_seed_rides_mean(solutions):
    for sol in solutions.values():
        for t in TIMES:
            assert trajectory_closed(sol, sol.ic.x0, t) == sol.state_at(t).q


def test_stretch_is_one_without_measurement(solutions):
    sol = solutions["oscillator"]
    # stationary width and no measurement: the map is a pure translation
    for t in TIMES:
        assert stretch_factor(sol, t) == pytest.approx(1.0, abs=1e-9)


def test_free_centre_seed_integrated(solutions):
    sol = solutions["free"]
    path = trajectory_integrated(sol, sol.ic.x0, TIMES)
    q = np.array([sol.state_at(t).q for t in TIMES])
    assert np.max(np.abs(path - q)) < 1e-9


def test_symmetric_seeds_give_symmetric_paths():
    sol = integrate(PhysicalParams(measurement_off=True), InitialConditions(a0=0.8), 5.0, sample_times=TIMES)
    b = bundle(sol, [-1.0, -0.5, 0.5, 1.0], TIMES, "integrated")
    assert np.max(np.abs(b.paths + b.paths[::-1])) < 1e-9


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_methods_agree(solutions, name):
    sol = solutions[name]
    seeds = seeds_for(sol.ic)
    a = bundle(sol, seeds, TIMES, "closed_form")
    b = bundle(sol, seeds, TIMES, "integrated")
    assert np.max(np.abs(a.paths - b.paths)) < 1e-6


def test_bundle_invariants(solutions):
    sol = solutions["driven"]
    seeds = [-1.0, 0.0, 0.2, 1.5]
    b = bundle(sol, seeds, TIMES)
    assert np.all(b.paths[:, 0] == seeds)
    assert np.all(np.diff(b.paths, axis=0) > 0)
    single = bundle(sol, [sol.ic.x0], TIMES)
    assert np.array_equal(single.paths[0], [sol.state_at(t).q for t in TIMES])


@given(st.floats(-3, 3), st.floats(0.01, 2), st.floats(0, 5))
@settings(max_examples=40, deadline=None)
def test_affine_in_seed(x, d, t):
    sol = _driven()
    a, b, c = (trajectory_closed(sol, s, t) for s in (x - d, x, x + d))
    assert abs((a + c) / 2 - b) <= 1e-10 * max(1.0, abs(a), abs(b), abs(c))


_cache = {}


def _driven():
    if "sol" not in _cache:
        p, ic = SCENARIOS["driven"]
        _cache["sol"] = integrate(p, ic, 5.0)
    return _cache["sol"]


def test_measurement_stretching():
    p, ic = STEADY
    sol = integrate(p, ic, 5.0, sample_times=TIMES)
    b = bundle(sol, seeds_for(ic), TIMES)
    hw = b.half_width()
    rel = np.abs(hw / hw[0] - np.exp(TIMES / (2 * p.tau))) / np.exp(TIMES / (2 * p.tau))
    assert rel.max() < 1e-6


def test_errors(solutions):
    sol = solutions["free"]
    with pytest.raises(OutOfRange):
        trajectory_integrated(sol, 0.0, [0.0, 6.0])
    with pytest.raises(OutOfRange):
        trajectory_closed(sol, 0.0, 7.0)
    with pytest.raises(ValueError):
        bundle(sol, [0.0], TIMES, "bogus")
    with pytest.raises(ValueError):
        bundle(sol, [math.nan], TIMES)
    with pytest.raises(ValueError):
        bundle(sol, [0.0], TIMES[::-1])


def test_exponent_overflow():
    p = PhysicalParams(tau=0.001)
    sol = integrate(p, InitialConditions(a0=math.sqrt(0.001)), 2.0)
    with pytest.raises(ExponentOverflow):
        trajectory_closed(sol, 1.0, 2.0)
