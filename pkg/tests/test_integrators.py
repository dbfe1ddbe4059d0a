import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from measpacket.errors import NonFiniteState, StepSizeUnderflow
from measpacket.integrators import RejectStep, dopri5, hermite, rk4


def decay(t, y):
    return -y


def test_dopri5_exponential():
    res = dopri5(decay, 0.0, [1.0], 3.0)
    assert res.t[-1] == 3.0
    assert abs(res.y[-1, 0] - math.exp(-3.0)) < 1e-10


def test_dopri5_oscillator_against_closed_form():
    res = dopri5(lambda t, y: np.array([y[1], -y[0]]), 0.0, [1.0, 0.0], 10.0, stops=[math.pi])
    i = list(res.t).index(math.pi)
    assert abs(res.y[i, 0] + 1.0) < 1e-9
    assert np.allclose(res.y[:, 0], np.cos(res.t), atol=1e-9)


@given(st.lists(st.floats(0.001, 4.999), min_size=1, max_size=20))
@settings(max_examples=30, deadline=None)
def test_stops_are_exact_nodes(stops):
    res = dopri5(decay, 0.0, [1.0], 5.0, stops=stops)
    nodes = set(res.t.tolist())
    assert all(s in nodes for s in stops)
    assert np.all(np.diff(res.t) > 0)


def test_stored_derivatives_match_rhs():
    res = dopri5(decay, 0.0, [2.0], 1.0)
    assert np.allclose(res.f, -res.y, rtol=0, atol=1e-14)


@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4), st.floats(0, 1))
def test_hermite_reproduces_cubics(c, s):
    p = np.polynomial.Polynomial(c)
    dp = p.deriv()
    t0, t1 = 0.3, 1.7
    t = t0 + s * (t1 - t0)
    val = hermite(t0, t1, np.array([p(t0)]), np.array([p(t1)]), np.array([dp(t0)]), np.array([dp(t1)]), t)
    assert val[0] == pytest.approx(p(t), abs=1e-12)


def test_rk4_order():
    errs = [abs(rk4(decay, 0.0, [1.0], 2.0, n)[0] - math.exp(-2.0)) for n in (20, 40, 80)]
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert all(o > 3.8 for o in orders)


def test_reject_step_shrinks_then_underflows():
    def wall(t, y):
        if y[0] > 1.0:
            raise RejectStep
        return np.array([1.0 / (1.0 - min(y[0], 0.999999999))])

    with pytest.raises(RejectStep):
        dopri5(wall, 0.0, [0.0], 10.0, h_min=1e-10)


def test_non_finite_state():
    with pytest.raises((NonFiniteState, StepSizeUnderflow)):
        dopri5(lambda t, y: y * y, 0.0, [1.0], 2.0)


def test_accept_hook_can_abort():
    class Stop(Exception):
        pass

    def accept(t, y):
        if t > 0.5:
            raise Stop

    with pytest.raises(Stop):
        dopri5(decay, 0.0, [1.0], 1.0, accept=accept)


def test_bad_interval():
    with pytest.raises(ValueError):
        dopri5(decay, 1.0, [1.0], 1.0)
