import math

import pytest
from hypothesis import given, strategies as st

from measpacket.core import (
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
    eval_drive,
    eval_omega,
    validate,
)
from measpacket.errors import (
    InvalidSchedule,
    NonFiniteParameter,
    NonPositiveHbar,
    NonPositiveInitialWidth,
    NonPositiveMass,
    NonPositiveTau,
)

finite = st.floats(-1e6, 1e6, allow_nan=False)
times = st.floats(0, 1e4, allow_nan=False)


def test_frequency_examples():
    assert eval_omega(ConstantFrequency(2.0), 13.7) == 2.0
    assert eval_omega(CosineFrequency(1.0, 0.0, 5.0), 0.3) == 1.0
    assert eval_omega(FrequencyTable([(0, 1), (2, 3)]), 1.0) == 2.0


def test_drive_examples():
    assert eval_drive(ZeroDrive(), 5.0) == 0.0
    assert eval_drive(SinusoidDrive(2.0, math.pi, 0.0), 0.0) == 0.0
    assert eval_drive(ConstantDrive(0.5), 9.0) == 0.5


def test_cosine_is_clamped():
    w = CosineFrequency(2.0, 3.0, 1.0)
    assert w(math.pi) == 0.0  # 1 + 3 cos(pi) < 0
    assert w(0.0) == pytest.approx(4.0)


def test_table_clamps_outside_knots():
    tab = DriveTable([(1.0, -2.0), (3.0, 4.0)])
    assert tab(0.0) == -2.0
    assert tab(10.0) == 4.0


@pytest.mark.parametrize("knots", [[(0, 1), (0, 2)], [(1, 0), (0, 1)], []])
def test_table_rejects_bad_knots(knots):
    with pytest.raises(InvalidSchedule):
        TableSchedule(tuple(knots))


def test_frequency_table_rejects_negative():
    with pytest.raises(InvalidSchedule):
        FrequencyTable([(0, 1), (1, -1)])
    with pytest.raises(InvalidSchedule):
        ConstantFrequency(-1.0)


def test_validate_canonical():
    p, ic = PhysicalParams(), InitialConditions()
    assert validate(p, ic) == (p, ic)


@pytest.mark.parametrize(
    "params, ic, err, field",
    [
        (PhysicalParams(), InitialConditions(a0=0.0), NonPositiveInitialWidth, "a0"),
        (PhysicalParams(tau=-1.0), InitialConditions(), NonPositiveTau, "tau"),
        (PhysicalParams(m=0.0), InitialConditions(), NonPositiveMass, "m"),
        (PhysicalParams(hbar=-1.0), InitialConditions(), NonPositiveHbar, "hbar"),
        (PhysicalParams(lam=math.nan), InitialConditions(), NonFiniteParameter, "lam"),
        (PhysicalParams(), InitialConditions(v0=math.inf), NonFiniteParameter, "v0"),
    ],
)
def test_validate_errors_name_the_field(params, ic, err, field):
    with pytest.raises(err) as exc:
        validate(params, ic)
    assert exc.value.field == field


def test_tau_ignored_when_measurement_off():
    p = PhysicalParams(tau=-1.0, measurement_off=True)
    validate(p, InitialConditions())
    assert p.inv_tau == 0.0


def test_non_finite_schedule_rejected():
    with pytest.raises(NonFiniteParameter):
        SinusoidDrive(math.inf, 1.0)


def test_is_free():
    assert PhysicalParams(measurement_off=True).is_free
    assert not PhysicalParams().is_free
    assert not PhysicalParams(measurement_off=True, omega=ConstantFrequency(1.0)).is_free
    assert not PhysicalParams(measurement_off=True, lam=1.0, drive=ConstantDrive(1.0)).is_free


@given(finite, finite, st.floats(0.1, 10), st.floats(0.1, 10))
def test_phase_offset_exact(x0, v0, m, hbar):
    ic = InitialConditions(x0=x0, v0=v0)
    assert ic.phase_offset(PhysicalParams(m=m, hbar=hbar)) == m * v0 * x0 / hbar


schedules = st.one_of(
    st.builds(ConstantFrequency, st.floats(0, 100)),
    st.builds(CosineFrequency, st.floats(0, 100), st.floats(-5, 5), st.floats(-10, 10)),
    st.builds(SinusoidDrive, finite, st.floats(-10, 10), st.floats(-7, 7)),
    st.builds(ConstantDrive, finite),
)


@given(schedules, times)
def test_schedules_are_pure_and_finite(sched, t):
    a, b = sched(t), sched(t)
    assert math.isfinite(a)
    assert a == b


@st.composite
def tables(draw):
    ts = sorted(set(draw(st.lists(st.floats(0, 100), min_size=1, max_size=8))))
    vs = draw(st.lists(finite, min_size=len(ts), max_size=len(ts)))
    return DriveTable(list(zip(ts, vs)))


@given(tables(), times)
def test_table_exact_at_knots_and_bounded(tab, t):
    for tk, vk in tab.knots:
        assert tab(tk) == vk
    vals = [v for _, v in tab.knots]
    assert min(vals) <= tab(t) <= max(vals)
