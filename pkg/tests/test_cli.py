import json
import math
from dataclasses import replace
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from measpacket.cli import main, run
from measpacket.config import (
    ExperimentConfig,
    build_config,
    default_config,
    format_config,
    parse_config,
)
from measpacket.core import (
    ConstantDrive,
    ConstantFrequency,
    CosineFrequency,
    DriveTable,
    FrequencyTable,
    InitialConditions,
    PhysicalParams,
    SinusoidDrive,
    ZeroDrive,
)
from measpacket.errors import NonPositiveTau, ParseError, UnknownKey, ValidationError

CONFIGS = Path(__file__).parents[1] / "configs"


def test_minimal_document_defaults():
    cfg = parse_config("m=1 hbar=1 measurement_off=true omega=constant:1 t_end=6.28")
    assert cfg.params.omega == ConstantFrequency(1.0)
    assert cfg.ic.a0 == pytest.approx(math.sqrt(0.5), rel=1e-15)
    assert cfg.t_end == 6.28 and cfg.samples == 201 and cfg.outputs == ("envelope",)
    assert parse_config("measurement_off=true").ic.a0 == 1.0  # no steady width


def test_tau_negative():
    with pytest.raises(NonPositiveTau):
        parse_config("tau=-2")


def test_cosine_schedule():
    assert parse_config("omega=cosine:1:0.2:3").params.omega == CosineFrequency(1, 0.2, 3)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse_config("m=1\n  hbar")
    assert (exc.value.line, exc.value.column) == (2, 3)
    with pytest.raises(ParseError) as exc:
        parse_config("tau=abc")
    assert exc.value.line == 1 and "tau" in str(exc.value)
    with pytest.raises(ParseError):
        parse_config("m=1 m=2")
    with pytest.raises(ParseError):
        parse_config("omega=wiggle:1")
    with pytest.raises(UnknownKey):
        parse_config("mass=1")


def test_comments_and_lists():
    cfg = parse_config("# header\nseeds=1,2,3  # trailing\noutputs=envelope,packet\n")
    assert cfg.seeds == (1.0, 2.0, 3.0)
    assert cfg.outputs == ("envelope", "packet")


@pytest.mark.parametrize(
    "doc",
    ["outputs=none", "samples=1", "outputs=bogus", "outputs=fourier_check",
     "t_end=1 packet_times=2", "t_end=1 outputs=residuals residual_times=0.001", "grid_n=4"],
)
def test_run_validation(doc):
    with pytest.raises(ValidationError):
        parse_config(doc)


frequencies = st.one_of(
    st.builds(ConstantFrequency, st.floats(0, 10)),
    st.builds(CosineFrequency, st.floats(0, 10), st.floats(-2, 2), st.floats(-5, 5)),
    st.lists(st.floats(0, 10), min_size=1, max_size=4, unique=True).map(
        lambda ts: FrequencyTable([(t, t / 2) for t in sorted(ts)])
    ),
)
drives = st.one_of(
    st.just(ZeroDrive()),
    st.builds(ConstantDrive, st.floats(-5, 5)),
    st.builds(SinusoidDrive, st.floats(-5, 5), st.floats(-5, 5), st.floats(-3, 3)),
    st.lists(st.floats(0, 10), min_size=1, max_size=4, unique=True).map(
        lambda ts: DriveTable([(t, -t) for t in sorted(ts)])
    ),
)


@given(
    st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 10), st.booleans(), st.floats(-2, 2),
    frequencies, drives, st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 3), st.floats(-1, 1),
    st.floats(1, 20), st.integers(2, 500),
)
@settings(max_examples=60)
def test_round_trip(m, hbar, tau, off, lam, omega, drive, x0, v0, a0, b0, t_end, samples):
    cfg = replace(
        default_config(),
        params=PhysicalParams(m, hbar, tau, off, lam, omega, drive),
        ic=InitialConditions(x0, v0, a0, b0),
        t_end=t_end,
        samples=samples,
        packet_times=(0.0, t_end),
    )
    assert parse_config(format_config(cfg)) == cfg


def test_default_config_round_trip():
    cfg = default_config()
    assert isinstance(cfg, ExperimentConfig)
    assert parse_config(format_config(cfg)) == cfg
    assert build_config({}) == cfg


def test_steady_width_envelope(tmp_path):
    cfg = parse_config((CONFIGS / "steady_width.cfg").read_text())
    run(cfg, tmp_path)
    lines = (tmp_path / "envelope.csv").read_text().splitlines()
    assert lines[0] == "t,q,qdot,delta,deltadot,s0"
    deltas = [float(row.split(",")[3]) for row in lines[1:]]
    assert len(deltas) == cfg.samples
    assert max(abs(d - 1.0) for d in deltas) < 1e-9


def test_fourier_summary(tmp_path):
    assert main(["verify", str(CONFIGS / "free_packet.cfg"), "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "residuals.json").read_text())
    assert summary["fourier_l2_diff"] < 1e-6
    assert summary["pass"] is True


def test_file_set_and_formats(tmp_path):
    assert main(["simulate", str(CONFIGS / "driven.cfg"), "--out", str(tmp_path)]) == 0
    names = sorted(p.relative_to(tmp_path).as_posix() for p in tmp_path.rglob("*") if p.is_file())
    assert names == [
        "envelope.csv", "packet_t0.000000.csv", "packet_t5.000000.csv",
        "plots/delta.svg", "plots/q.svg", "plots/trajectories.svg",
        "residuals.json", "trajectories.csv",
    ]
    packet = (tmp_path / "packet_t5.000000.csv").read_text()
    assert packet.startswith("x,re,im,rho,S,v_qu,V_qu\n") and "\r" not in packet
    header = (tmp_path / "trajectories.csv").read_text().splitlines()[0].split(",")
    assert header[0] == "t" and len(header) == 6 and header[1].startswith("seed=")
    svg = (tmp_path / "plots" / "q.svg").read_text()
    assert 'viewBox="0 0 800 600"' in svg and "<polyline" in svg
    summary = json.loads((tmp_path / "residuals.json").read_text())
    assert set(summary["residuals"]) == {"1.0", "2.5", "4.0"}


def test_env_out_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("MEASPACKET_OUT_DIR", str(tmp_path / "env"))
    assert main(["simulate", str(CONFIGS / "steady_width.cfg")]) == 0
    assert (tmp_path / "env" / "envelope.csv").exists()


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("outputs=none\n")
    assert main(["simulate", str(bad), "--out", str(tmp_path)]) == 2
    assert main(["simulate", str(tmp_path / "missing.cfg")]) == 2
    collapse = tmp_path / "collapse.cfg"
    collapse.write_text("tau=0.01 a0=1 t_end=5 delta_min=0.5\n")
    assert main(["simulate", str(collapse), "--out", str(tmp_path)]) == 3
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 3 and "WidthUnderflow" in err[-1]


def test_print_defaults(capsys):
    assert main(["print-defaults"]) == 0
    assert parse_config(capsys.readouterr().out) == default_config()


def test_deterministic_output(tmp_path):
    cfg = parse_config((CONFIGS / "driven.cfg").read_text())
    run(cfg, tmp_path / "a")
    run(cfg, tmp_path / "b")
    for f in (tmp_path / "a").rglob("*"):
        if f.is_file():
            assert f.read_bytes() == (tmp_path / "b" / f.relative_to(tmp_path / "a")).read_bytes()
