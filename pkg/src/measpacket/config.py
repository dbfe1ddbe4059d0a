"""Experiment configuration: flat ``key=value`` documents.

Pairs are separated by whitespace or newlines, ``#`` starts a comment.
Schedules are written ``kind:arg1:arg2...``::

    omega=constant:1            omega=cosine:omega0:epsilon:omega_d
    omega=table:t0:w0:t1:w1     drive=zero | constant:x | sinusoid:amp:omega:phase | table:...

List values (``outputs``, ``seeds``, ``packet_times``, ``residual_times``)
are comma separated.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace

from .core import (
    ConstantDrive,
    ConstantFrequency,
    CosineFrequency,
    DriveTable,
    FrequencyTable,
    InitialConditions,
    PhysicalParams,
    SinusoidDrive,
    ZeroDrive,
    validate,
)
from .dynamics import steady_width
from .errors import ConfigError, ParseError, UnknownKey, ValidationError
from .verify import EULER_REFERENCE_DT

OUTPUTS = ("envelope", "packet", "trajectories", "residuals", "fourier_check")


@dataclass(frozen=True)
class ExperimentConfig:
    params: PhysicalParams = field(default_factory=PhysicalParams)
    ic: InitialConditions = field(default_factory=InitialConditions)
    t_end: float = 10.0
    samples: int = 201
    window: float = 10.0
    grid_n: int = 2001
    rtol: float = 1e-10
    atol: float = 1e-12
    delta_min: float = 1e-8
    outputs: tuple[str, ...] = ("envelope",)
    seeds: tuple[float, ...] = ()
    packet_times: tuple[float, ...] = ()
    residual_times: tuple[float, ...] = ()
    levels: int = 3
    out_dir: str = "out"


def _bool(text: str) -> bool:
    t = text.lower()
    if t in ("true", "1", "yes", "on"):
        return True
    if t in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(s) for s in text.split(",") if s.strip())


def _table_knots(args: list[str]):
    if len(args) < 2 or len(args) % 2:
        raise ValueError("table needs t:value pairs")
    vals = [float(a) for a in args]
    return tuple(zip(vals[::2], vals[1::2]))


def parse_frequency(text: str):
    kind, *args = text.split(":")
    if kind == "constant" and len(args) == 1:
        return ConstantFrequency(float(args[0]))
    if kind == "cosine" and len(args) == 3:
        return CosineFrequency(*map(float, args))
    if kind == "table":
        return FrequencyTable(_table_knots(args))
    raise ValueError(f"bad frequency schedule {text!r}")


def parse_drive(text: str):
    kind, *args = text.split(":")
    if kind == "zero" and not args:
        return ZeroDrive()
    if kind == "constant" and len(args) == 1:
        return ConstantDrive(float(args[0]))
    if kind in ("sinusoid", "sin") and len(args) in (2, 3):
        return SinusoidDrive(*map(float, args))
    if kind == "table":
        return DriveTable(_table_knots(args))
    raise ValueError(f"bad drive schedule {text!r}")


# key -> (section, converter)
_KEYS = {
    "m": ("params", float),
    "hbar": ("params", float),
    "tau": ("params", float),
    "measurement_off": ("params", _bool),
    "lambda": ("params", float),
    "omega": ("params", parse_frequency),
    "drive": ("params", parse_drive),
    "x0": ("ic", float),
    "v0": ("ic", float),
    "a0": ("ic", float),
    "b0": ("ic", float),
    "t_end": ("run", float),
    "samples": ("run", int),
    "window": ("run", float),
    "grid_n": ("run", int),
    "rtol": ("run", float),
    "atol": ("run", float),
    "delta_min": ("run", float),
    "outputs": ("run", lambda s: tuple(o for o in s.split(",") if o and o != "none")),
    "seeds": ("run", _floats),
    "packet_times": ("run", _floats),
    "residual_times": ("run", _floats),
    "levels": ("run", int),
    "out_dir": ("run", str),
}
_PARAM_FIELD = {"lambda": "lam"}


def parse_config(text: str) -> ExperimentConfig:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for tok in re.finditer(r"\S+", line):
            col = tok.start() + 1
            key, sep, val = tok.group().partition("=")
            if not sep or not key:
                raise ParseError(f"expected key=value, got {tok.group()!r}", lineno, col)
            if key not in _KEYS:
                raise UnknownKey(f"line {lineno}, column {col}: unknown key {key!r}", field=key)
            if key in values:
                raise ParseError(f"duplicate key {key!r}", lineno, col)
            try:
                values[key] = _KEYS[key][1](val)
            except ConfigError:
                raise
            except ValueError as exc:
                raise ParseError(f"{key}: {exc}", lineno, col + len(key) + 1) from None
    return build_config(values)


def build_config(values: dict) -> ExperimentConfig:
    """Apply defaults to a key -> value mapping and validate the result."""
    pkw = {_PARAM_FIELD.get(k, k): v for k, v in values.items() if _KEYS[k][0] == "params"}
    params = PhysicalParams(**pkw)
    ikw = {k: v for k, v in values.items() if _KEYS[k][0] == "ic"}
    if "a0" not in ikw:
        ikw["a0"] = _default_width(params)
    ic = InitialConditions(**ikw)
    validate(params, ic)

    run = {k: v for k, v in values.items() if _KEYS[k][0] == "run"}
    cfg = replace(ExperimentConfig(params=params, ic=ic), **run)
    if not cfg.seeds:
        cfg = replace(cfg, seeds=tuple(ic.x0 + k * ic.a0 for k in (-2, -1, 0, 1, 2)))
    if not cfg.packet_times:
        cfg = replace(cfg, packet_times=(0.0, cfg.t_end))
    if not cfg.residual_times:
        cfg = replace(cfg, residual_times=(0.5 * cfg.t_end,))
    _check_run(cfg)
    return cfg


def _default_width(params: PhysicalParams) -> float:
    if isinstance(params.omega, ConstantFrequency):
        try:
            w = steady_width(params)
        except ZeroDivisionError:
            w = None
        if w is not None and math.isfinite(w):
            return w
    return 1.0


def _check_run(cfg: ExperimentConfig) -> None:
    for name in ("t_end", "window", "rtol", "atol", "delta_min"):
        v = getattr(cfg, name)
        if not (math.isfinite(v) and v > 0):
            raise ValidationError(f"{name} must be finite and > 0, got {v!r}", field=name)
    if cfg.samples < 2:
        raise ValidationError("samples must be >= 2", field="samples")
    if cfg.grid_n < 8:
        raise ValidationError("grid_n must be >= 8", field="grid_n")
    if cfg.levels < 2:
        raise ValidationError("levels must be >= 2", field="levels")
    if not cfg.outputs:
        raise ValidationError("no outputs requested", field="outputs")
    for o in cfg.outputs:
        if o not in OUTPUTS:
            raise ValidationError(f"unknown output {o!r}", field="outputs")
    if "fourier_check" in cfg.outputs and not cfg.params.is_free:
        raise ValidationError("fourier_check needs a free particle", field="outputs")
    if not all(math.isfinite(s) for s in cfg.seeds):
        raise ValidationError("seeds must be finite", field="seeds")
    for t in cfg.packet_times:
        if not 0 <= t <= cfg.t_end:
            raise ValidationError(f"packet time {t!r} outside [0, t_end]", field="packet_times")
    if "residuals" in cfg.outputs:
        check_residual_times(cfg)


def check_residual_times(cfg: ExperimentConfig) -> None:
    for t in cfg.residual_times:
        if not EULER_REFERENCE_DT <= t <= cfg.t_end - EULER_REFERENCE_DT:
            raise ValidationError(
                f"residual time {t!r} too close to the ends of [0, t_end]", field="residual_times"
            )


def format_config(cfg: ExperimentConfig) -> str:
    """Serialise to the key=value format; ``parse_config`` inverts it exactly."""
    p, ic = cfg.params, cfg.ic

    def fl(xs):
        return ",".join(repr(float(x)) for x in xs)

    lines = [
        f"m={p.m!r}",
        f"hbar={p.hbar!r}",
        f"tau={p.tau!r}",
        f"measurement_off={'true' if p.measurement_off else 'false'}",
        f"lambda={p.lam!r}",
        f"omega={p.omega.encode()}",
        f"drive={p.drive.encode()}",
        f"x0={ic.x0!r}",
        f"v0={ic.v0!r}",
        f"a0={ic.a0!r}",
        f"b0={ic.b0!r}",
        f"t_end={cfg.t_end!r}",
        f"samples={cfg.samples}",
        f"window={cfg.window!r}",
        f"grid_n={cfg.grid_n}",
        f"rtol={cfg.rtol!r}",
        f"atol={cfg.atol!r}",
        f"delta_min={cfg.delta_min!r}",
        f"outputs={','.join(cfg.outputs)}",
        f"seeds={fl(cfg.seeds)}",
        f"packet_times={fl(cfg.packet_times)}",
        f"residual_times={fl(cfg.residual_times)}",
        f"levels={cfg.levels}",
        f"out_dir={cfg.out_dir}",
    ]
    return "\n".join(lines) + "\n"


def default_config() -> ExperimentConfig:
    return build_config({})
