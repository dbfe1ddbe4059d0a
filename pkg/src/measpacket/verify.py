"""Finite-difference verification of the reconstructed packet.

Each residual evaluates one governing equation on the packet's fields with
central differences: second order in the grid spacing ``h`` and in the
time step ``h_t``. Time derivatives use the envelope at ``t - h_t`` and
``t + h_t``; integrate with :func:`stencil_times` among the sample times so
those states are integrator nodes and not interpolants.

Relative norms divide by the largest magnitude of any single term of the
equation over the interior grid, and ``rel_l2`` is the interior RMS of the
residual over that scale. Two points at each end are left out of all norms.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from typing import Callable, Iterable, Literal, Sequence

import numpy as np

from .core import InitialConditions, PhysicalParams
from .dynamics import Controls, EnvelopeSolution, EnvelopeState, integrate
from .errors import AliasingRisk, GridTooCoarse, OutOfRange
from .packet import (
    PacketField,
    SpatialGrid,
    amplitude,
    classical_potential,
    density,
    first_difference,
    phase,
    psi,
    quantum_potential_closed,
    second_difference,
    velocity_field,
)
from .trajectories import trajectory_closed

Equation = Literal["schrodinger", "continuity", "euler", "madelung_imag", "madelung_real", "newton"]

MARGIN = 2
CELLS_PER_WIDTH = 100
WINDOW = 10.0
# the Euler stencil is exact in x; only the time difference carries error
EULER_REFERENCE_DT = 1e-2
NEWTON_REFERENCE_DT = 1e-2


@dataclass(frozen=True)
class ResidualReport:
    equation: str
    t: float
    h: float
    h_t: float
    n_interior: int
    l2: float
    max_abs: float
    scale: float
    rel_l2: float
    rel_max: float
    order: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _report(equation: str, terms: Sequence[np.ndarray], h: float, h_t: float, t: float) -> ResidualReport:
    inner = slice(MARGIN, -MARGIN)
    r = np.abs(sum(terms)[inner])
    scale = float(max(np.max(np.abs(term[inner])) for term in terms))
    n = r.size
    l2 = float(np.sqrt(h * np.sum(r * r)))
    rms = float(np.sqrt(np.mean(r * r)))
    mx = float(r.max())
    if scale > 0:
        rel_l2, rel_max = rms / scale, mx / scale
    else:
        rel_l2 = rel_max = 0.0 if mx == 0 else math.inf
    return ResidualReport(equation, t, h, h_t, n, l2, mx, scale, rel_l2, rel_max)


def _stencil(sol: EnvelopeSolution, t: float, h_t: float):
    if not (h_t > 0 and t - h_t >= 0.0 and t + h_t <= sol.t_end):
        raise OutOfRange(f"stencil [{t - h_t!r}, {t + h_t!r}] outside [0, {sol.t_end!r}]")
    return sol.state_at(t - h_t), sol.state_at(t), sol.state_at(t + h_t)


def _check_grid(grid: SpatialGrid, state: EnvelopeState, span: float = 6.0) -> None:
    if grid.h > state.delta / 10:
        raise GridTooCoarse(f"spacing {grid.h:.3g} exceeds delta/10 = {state.delta / 10:.3g}")
    if grid.x_min > state.q - span * state.delta or grid.x_max < state.q + span * state.delta:
        raise GridTooCoarse(f"grid must span q +- {span:g} delta")


def _measurement_bracket(state: EnvelopeState, x):
    y = x - state.q
    return y * y / (state.delta * state.delta) - 1.0


# -- Schrodinger ---------------------------------------------------------------


def schrodinger_terms(
    psi_m: np.ndarray,
    psi_0: np.ndarray,
    psi_p: np.ndarray,
    x: np.ndarray,
    h: float,
    h_t: float,
    state: EnvelopeState,
    params: PhysicalParams,
) -> list[np.ndarray]:
    """Terms of i hbar psi_t + (hbar^2/2m) psi_xx - V psi + (i hbar/4tau)(y^2/delta^2 - 1) psi."""
    hbar, m = params.hbar, params.m
    return [
        1j * hbar * (psi_p - psi_m) / (2 * h_t),
        hbar * hbar / (2 * m) * second_difference(psi_0, h),
        -classical_potential(x, state.t, params) * psi_0,
        0.25j * hbar * params.inv_tau * _measurement_bracket(state, x) * psi_0,
    ]


def schrodinger_residual(sol: EnvelopeSolution, grid: SpatialGrid, t: float, h_t: float) -> ResidualReport:
    sm, s0, sp = _stencil(sol, t, h_t)
    _check_grid(grid, s0)
    x, p = grid.x, sol.params
    terms = schrodinger_terms(psi(sm, x, p), psi(s0, x, p), psi(sp, x, p), x, grid.h, h_t, s0, p)
    return _report("schrodinger", terms, grid.h, h_t, t)


# -- hydrodynamic form ---------------------------------------------------------


def continuity_residual(sol: EnvelopeSolution, grid: SpatialGrid, t: float, h_t: float) -> ResidualReport:
    """rho_t + (rho v)_x + (rho/2tau)(y^2/delta^2 - 1)."""
    sm, s0, sp = _stencil(sol, t, h_t)
    _check_grid(grid, s0)
    x, p = grid.x, sol.params
    rho = density(s0, x)
    terms = [
        (density(sp, x) - density(sm, x)) / (2 * h_t),
        first_difference(rho * velocity_field(s0, x, p), grid.h),
        0.5 * p.inv_tau * rho * _measurement_bracket(s0, x),
    ]
    return _report("continuity", terms, grid.h, h_t, t)


def source_integral(state: EnvelopeState, params: PhysicalParams, grid: SpatialGrid | None = None) -> float:
    """Integral of the continuity source term; zero for a Gaussian."""
    if params.inv_tau == 0.0:
        return 0.0
    grid = grid or SpatialGrid.for_state(state)
    x = grid.x
    src = 0.5 * params.inv_tau * density(state, x) * _measurement_bracket(state, x)
    return float(np.trapezoid(src, dx=grid.h))


def euler_residual(sol: EnvelopeSolution, grid: SpatialGrid, t: float, h_t: float) -> ResidualReport:
    """v_t + v v_x + Omega^2 x + (lam/m) X + (1/m) dVqu/dx."""
    sm, s0, sp = _stencil(sol, t, h_t)
    _check_grid(grid, s0)
    x, p = grid.x, sol.params
    v = velocity_field(s0, x, p)
    ones = np.ones_like(x)
    terms = [
        (velocity_field(sp, x, p) - velocity_field(sm, x, p)) / (2 * h_t),
        v * first_difference(v, grid.h),
        p.omega(t) ** 2 * x,
        p.lam / p.m * p.drive(t) * ones,
        first_difference(quantum_potential_closed(s0, x, p), grid.h) / p.m,
    ]
    return _report("euler", terms, grid.h, h_t, t)


def newton_residual(sol: EnvelopeSolution, seeds: Sequence[float], t: float, h_t: float) -> ResidualReport:
    """m x'' against the classical plus quantum force along closed-form trajectories.

    The acceleration is the second difference of each path, i.e. the
    material derivative of the velocity following the flow.
    """
    _stencil(sol, t, h_t)
    p = sol.params
    s0 = sol.state_at(t)
    seeds = np.asarray(seeds, dtype=float)
    xm = np.array([trajectory_closed(sol, s, t - h_t) for s in seeds])
    x0 = np.array([trajectory_closed(sol, s, t) for s in seeds])
    xp = np.array([trajectory_closed(sol, s, t + h_t) for s in seeds])
    y = x0 - s0.q
    pad = np.zeros(MARGIN)
    terms = [
        np.concatenate([pad, (xp - 2 * x0 + xm) / (h_t * h_t), pad]),
        np.concatenate([pad, p.omega(t) ** 2 * x0 + p.lam / p.m * p.drive(t), pad]),
        np.concatenate([pad, -(p.hbar**2) * y / (4 * p.m**2 * s0.delta**4), pad]),
    ]
    # unit weight per seed: l2 is the root-sum-square over seeds
    return _report("newton", terms, 1.0, h_t, t)


def madelung_terms(sm, s0, sp, x, h, h_t, params: PhysicalParams):
    """Imaginary- and real-part equations in amplitude/phase variables.

    The real part is kept multiplied by the amplitude so the packet tails
    carry their natural weight.
    """
    hbar, m = params.hbar, params.m
    a = amplitude(s0, x)
    S = phase(s0, x, params)
    a_t = (amplitude(sp, x) - amplitude(sm, x)) / (2 * h_t)
    S_t = (phase(sp, x, params) - phase(sm, x, params)) / (2 * h_t)
    a_x, a_xx = first_difference(a, h), second_difference(a, h)
    S_x, S_xx = first_difference(S, h), second_difference(S, h)
    imag = [
        a_t,
        hbar / (2 * m) * (2 * S_x * a_x + a * S_xx),
        0.25 * params.inv_tau * _measurement_bracket(s0, x) * a,
    ]
    real = [
        -hbar * a * S_t,
        hbar * hbar / (2 * m) * a_xx,
        -hbar * hbar / (2 * m) * a * S_x * S_x,
        -classical_potential(x, s0.t, params) * a,
    ]
    return imag, real


def madelung_split_check(
    sol: EnvelopeSolution, grid: SpatialGrid, t: float, h_t: float
) -> tuple[ResidualReport, ResidualReport]:
    sm, s0, sp = _stencil(sol, t, h_t)
    _check_grid(grid, s0)
    imag, real = madelung_terms(sm, s0, sp, grid.x, grid.h, h_t, sol.params)
    return (
        _report("madelung_imag", imag, grid.h, h_t, t),
        _report("madelung_real", real, grid.h, h_t, t),
    )


# -- refinement studies --------------------------------------------------------

_RESIDUALS: dict[str, Callable] = {
    "schrodinger": schrodinger_residual,
    "continuity": continuity_residual,
    "euler": euler_residual,
    "madelung_imag": lambda sol, g, t, ht: madelung_split_check(sol, g, t, ht)[0],
    "madelung_real": lambda sol, g, t, ht: madelung_split_check(sol, g, t, ht)[1],
}
EQUATIONS = tuple(_RESIDUALS)


def reference_steps(
    equation: str, state: EnvelopeState, params: PhysicalParams, cells_per_width: float = CELLS_PER_WIDTH
) -> tuple[float, float]:
    """Reference ``(h, h_t)``: h = delta/cells_per_width, h_t = min(1e-4, h^2/delta * m/hbar)."""
    h = state.delta / cells_per_width
    if equation == "euler":
        return h, EULER_REFERENCE_DT
    # 3 significant digits so a re-integrated envelope reproduces the same stencil times
    return h, float(f"{min(1e-4, h * h / state.delta * params.m / params.hbar):.3g}")


def convergence_orders(reports: Sequence[ResidualReport]) -> list[ResidualReport]:
    """Attach log2 ratios of successive relative L2 norms (one refinement = halving)."""
    out = [reports[0]]
    for prev, cur in zip(reports, reports[1:]):
        if cur.rel_l2 > 0 and prev.rel_l2 > 0:
            order = math.log2(prev.rel_l2 / cur.rel_l2)
        else:
            order = math.nan
        out.append(replace(cur, order=order))
    return out


def refinement_study(
    equation: str,
    sol: EnvelopeSolution,
    t: float,
    levels: int = 3,
    cells_per_width: float = CELLS_PER_WIDTH,
    window: float = WINDOW,
    h_t: float | None = None,
) -> list[ResidualReport]:
    """Residual at ``levels`` resolutions, halving ``h`` and ``h_t`` together."""
    fn = _RESIDUALS[equation]
    st = sol.state_at(t)
    h, ht_ref = reference_steps(equation, st, sol.params, cells_per_width)
    ht = ht_ref if h_t is None else h_t
    reports = []
    for lev in range(levels):
        hl = h / 2**lev
        grid = SpatialGrid.around(st.q, window * st.delta, hl)
        reports.append(fn(sol, grid, t, ht / 2**lev))
    return convergence_orders(reports)


def stencil_times(times: Iterable[float], steps: Iterable[float]) -> list[float]:
    """Every ``t - h_t, t, t + h_t`` a residual evaluation will ask the envelope for."""
    steps = list(steps)
    out = set()
    for t in times:
        out.add(float(t))
        for ht in steps:
            out.add(t - ht)
            out.add(t + ht)
    return sorted(out)


def study_steps(
    sol_or_states, times: Sequence[float], params: PhysicalParams, levels: int = 3,
    equations: Sequence[str] = EQUATIONS, cells_per_width: float = CELLS_PER_WIDTH,
) -> dict[float, list[float]]:
    """Time steps each refinement study at each time will use."""
    out = {}
    for t in times:
        st = sol_or_states.state_at(t)
        steps = set()
        for eq in equations:
            _, ht = reference_steps(eq, st, params, cells_per_width)
            steps.update(ht / 2**lev for lev in range(levels))
        out[float(t)] = sorted(steps)
    return out


def solve_for_checks(
    params: PhysicalParams,
    ic: InitialConditions,
    t_end: float,
    check_times: Sequence[float],
    levels: int = 3,
    equations: Sequence[str] = EQUATIONS,
    controls: Controls | None = None,
    sample_times: Sequence[float] = (),
    n_samples: int = 0,
) -> EnvelopeSolution:
    """Integrate so every residual stencil time is an exact node.

    A first pass finds the widths that set the time steps; the second pass
    adds all stencil times as stops.
    """
    probe = integrate(params, ic, t_end, controls, sample_times=check_times)
    steps = study_steps(probe, check_times, params, levels, equations)
    stops = list(sample_times)
    for t, hts in steps.items():
        stops.extend(stencil_times([t], hts))
    return integrate(params, ic, t_end, controls, sample_times=stops, n_samples=n_samples)


# -- Fourier oracle for the free packet ----------------------------------------


@dataclass(frozen=True)
class FourierSpectrum:
    k: np.ndarray
    amplitudes: np.ndarray
    omega: np.ndarray

    @property
    def dk(self) -> float:
        return float(self.k[1] - self.k[0])

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.dk)


def fourier_spectrum(field: PacketField, params: PhysicalParams) -> FourierSpectrum:
    """phi(k) = (2 pi)^(-1/2) integral psi(x) exp(-i k x) dx on the periodic grid."""
    g = field.grid
    k = 2 * np.pi * np.fft.fftfreq(g.n, d=g.h)
    phi = g.h / np.sqrt(2 * np.pi) * np.fft.fft(field.values) * np.exp(-1j * k * g.x_min)
    k, phi = np.fft.fftshift(k), np.fft.fftshift(phi)
    return FourierSpectrum(k, phi, params.hbar * k * k / (2 * params.m))


def fourier_free_packet(psi0: PacketField, t: float, params: PhysicalParams) -> PacketField:
    """Evolve ``psi0`` freely for a time ``t`` by exact multiplication in k-space."""
    if not params.is_free:
        raise ValueError("Fourier oracle needs a free particle (Omega=0, no drive, no measurement)")
    v = psi0.values
    peak = np.max(np.abs(v))
    if max(abs(v[0]), abs(v[-1])) > 1e-12 * max(peak, 1.0):
        raise GridTooCoarse("psi0 is not negligible at the grid edges")
    g = psi0.grid
    spec = np.fft.fft(v)
    mag = np.abs(spec)
    nyq = mag[g.n // 2 - 1 : g.n // 2 + 2].max()
    if nyq > 1e-10 * mag.max():
        raise AliasingRisk(f"spectrum at Nyquist is {nyq / mag.max():.2e} of peak")
    k = 2 * np.pi * np.fft.fftfreq(g.n, d=g.h)
    out = np.fft.ifft(spec * np.exp(-1j * params.hbar * k * k / (2 * params.m) * t))
    return PacketField(g, psi0.t + t, out)


def l2_difference(a: PacketField, b: PacketField) -> float:
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")
    return float(np.sqrt(a.grid.h * np.sum(np.abs(a.values - b.values) ** 2)))


def discrete_norm(field: PacketField) -> float:
    return float(field.grid.h * np.sum(np.abs(field.values) ** 2))
