"""Explicit finite-difference integration of the 1-D Navier-Stokes system on [0, L].

The primitive (nonconservative) form is advanced with Heun's method:

    rho_t + u rho_x + rho u_x = 0
    rho (u_t + u u_x) + P_x = mu u_xx
    cv rho (theta_t + u theta_x) + P u_x = kappa theta_xx + mu u_x^2

Transport terms ``u f_x`` are first-order upwind; everything else is centered.
At ``x = 0`` the velocity and temperature are prescribed and the density is
advanced by the continuity equation with one-sided differences.  At ``x = L``
the state is taken from the target wave pattern.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConfigError, SimulationAbort, ValidationError
from .gas import GasModel

FAR_FIELD_DT = 0.05


@dataclass(frozen=True)
class Grid:
    L: float
    N: int

    def __post_init__(self):
        if not self.L > 0:
            raise ValidationError(f"domain length must be positive, got {self.L}")
        if int(self.N) != self.N or self.N < 16:
            raise ValidationError(f"need an integer N >= 16 cells, got {self.N}")

    @property
    def h(self) -> float:
        return self.L / self.N

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, self.L, self.N + 1)


@dataclass(frozen=True, eq=False)
class SimField:
    t: float
    rho: np.ndarray
    u: np.ndarray
    theta: np.ndarray


@dataclass(frozen=True)
class Perturbation:
    """Initial disturbance added componentwise to the target at t=0.

    ``gaussian-bump`` is antisymmetrized about x=0 so it vanishes there
    exactly; ``compact-bump`` is a cos^2 pulse supported on
    ``[center - width, center + width]``.
    """

    shape: str = "none"
    amp_rho: float = 0.0
    amp_u: float = 0.0
    amp_theta: float = 0.0
    center: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        if self.shape not in ("none", "gaussian-bump", "compact-bump"):
            raise ConfigError(f"unknown perturbation shape {self.shape!r}")
        if self.shape != "none" and not self.width > 0:
            raise ConfigError("perturbation width must be positive")
        if self.shape == "compact-bump" and self.center - self.width < 0:
            raise ConfigError(
                "compact bump overlaps x=0; the perturbation must vanish at the boundary"
            )

    def profile(self, x: np.ndarray) -> np.ndarray:
        if self.shape == "none":
            return np.zeros_like(x)
        if self.shape == "gaussian-bump":
            return (np.exp(-(((x - self.center) / self.width) ** 2))
                    - np.exp(-(((x + self.center) / self.width) ** 2)))
        s = (x - self.center) / self.width
        return np.where(np.abs(s) < 1, np.cos(0.5 * np.pi * s) ** 2, 0.0)


@dataclass(frozen=True, eq=False)
class Scenario:
    gas: GasModel
    grid: Grid
    target: object
    perturbation: Perturbation = Perturbation()
    t_end: float = 1.0
    cfl: float = 0.5
    max_steps: int = 10_000_000
    snapshot_times: Sequence[float] = ()
    tag: str = ""

    def __post_init__(self):
        if not 0 < self.cfl < 1:
            raise ConfigError(f"cfl number must lie in (0, 1), got {self.cfl}")
        if self.t_end < 0:
            raise ConfigError("t_end must be non-negative")
        u_minus, _ = self.target.boundary_data
        if u_minus > 0:
            raise ConfigError("u_minus > 0 is the inflow problem, which is not supported")

    @property
    def boundary(self) -> tuple[float, float]:
        return tuple(map(float, self.target.boundary_data))

    def schedule(self) -> np.ndarray:
        times = {0.0, float(self.t_end)}
        times.update(float(t) for t in self.snapshot_times if 0 <= t <= self.t_end)
        return np.array(sorted(times))


@dataclass
class Trajectory:
    x: np.ndarray
    snapshots: list
    boundary_times: np.ndarray
    boundary_rho: np.ndarray
    far_flux: np.ndarray
    u_minus: float
    steps: int
    completed: bool

    def at(self, t: float) -> SimField:
        for snap in self.snapshots:
            if snap.t == t:
                return snap
        raise KeyError(f"no snapshot at t={t}")

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])


def initial_field(sc: Scenario) -> SimField:
    x = sc.grid.x
    base = sc.target.state(0.0, x)
    bump = sc.perturbation.profile(x)
    p = sc.perturbation
    rho = base.rho + p.amp_rho * bump
    u = base.u + p.amp_u * bump
    theta = base.theta + p.amp_theta * bump
    u_minus, theta_minus = sc.boundary
    u[0], theta[0] = u_minus, theta_minus
    if np.any(rho <= 0) or np.any(theta <= 0):
        raise ConfigError("perturbed initial data must keep density and temperature positive")
    return SimField(0.0, rho, u, theta)


def cfl_timestep(sc: Scenario, f: SimField) -> float:
    gas, h = sc.gas, sc.grid.h
    speed = np.max(np.abs(f.u) + np.sqrt(gas.R * gas.gamma * f.theta))
    rho_min = float(np.min(f.rho))
    diffusivity = max(gas.mu / rho_min, gas.kappa / (gas.cv * rho_min))
    return sc.cfl * min(h / speed, h * h / (2.0 * diffusivity))


def _rhs(gas: GasModel, h: float, u_minus: float, rho, u, theta):
    R, mu, kappa, cv = gas.R, gas.mu, gas.kappa, gas.cv
    p = R * rho * theta
    drho = np.zeros_like(rho)
    du = np.zeros_like(u)
    dth = np.zeros_like(theta)

    uc = u[1:-1]
    rc = rho[1:-1]
    up = uc > 0

    def transport(f):
        return uc * np.where(up, f[1:-1] - f[:-2], f[2:] - f[1:-1]) / h

    u_x = (u[2:] - u[:-2]) / (2 * h)
    p_x = (p[2:] - p[:-2]) / (2 * h)
    u_xx = (u[2:] - 2 * uc + u[:-2]) / (h * h)
    th_xx = (theta[2:] - 2 * theta[1:-1] + theta[:-2]) / (h * h)

    drho[1:-1] = -transport(rho) - rc * u_x
    du[1:-1] = -transport(u) + (mu * u_xx - p_x) / rc
    dth[1:-1] = -transport(theta) + (kappa * th_xx + mu * u_x * u_x - p[1:-1] * u_x) / (cv * rc)

    # x = 0: density only; u_minus <= 0 so the forward difference is upwind
    u_x0 = (-3 * u[0] + 4 * u[1] - u[2]) / (2 * h)
    drho[0] = -u_minus * (rho[1] - rho[0]) / h - rho[0] * u_x0
    return drho, du, dth


class _FarField:
    """Target state at x=L, tabulated in time and spline-interpolated."""

    def __init__(self, sc: Scenario):
        L = sc.grid.L
        n = max(2, math.ceil(sc.t_end / FAR_FIELD_DT) + 1)
        ts = np.linspace(0.0, max(sc.t_end, FAR_FIELD_DT), n)
        vals = np.array([[float(c[0]) for c in sc.target.state(t, np.array([L]))] for t in ts])
        self._spline = CubicSpline(ts, vals, axis=0)
        self.values = vals

    def __call__(self, t: float):
        return self._spline(t)


def _check(field_arrays, step, t):
    rho, u, theta = field_arrays
    for name, arr in (("density", rho), ("velocity", u), ("temperature", theta)):
        bad = ~np.isfinite(arr)
        if np.any(bad):
            i = int(np.argmax(bad))
            raise SimulationAbort(f"non-finite {name}", step=step, time=t, node=i, value=float(arr[i]))
    for name, arr in (("density", rho), ("temperature", theta)):
        if np.any(arr <= 0):
            i = int(np.argmin(arr))
            raise SimulationAbort(f"non-positive {name}", step=step, time=t, node=i, value=float(arr[i]))


def apply_boundary(sc: Scenario, rho, u, theta, far_state):
    u_minus, theta_minus = sc.boundary
    if u_minus > 0:
        raise ConfigError("u_minus > 0 is the inflow problem, which is not supported")
    u[0] = u_minus
    theta[0] = theta_minus
    rho[-1], u[-1], theta[-1] = far_state


def step(sc: Scenario, f: SimField, dt: float, far_field: Optional[Callable] = None,
         step_index: int = 0) -> SimField:
    """One Heun step of size ``dt`` including boundary conditions."""
    gas, h = sc.gas, sc.grid.h
    u_minus, _ = sc.boundary
    if far_field is None:
        def far_field(t):
            return [float(c[0]) for c in sc.target.state(t, np.array([sc.grid.L]))]
    t_new = f.t + dt
    far = far_field(t_new)

    k1 = _rhs(gas, h, u_minus, f.rho, f.u, f.theta)
    stage = [a + dt * k for a, k in zip((f.rho, f.u, f.theta), k1)]
    apply_boundary(sc, *stage, far)
    _check(stage, step_index, t_new)

    k2 = _rhs(gas, h, u_minus, *stage)
    new = [0.5 * (a + s + dt * k) for a, s, k in zip((f.rho, f.u, f.theta), stage, k2)]
    apply_boundary(sc, *new, far)
    _check(new, step_index, t_new)
    return SimField(t_new, *new)


def run(sc: Scenario, hooks: Iterable[Callable[[int, SimField], None]] = ()) -> Trajectory:
    """Advance the scenario to ``t_end`` (or ``max_steps``).

    Snapshots are stored at the scheduled times, which the step size is
    clipped to hit exactly.  Each hook is called as ``hook(step, field)``
    after initialization (step 0) and after every step.
    """
    hooks = list(hooks)
    f = initial_field(sc)
    schedule = sc.schedule()
    far = _FarField(sc)
    snapshots = [f]
    b_times = [0.0]
    b_rho = [float(f.rho[0])]
    flux = [float(f.rho[-1] * f.u[-1])]
    for hook in hooks:
        hook(0, f)
    next_i = 1
    n = 0
    while next_i < len(schedule) and n < sc.max_steps:
        dt = cfl_timestep(sc, f)
        target_t = schedule[next_i]
        hit = f.t + dt >= target_t * (1 - 1e-14)
        if hit:
            dt = target_t - f.t
        n += 1
        f = step(sc, f, dt, far, n)
        if hit:
            f = SimField(float(target_t), f.rho, f.u, f.theta)
            snapshots.append(f)
            next_i += 1
        b_times.append(f.t)
        b_rho.append(float(f.rho[0]))
        flux.append(float(f.rho[-1] * f.u[-1]))
        for hook in hooks:
            hook(n, f)
    return Trajectory(
        sc.grid.x, snapshots, np.array(b_times), np.array(b_rho), np.array(flux),
        sc.boundary[0], n,
        completed=next_i >= len(schedule),
    )


def far_field_sentinel(sc: Scenario, times: Optional[Sequence[float]] = None) -> float:
    """Largest deviation of the target at x=L from its far-field state."""
    right = sc.target.far_field
    times = sc.schedule() if times is None else times
    worst = 0.0
    for t in times:
        s = sc.target.state(float(t), np.array([sc.grid.L]))
        diff = math.sqrt(sum((float(a[0]) - b) ** 2 for a, b in zip(s, right.as_tuple())))
        worst = max(worst, diff)
    return worst
