"""Asymptotic wave patterns of the half-line outflow problem.

Every pattern exposes ``state(t, x) -> Profile`` on arrays of points, plus the
boundary data ``(u_minus, theta_minus)`` it carries at ``x = 0`` and the far
field state it tends to as ``x -> infinity``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Protocol

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator

from .burgers import BurgersProfile, exact_solution, riemann_solution
from .errors import ShootingError, StationaryDivergence, ValidationError
from .gas import EndStates, FluidState, GasModel, Profile, lambda3, mach_at_infinity

TRANSONIC_TOL = 1e-6


class WavePattern(Protocol):
    gas: GasModel

    def state(self, t: float, x) -> Profile: ...

    @property
    def boundary_data(self) -> tuple[float, float]: ...

    @property
    def far_field(self) -> FluidState: ...


def _strength(a: tuple[float, float], b: tuple[float, float]) -> float:
    return float(math.hypot(a[0] - b[0], a[1] - b[1]))


# --------------------------------------------------------------------------
# 3-rarefaction wave


def r3_velocity(gas: GasModel, base: FluidState, rho):
    """Velocity on the 3-rarefaction curve through ``base`` at density ``rho``.

    Closed-form antiderivative of ``sqrt(R gamma rho_b^{1-gamma} theta_b) z^{(gamma-3)/2}``.
    """
    k = 2.0 / (gas.gamma - 1.0)
    c_b = float(gas.sound_speed(base.theta))
    return base.u + k * c_b * ((np.asarray(rho) / base.rho) ** (1.0 / k) - 1.0)


def r3_connect(gas: GasModel, right: FluidState, theta_minus: float) -> tuple[float, float]:
    """Left density and velocity such that ``right`` lies on R_3 of the left state."""
    if not theta_minus > 0:
        raise ValidationError(f"theta_minus must be positive, got {theta_minus}")
    if theta_minus > right.theta:
        raise ValidationError(
            f"a 3-rarefaction needs theta_minus <= theta_plus, got {theta_minus} > {right.theta}"
        )
    rho_minus = (theta_minus / right.theta) ** (1.0 / (gas.gamma - 1.0)) * right.rho
    u_minus = float(r3_velocity(gas, right, rho_minus))
    return float(rho_minus), u_minus


def r3_connect_right(gas: GasModel, left: FluidState, theta_plus: float) -> FluidState:
    """Far-field state on R_3(left) with temperature ``theta_plus``."""
    if theta_plus < left.theta:
        raise ValidationError("a 3-rarefaction needs theta_plus >= theta_minus")
    rho_plus = (theta_plus / left.theta) ** (1.0 / (gas.gamma - 1.0)) * left.rho
    return FluidState(float(rho_plus), float(r3_velocity(gas, left, rho_plus)), theta_plus)


def on_r3_curve(gas: GasModel, left: FluidState, right: FluidState, rtol: float = 1e-10) -> bool:
    if right.rho < left.rho:
        return False
    iso_l = left.rho ** (1.0 - gas.gamma) * left.theta
    iso_r = right.rho ** (1.0 - gas.gamma) * right.theta
    if abs(iso_l - iso_r) > rtol * abs(iso_l):
        return False
    u_expected = float(r3_velocity(gas, left, right.rho))
    scale = max(1.0, abs(left.u), abs(right.u))
    return abs(u_expected - right.u) <= rtol * scale


def _invert_lambda3(gas: GasModel, left: FluidState, right: FluidState, sigma) -> Profile:
    sigma = np.asarray(sigma, dtype=float)
    k = 2.0 / (gas.gamma - 1.0)
    c_r = float(gas.sound_speed(right.theta))
    c = (sigma - right.u + k * c_r) / (k + 1.0)
    if np.any(c <= 0):
        raise ValidationError("characteristic speed outside the physical branch")
    ratio = c / c_r
    rho = right.rho * ratio**k
    theta = right.theta * ratio**2
    u = sigma - c
    w_minus = float(lambda3(gas, left))
    w_plus = float(lambda3(gas, right))
    at_left = sigma <= w_minus
    at_right = sigma >= w_plus
    rho = np.where(at_left, left.rho, np.where(at_right, right.rho, rho))
    u = np.where(at_left, left.u, np.where(at_right, right.u, u))
    theta = np.where(at_left, left.theta, np.where(at_right, right.theta, theta))
    return Profile(rho, u, theta)


@dataclass(frozen=True)
class RarefactionWave:
    """3-rarefaction connecting ``left`` to ``right``.

    ``mode`` selects what :meth:`state` evaluates: the centered fan
    (``"exact"``) or the Burgers-smoothed approximation (``"smoothed"``),
    which is shifted by one time unit so it is smooth at ``t = 0``.
    """

    gas: GasModel
    left: FluidState
    right: FluidState
    mode: str = "smoothed"
    q: int = 16

    def __post_init__(self):
        if self.mode not in ("exact", "smoothed"):
            raise ValidationError(f"unknown rarefaction mode {self.mode!r}")
        if not on_r3_curve(self.gas, self.left, self.right):
            raise ValidationError("right state does not lie on the 3-rarefaction curve of left")
        if lambda3(self.gas, self.left) > lambda3(self.gas, self.right):
            raise ValidationError("lambda3 must increase across a rarefaction")
        BurgersProfile(0.0, 1.0, self.q)  # validates q

    @classmethod
    def from_right(cls, gas, right: FluidState, theta_minus: float, **kw) -> "RarefactionWave":
        rho_minus, u_minus = r3_connect(gas, right, theta_minus)
        return cls(gas, FluidState(rho_minus, u_minus, theta_minus), right, **kw)

    def with_mode(self, mode: str) -> "RarefactionWave":
        return RarefactionWave(self.gas, self.left, self.right, mode, self.q)

    @property
    def strength(self) -> float:
        return _strength((self.right.u, self.right.theta), (self.left.u, self.left.theta))

    @property
    def burgers(self) -> BurgersProfile:
        return BurgersProfile(
            float(lambda3(self.gas, self.left)), float(lambda3(self.gas, self.right)), self.q
        )

    @property
    def boundary_data(self) -> tuple[float, float]:
        return (self.left.u, self.left.theta)

    @property
    def far_field(self) -> FluidState:
        return self.right

    def from_sigma(self, sigma) -> Profile:
        return _invert_lambda3(self.gas, self.left, self.right, sigma)

    def state(self, t: float, x) -> Profile:
        if self.mode == "exact":
            return exact_rarefaction_eval(self, t, x)
        return smoothed_rarefaction_eval(self, t, x)


def exact_rarefaction_eval(w: RarefactionWave, t: float, x) -> Profile:
    b = w.burgers
    return w.from_sigma(riemann_solution(b.w_minus, b.w_plus, t, x))


def smoothed_rarefaction_eval(w: RarefactionWave, t: float, x) -> Profile:
    if t < 0:
        raise ValidationError("smoothed rarefaction needs t >= 0")
    return w.from_sigma(exact_solution(w.burgers, 1.0 + t, x).w)


def smoothed_rarefaction_derivatives(w: RarefactionWave, t: float, x) -> Profile:
    """Analytic x-derivatives of the smoothed wave, via the chain rule on lambda3."""
    val = exact_solution(w.burgers, 1.0 + t, x)
    s = w.from_sigma(val.w)
    gm1 = w.gas.gamma - 1.0
    k = 2.0 / gm1
    c = w.gas.sound_speed(s.theta)
    # along R_3: u = sigma - c, c = (sigma + const)/(k+1)
    c_x = val.w_x / (k + 1.0)
    theta_x = 2.0 * s.theta / c * c_x
    rho_x = k * s.rho / c * c_x
    u_x = val.w_x - c_x
    return Profile(rho_x, u_x, theta_x)


# --------------------------------------------------------------------------
# admissibility


@dataclass(frozen=True)
class AdmissibilityReport:
    scenario: str
    conditions: dict
    strengths: dict

    @property
    def ok(self) -> bool:
        return all(self.conditions.values())

    def failures(self) -> list[str]:
        return [name for name, passed in self.conditions.items() if not passed]


COND_R3 = "(ρ_+,u_+,θ_+)∈R_3(ρ_−,u_−,θ_−)"
COND_R3_MID = "(ρ_+,u_+,θ_+)∈R_3(ρ_m,u_m,θ_m)"
COND_BOUNDARY_SOUND = "u_−+√(Rγθ_−)≥0"
COND_OUTFLOW = "u_−≤0"
COND_MIDDLE_SUBSONIC = "√(Rγθ_m)≥−u_m>0"


def admissibility_check(gas: GasModel, states: EndStates, scenario: str) -> AdmissibilityReport:
    """Evaluate the structural hypotheses of the two stability statements."""
    right = states.right
    conds: dict[str, bool] = {}
    strengths: dict[str, float] = {}
    if scenario == "rarefaction":
        rho_minus = (states.theta_minus / right.theta) ** (1.0 / (gas.gamma - 1.0)) * right.rho
        u_expected = float(r3_velocity(gas, right, rho_minus))
        scale = max(1.0, abs(right.u), abs(states.u_minus))
        conds[COND_R3] = bool(
            states.theta_minus <= right.theta
            and abs(u_expected - states.u_minus) <= 1e-10 * scale
        )
        conds[COND_BOUNDARY_SOUND] = bool(
            states.u_minus + math.sqrt(gas.R * gas.gamma * states.theta_minus) >= 0
        )
        conds[COND_OUTFLOW] = bool(states.u_minus <= 0)
        strengths["delta"] = _strength((right.u, right.theta), (states.u_minus, states.theta_minus))
    elif scenario == "superposition":
        mid = states.middle
        if mid is None:
            raise ValidationError("superposition scenario needs a middle state")
        conds[COND_R3_MID] = on_r3_curve(gas, mid, right)
        conds[COND_MIDDLE_SUBSONIC] = bool(math.sqrt(gas.R * gas.gamma * mid.theta) >= -mid.u > 0)
        conds[COND_OUTFLOW] = bool(states.u_minus <= 0)
        strengths["delta_tilde"] = _strength((mid.u, mid.theta), (states.u_minus, states.theta_minus))
        strengths["delta_bar"] = _strength((mid.u, mid.theta), (right.u, right.theta))
    else:
        raise ValidationError(f"unknown scenario {scenario!r}")
    return AdmissibilityReport(scenario, conds, strengths)


# --------------------------------------------------------------------------
# stationary boundary layer


def _deviation_rhs(gas: GasModel, endstate: FluidState):
    """Once-integrated stationary system in deviation variables (du, dtheta)."""
    u_m, th_m = endstate.u, endstate.theta
    m = endstate.rho * u_m
    R, mu, kappa, cv = gas.R, gas.mu, gas.kappa, gas.cv

    def rhs(_x, y):
        du, dth = y
        u = u_m + du
        mu_ux = m * du + R * m * (u_m * dth - th_m * du) / (u * u_m)
        kappa_thx = m * cv * dth + 0.5 * m * du * (u + u_m) + R * m * dth - u * mu_ux
        return np.array([mu_ux / mu, kappa_thx / kappa])

    return rhs


def stationary_reduced_rhs(gas: GasModel, m: float, endstate: FluidState, u, theta):
    """``(u', theta')`` of the stationary layer with mass flux ``m = rho u``."""
    if not np.isclose(m, endstate.rho * endstate.u, rtol=1e-12, atol=0):
        raise ValidationError("mass flux must equal rho_m * u_m")
    if np.any(np.asarray(u) == 0):
        raise ZeroDivisionError("velocity vanished: left the physical branch")
    d = _deviation_rhs(gas, endstate)(0.0, np.array([np.asarray(u) - endstate.u,
                                                      np.asarray(theta) - endstate.theta]))
    return d[0], d[1]


def stationary_jacobian(gas: GasModel, endstate: FluidState) -> np.ndarray:
    """Linearization of the reduced stationary system at its far-field state."""
    u_m, th_m, rho_m = endstate.u, endstate.theta, endstate.rho
    m = rho_m * u_m
    p_m = gas.R * rho_m * th_m
    return np.array([
        [m * (1.0 - gas.R * th_m / u_m**2) / gas.mu, gas.R * m / (gas.mu * u_m)],
        [p_m / gas.kappa, m * gas.cv / gas.kappa],
    ])


def classify_regime(gas: GasModel, endstate: FluidState) -> str:
    mach = float(mach_at_infinity(gas, endstate))
    if abs(mach - 1.0) < TRANSONIC_TOL:
        return "transonic"
    return "supersonic" if mach > 1 else "subsonic"


@dataclass(frozen=True, eq=False)
class StationaryWave:
    gas: GasModel
    u_minus: float
    theta_minus: float
    endstate: FluidState
    x: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    theta: np.ndarray
    regime: str
    terminal_distance: float
    decay_C: float = float("nan")
    decay_c: float = float("nan")
    decay_r2: float = float("nan")
    decay_model: str = "exponential"
    meta: dict = field(default_factory=dict)

    @property
    def mass_flux(self) -> float:
        return self.endstate.rho * self.endstate.u

    @property
    def strength(self) -> float:
        return _strength((self.endstate.u, self.endstate.theta), (self.u_minus, self.theta_minus))

    @property
    def zero_strength(self) -> bool:
        return self.strength == 0.0

    @property
    def x_max(self) -> float:
        return float(self.x[-1])

    @property
    def boundary_data(self) -> tuple[float, float]:
        return (self.u_minus, self.theta_minus)

    @property
    def far_field(self) -> FluidState:
        return self.endstate

    @cached_property
    def _interp(self):
        return tuple(PchipInterpolator(self.x, col, extrapolate=False)
                     for col in (self.rho, self.u, self.theta))

    def state(self, t: float, x) -> Profile:
        x = np.asarray(x, dtype=float)
        cols = []
        for interp, far in zip(self._interp, self.endstate.as_tuple()):
            inside = x <= self.x_max
            vals = np.full(x.shape, far, dtype=float)
            if np.any(inside):
                vals[inside] = interp(np.maximum(x[inside], 0.0))
            cols.append(vals)
        return Profile(*cols)


def _fit_exponential(x, dev):
    logs = np.log(dev)
    A = np.vstack([np.ones_like(x), x]).T
    coef, *_ = np.linalg.lstsq(A, logs, rcond=None)
    pred = A @ coef
    ss_res = float(np.sum((logs - pred) ** 2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(np.exp(coef[0])), float(-coef[1]), r2


def fit_decay(x, u, u_m, delta, model="exponential"):
    """Fit ``|u - u_m| ~ C exp(-c x)`` (or the algebraic transonic law) on the tail.

    Returns ``(C, c, r2)``; for the exponential model ``C`` is normalized by the
    layer strength so the bound reads ``C * delta * exp(-c x)``.
    """
    dev = np.abs(np.asarray(u) - u_m)
    if delta == 0:
        return float("nan"), float("nan"), float("nan")
    window = (dev <= 1e-2 * delta) & (dev >= 1e-6 * delta)
    if np.count_nonzero(window) < 10:
        return float("nan"), float("nan"), float("nan")
    xs, ds = np.asarray(x)[window], dev[window]
    if model == "algebraic":
        C, k1, r2 = _fit_exponential(np.log1p(delta * xs), ds)
        return C / delta, k1, r2
    C, c, r2 = _fit_exponential(xs, ds)
    return C / delta, c, r2


def _decay_rate_estimate(gas, endstate, regime):
    eig = np.linalg.eigvals(stationary_jacobian(gas, endstate))
    neg = [abs(e.real) for e in eig if e.real < 0]
    if not neg:
        raise StationaryDivergence("no decaying direction at the far-field state")
    return min(neg) if regime == "supersonic" else (neg[0] if regime == "subsonic" else max(neg))


def _sample_grid(x_max: float, n_samples: int) -> np.ndarray:
    return np.linspace(0.0, x_max, n_samples)


def _forward_layer(gas, endstate, y0, x_max, rtol, atol, trust):
    rhs = _deviation_rhs(gas, endstate)

    def leave(_x, y):
        return trust - math.hypot(y[0], y[1])
    leave.terminal = True

    def sign_change(_x, y):
        return endstate.u + y[0]
    sign_change.terminal = True

    return solve_ivp(rhs, (0.0, x_max), y0, method="DOP853", rtol=rtol, atol=atol,
                     dense_output=True, events=[leave, sign_change])


def _stable_manifold_branch(gas, endstate, du_target, dth_hint, rtol, atol, trust, eps):
    """Trace the 1-D stable manifold backward from the far-field state until
    ``u - u_m`` reaches ``du_target``.  Returns (sol, X, lam_s, start)."""
    J = stationary_jacobian(gas, endstate)
    vals, vecs = np.linalg.eig(J)
    i_s = int(np.argmin(vals.real))
    lam_s = float(vals[i_s].real)
    v_s = vecs[:, i_s].real
    v_s = v_s / np.linalg.norm(v_s)
    ref = du_target if du_target != 0 else dth_hint
    comp = v_s[0] if du_target != 0 else v_s[1]
    sgn = 1.0 if ref * comp > 0 else -1.0
    start = sgn * eps * v_s
    rhs = _deviation_rhs(gas, endstate)

    def hit(_x, y):
        return y[0] - du_target
    hit.terminal = True

    def leave(_x, y):
        return trust - math.hypot(y[0], y[1])
    leave.terminal = True

    span = 200.0 / abs(lam_s)
    sol = solve_ivp(rhs, (0.0, -span), start, method="DOP853", rtol=rtol, atol=atol,
                    dense_output=True, events=[hit, leave])
    if sol.status != 1 or len(sol.t_events[0]) == 0:
        raise StationaryDivergence("stable manifold does not reach the boundary velocity")
    X = -float(sol.t_events[0][0])
    return sol, X, lam_s, start


def stationary_solve(
    gas: GasModel,
    boundary: tuple[float, float],
    endstate: FluidState,
    x_max: Optional[float] = None,
    tol: float = 1e-8,
    *,
    rtol: float = 1e-10,
    atol: Optional[float] = None,
    delta0: Optional[float] = None,
    trust_factor: float = 10.0,
    n_samples: int = 20001,
    curve_tol: float = 1e-7,
) -> StationaryWave:
    """Construct the stationary layer joining ``boundary`` to ``endstate``.

    Supersonic and transonic layers are integrated forward from ``x = 0``.
    A subsonic far field is a saddle, so the layer exists only for boundary
    data on its stable curve; it is then traced backward along the stable
    manifold, which is well conditioned, and matched to ``u_minus``.
    """
    u_minus, theta_minus = map(float, boundary)
    if not endstate.u < 0:
        raise ValidationError("stationary outflow layer needs u_m < 0")
    if u_minus >= 0:
        raise ValidationError("stationary outflow layer needs u_minus < 0")
    regime = classify_regime(gas, endstate)
    dev0 = np.array([u_minus - endstate.u, theta_minus - endstate.theta])
    delta = float(np.hypot(*dev0))
    if delta0 is None:
        delta0 = 0.1 * min(abs(endstate.u), endstate.theta)
    if delta >= delta0:
        raise ValidationError(
            f"boundary data outside the admissible ball: strength {delta:.3g} >= delta0 {delta0:.3g}"
        )
    m = endstate.rho * endstate.u

    if delta == 0:
        xs = _sample_grid(x_max if x_max else 1.0, n_samples)
        ones = np.ones_like(xs)
        return StationaryWave(
            gas, u_minus, theta_minus, endstate, xs, endstate.rho * ones, endstate.u * ones,
            endstate.theta * ones, regime, 0.0, meta={"zero_strength": True},
        )

    # deviation variables have size ~delta, so the absolute tolerance scales with it
    if atol is None:
        atol = rtol * delta
    rate = _decay_rate_estimate(gas, endstate, regime)
    trust = trust_factor * delta
    meta = {"zero_strength": False, "eigenvalues": [complex(e) for e in
                                                    np.linalg.eigvals(stationary_jacobian(gas, endstate))]}

    if regime == "subsonic":
        sol, X, lam_s, start = _stable_manifold_branch(
            gas, endstate, dev0[0], dev0[1], rtol, atol, trust, eps=1e-6 * delta
        )
        theta_curve = endstate.theta + float(sol.sol(-X)[1])
        meta["theta_on_curve"] = theta_curve
        if abs(theta_curve - theta_minus) > curve_tol:
            raise StationaryDivergence(
                f"subsonic boundary data off the stable curve: theta_minus={theta_minus:.12g}, "
                f"curve value {theta_curve:.12g}"
            )
        if x_max is None:
            x_max = X + 60.0 / rate
        xs = _sample_grid(x_max, n_samples)
        dev = np.empty((2, xs.size))
        near = xs <= X
        dev[:, near] = sol.sol(xs[near] - X)
        dev[:, ~near] = np.outer(start, np.exp(lam_s * (xs[~near] - X)))
        dev[:, 0] = dev0  # the curve value differs from theta_minus by at most curve_tol
        terminal = float(np.hypot(*dev[:, -1]))
        meta["manifold_offset"] = X
    else:
        if x_max is None:
            x_max = 200.0 / delta if regime == "transonic" else 60.0 / rate
        sol = _forward_layer(gas, endstate, dev0, x_max, rtol, atol, trust)
        if sol.status == 1:
            which = "left the trust region" if len(sol.t_events[0]) else "velocity changed sign"
            raise StationaryDivergence(f"stationary integration {which} at x={sol.t[-1]:.6g}")
        if sol.status != 0:
            raise StationaryDivergence(f"stationary integration failed: {sol.message}")
        xs = _sample_grid(x_max, n_samples)
        dev = sol.sol(xs)
        dev[:, 0] = dev0
        terminal = float(np.hypot(*sol.y[:, -1]))
        if regime == "supersonic" and terminal > tol:
            raise StationaryDivergence(f"terminal distance {terminal:.3g} exceeds tol {tol:.3g}")
        if regime == "transonic" and terminal > delta:
            raise StationaryDivergence("transonic trajectory did not approach the far field")

    u = endstate.u + dev[0]
    theta = endstate.theta + dev[1]
    rho = m / u
    model = "algebraic" if regime == "transonic" else "exponential"
    C, c, r2 = fit_decay(xs, u, endstate.u, delta, model)
    return StationaryWave(
        gas, u_minus, theta_minus, endstate, xs, rho, u, theta, regime, terminal,
        decay_C=C, decay_c=c, decay_r2=r2, decay_model=model, meta=meta,
    )


def stationary_stable_boundary(
    gas: GasModel,
    endstate: FluidState,
    u_minus: float,
    x_max: Optional[float] = None,
    tol: float = 1e-8,
    *,
    bracket: Optional[tuple[float, float]] = None,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Boundary temperature on the stable curve of a subsonic far field.

    Forward shooting: each trial ``theta_minus`` is integrated until it leaves
    a trust region; the sign of its unstable-mode component there is the
    shooting functional, bisected to roundoff.
    """
    if u_minus == endstate.u:
        return endstate.theta
    J = stationary_jacobian(gas, endstate)
    vals, left_vecs = np.linalg.eig(J.T)
    i_u = int(np.argmax(vals.real))
    if vals[i_u].real <= 0:
        raise ShootingError("far-field state has no unstable direction; no shooting needed")
    l_u = left_vecs[:, i_u].real
    rate = _decay_rate_estimate(gas, endstate, classify_regime(gas, endstate))
    if x_max is None:
        x_max = 60.0 / rate
    du = u_minus - endstate.u

    def functional(theta):
        dev0 = np.array([du, theta - endstate.theta])
        trust = 10.0 * max(abs(du), 1e-300)
        sol = _forward_layer(gas, endstate, dev0, x_max, rtol, atol, trust)
        return float(l_u @ sol.y[:, -1])

    if bracket is None:
        span = 0.5 * endstate.theta
        bracket = (endstate.theta - span, endstate.theta + span)
    lo, hi = bracket
    g_lo, g_hi = functional(lo), functional(hi)
    if g_lo == 0:
        return lo
    if g_hi == 0:
        return hi
    if np.sign(g_lo) == np.sign(g_hi):
        raise ShootingError(f"no sign change of the shooting functional on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        g_mid = functional(mid)
        if g_mid == 0:
            return mid
        if np.sign(g_mid) == np.sign(g_lo):
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid
    return 0.5 * (lo + hi)


def stationary_second_order_residual(w: StationaryWave) -> tuple[np.ndarray, np.ndarray]:
    """Residuals of the un-integrated momentum and energy equations on the samples.

    Fourth-order centered differences; the two points nearest each end are dropped.
    """
    g = w.gas
    h = w.x[1] - w.x[0]

    def d1(f):
        return (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)

    def d2(f):
        return (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h * h)

    rho, u, th = w.rho, w.u, w.theta
    p = g.R * rho * th
    energy = g.cv * th + 0.5 * u * u
    mom = d1(rho * u * u + p) - g.mu * d2(u)
    # (u u')' expanded by the product rule so no stencil is nested
    ene = d1(rho * u * energy + u * p) - g.kappa * d2(th) - g.mu * (d1(u) ** 2 + u[2:-2] * d2(u))
    return mom, ene


# --------------------------------------------------------------------------
# superposition


@dataclass(frozen=True, eq=False)
class SuperpositionWave:
    """Stationary layer plus a 3-rarefaction leaving the shared middle state."""

    stationary: StationaryWave
    rarefaction: RarefactionWave
    kind: str = "hat"

    def __post_init__(self):
        if self.kind not in ("check", "hat"):
            raise ValidationError(f"unknown superposition kind {self.kind!r}")
        if self.stationary.endstate.as_tuple() != self.rarefaction.left.as_tuple():
            raise ValidationError("stationary end state must equal the rarefaction left state")
        want = "exact" if self.kind == "check" else "smoothed"
        if self.rarefaction.mode != want:
            object.__setattr__(self, "rarefaction", self.rarefaction.with_mode(want))

    @property
    def gas(self) -> GasModel:
        return self.stationary.gas

    @property
    def middle(self) -> FluidState:
        return self.stationary.endstate

    @property
    def boundary_data(self) -> tuple[float, float]:
        return self.stationary.boundary_data

    @property
    def far_field(self) -> FluidState:
        return self.rarefaction.right

    @property
    def delta_tilde(self) -> float:
        return self.stationary.strength

    @property
    def delta_bar(self) -> float:
        return self.rarefaction.strength

    def with_kind(self, kind: str) -> "SuperpositionWave":
        return SuperpositionWave(self.stationary, self.rarefaction, kind)

    def state(self, t: float, x) -> Profile:
        s = self.stationary.state(t, x)
        r = self.rarefaction.state(t, x)
        m = self.middle
        return Profile(s.rho + r.rho - m.rho, s.u + r.u - m.u, s.theta + r.theta - m.theta)


def uniform_state_wave(gas: GasModel, state: FluidState) -> RarefactionWave:
    """A zero-strength rarefaction: the constant pattern ``state``."""
    return RarefactionWave(gas, state, state)


__all__ = [
    "AdmissibilityReport", "RarefactionWave", "StationaryWave", "SuperpositionWave",
    "WavePattern", "admissibility_check", "classify_regime", "exact_rarefaction_eval",
    "fit_decay", "r3_connect", "r3_connect_right", "r3_velocity", "smoothed_rarefaction_eval",
    "smoothed_rarefaction_derivatives", "stationary_jacobian", "stationary_reduced_rhs",
    "stationary_second_order_residual", "stationary_solve", "stationary_stable_boundary",
    "uniform_state_wave", "on_r3_curve",
]
