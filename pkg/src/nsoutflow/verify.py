"""Verification suites for the wave constructions and the entropy functional.

Each suite takes a :class:`~nsoutflow.config.Config` and returns a list of
:class:`Check` records; a suite passes iff every check passes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .burgers import (
    BurgersProfile, characteristic_residual, exact_solution, initial_profile,
    normalization_constant, riemann_solution,
)
from .config import (
    Config, build_endstates, build_experiment, build_rarefaction, check_admissibility,
    middle_state, stationary_options,
)
from .diagnostics import decay_fits, geometric_times, phi_entropy, relative_entropy_density
from .errors import ConfigError, StationaryDivergence
from .experiment import run_experiment
from .gas import Profile, lambda3
from .waves import (
    classify_regime, smoothed_rarefaction_derivatives,
    smoothed_rarefaction_eval, stationary_second_order_residual, stationary_solve,
    stationary_stable_boundary,
)


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    target: str
    passed: bool

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: {self.value:.6g} ({self.target})"


def _le(name, value, bound) -> Check:
    return Check(name, float(value), f"<= {bound:.3g}", bool(value <= bound))


def _ge(name, value, bound) -> Check:
    return Check(name, float(value), f">= {bound:.3g}", bool(value >= bound))


def _near(name, value, target, tol) -> Check:
    return Check(name, float(value), f"{target:.3g} +/- {tol:.3g}", bool(abs(value - target) <= tol))


def observed_orders(hs, errors) -> np.ndarray:
    hs, errors = np.asarray(hs, float), np.asarray(errors, float)
    return np.log(errors[:-1] / errors[1:]) / np.log(hs[:-1] / hs[1:])


# --------------------------------------------------------------------------
# burgers


def burgers_suite(cfg: Config) -> list[Check]:
    p = BurgersProfile(cfg.req("burgers", "w_minus"), cfg.req("burgers", "w_plus"),
                       cfg.integer("burgers", "q"))
    rel_tol = cfg.req("verify", "rel_tol")
    checks = []

    kq = normalization_constant(p.q)
    total, _ = quad(lambda z: z**p.q * math.exp(-z), 0, np.inf, epsabs=0, epsrel=1e-13, limit=200)
    checks.append(_le("normalization k_q", abs(kq * total - 1.0), rel_tol))

    xs = np.linspace(0.5, 4.0 * p.q, 20)
    worst = 0.0
    for x in xs:
        integral, _ = quad(lambda z: z**p.q * math.exp(-z), 0, x, epsabs=0, epsrel=1e-13, limit=200)
        ref = p.w_minus + p.strength * kq * integral
        worst = max(worst, abs(initial_profile(p, x) - ref) / max(abs(ref), 1e-300))
    checks.append(_le("initial profile vs quadrature (rel)", worst, rel_tol))

    times = (0.0, 1.0, 10.0, 100.0, 1000.0)
    mono = bound = left = resid = slope_bound = 0.0
    for t in times:
        x = np.linspace(p.w_minus * t - 4 * p.q, p.w_plus * t + 8 * p.q, 4001)
        v = exact_solution(p, t, x)
        mono = min(mono, float(v.w_x.min()))
        bound = max(bound, float(np.max(p.w_minus - v.w)), float(np.max(v.w - p.w_plus)))
        behind = x <= p.w_minus * t
        if np.any(behind):
            left = max(left, float(np.max(np.abs(v.w[behind] - p.w_minus))),
                       float(np.max(np.abs(v.w_x[behind]))), float(np.max(np.abs(v.w_xx[behind]))))
        scale = max(1.0, float(np.max(np.abs(x))))
        resid = max(resid, float(np.max(characteristic_residual(p, t, x, v.foot))) / scale)
        if t > 0:
            slope_bound = max(slope_bound, float(v.w_x.max()) * t)
    checks.append(_ge("min w_x", mono, 0.0))
    checks.append(_le("range excess outside [w_-, w_+]", bound, 0.0))
    checks.append(_le("|w - w_-| + derivatives behind x = w_- t", left, 0.0))
    checks.append(_le("characteristic residual (rel)", resid, 1e-9))
    checks.append(_le("max t * w_x (Oleinik bound)", slope_bound, 1.0))

    dists = []
    for t in (10.0, 100.0, 1000.0):
        x = np.linspace(p.w_minus * t - 4 * p.q, p.w_plus * t + 8 * p.q, 20001)
        dists.append(float(np.max(np.abs(exact_solution(p, t, x).w
                                         - riemann_solution(p.w_minus, p.w_plus, t, x)))))
    ratio = dists[-1] / dists[0] if dists[0] > 0 else 0.0
    checks.append(_le("sup|w - w^R| ratio t=1000 vs t=10", ratio, 1.0))

    x = np.linspace(-5.0, 6.0 * p.q, 301)
    eps = 1e-4
    v = exact_solution(p, 3.0, x)
    fd = (exact_solution(p, 3.0, x + eps).w - exact_solution(p, 3.0, x - eps).w) / (2 * eps)
    scale = max(float(np.max(np.abs(v.w_x))), 1e-300)
    checks.append(_le("analytic w_x vs central difference (rel)", np.max(np.abs(fd - v.w_x)) / scale, 1e-6))
    return checks


# --------------------------------------------------------------------------
# smoothed rarefaction


def _euler_residual(w, t, x, h) -> float:
    """Max residual of the conservative Euler system, centered differences in t and x."""
    g = w.gas

    def cons(tt, xx):
        s = smoothed_rarefaction_eval(w, tt, xx)
        E = g.cv * s.theta + 0.5 * s.u**2
        P = g.R * s.rho * s.theta
        return (np.array([s.rho, s.rho * s.u, s.rho * E]),
                np.array([s.rho * s.u, s.rho * s.u**2 + P, s.rho * s.u * E + P * s.u]))

    Ut = (cons(t + h, x)[0] - cons(t - h, x)[0]) / (2 * h)
    Fx = (cons(t, x + h)[1] - cons(t, x - h)[1]) / (2 * h)
    return float(np.max(np.abs(Ut + Fx)))


def _srw_identity_residuals(w, t, x, h):
    g = w.gas
    s = smoothed_rarefaction_eval(w, t, x)
    sp = smoothed_rarefaction_eval(w, t, x + h)
    sm = smoothed_rarefaction_eval(w, t, x - h)
    d = Profile(*((a - b) / (2 * h) for a, b in zip(sp, sm)))
    r1 = d.rho - s.rho * d.theta / ((g.gamma - 1.0) * s.theta)
    r2 = d.u - math.sqrt(g.R * g.gamma) / (g.gamma - 1.0) * d.theta / np.sqrt(s.theta)
    return float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))


def _srw_grid(w, t):
    b = w.burgers
    return np.linspace(0.0, max(b.w_plus, 0.0) * (1.0 + t) + 4.0 * b.q, 2001)


def srw_suite(cfg: Config) -> list[Check]:
    states = build_endstates(cfg)
    w = build_rarefaction(cfg, states, "smoothed")
    g = w.gas
    rel_tol = cfg.req("verify", "rel_tol")
    order_min = cfg.req("verify", "order_min")
    h0 = cfg.req("verify", "srw_h")
    t0 = cfg.req("verify", "srw_t")
    checks = []

    iso_ref = w.right.rho ** (1.0 - g.gamma) * w.right.theta
    iso = low = mono = left_err = 0.0
    for t in (0.0, t0, 10 * t0, 100 * t0):
        x = _srw_grid(w, t)
        s = smoothed_rarefaction_eval(w, t, x)
        iso = max(iso, float(np.max(np.abs(s.rho ** (1.0 - g.gamma) * s.theta / iso_ref - 1.0))))
        low = max(low, float(np.max(w.left.rho - s.rho)), float(np.max(s.rho - w.right.rho)),
                  float(np.max(w.left.theta - s.theta)), float(np.max(s.theta - w.right.theta)))
        mono = min(mono, float(np.min(np.diff(s.theta))))
        behind = x <= float(lambda3(g, w.left)) * (1.0 + t)
        if np.any(behind):
            left_err = max(left_err, max(float(np.max(np.abs(c[behind] - ref)))
                                         for c, ref in zip(s, w.left.as_tuple())))
    checks.append(_le("isentrope rho^(1-gamma) theta (rel)", iso, rel_tol))
    checks.append(_le("bound excess rho, theta", low, 1e-14))
    checks.append(_ge("min increment of theta", mono, 0.0))
    checks.append(_le("deviation from left state behind lambda3_- (1+t)", left_err, 0.0))

    x = _srw_grid(w, t0)
    s = smoothed_rarefaction_eval(w, t0, x)
    d = smoothed_rarefaction_derivatives(w, t0, x)
    scale = max(float(np.max(np.abs(d.theta))), 1e-300)
    a1 = np.max(np.abs(d.rho - s.rho * d.theta / ((g.gamma - 1.0) * s.theta)))
    a2 = np.max(np.abs(d.u - math.sqrt(g.R * g.gamma) / (g.gamma - 1.0) * d.theta / np.sqrt(s.theta)))
    checks.append(_le("derivative identities, analytic derivatives (rel)", max(a1, a2) / scale, rel_tol))

    hs = [h0 / 2**k for k in range(4)]
    res = [_srw_identity_residuals(w, t0, x, h) for h in hs]
    for i, label in enumerate(("rho_x identity", "u_x identity")):
        orders = observed_orders(hs, [r[i] for r in res])
        checks.append(_ge(f"{label} FD order (min of 3)", orders.min(), order_min))
    euler = [_euler_residual(w, t0, x, h) for h in hs]
    checks.append(_ge("Euler residual FD order (min of 3)", observed_orders(hs, euler).min(), order_min))

    if lambda3(g, w.left) >= 0:
        at0 = smoothed_rarefaction_eval(w, t0, np.array([0.0]))
        err = max(abs(float(c[0]) - ref) for c, ref in zip(at0, w.left.as_tuple()))
        checks.append(_le("boundary value equals left state", err, 0.0))
    return checks


# --------------------------------------------------------------------------
# decay


def decay_suite(cfg: Config) -> list[Check]:
    states = build_endstates(cfg)
    w = build_rarefaction(cfg, states, "smoothed")
    tol = cfg.req("verify", "slope_tol")
    tol2 = cfg.req("verify", "slope_tol_second")
    h = cfg.req("verify", "decay_h")
    times = geometric_times(cfg.req("verify", "decay_t_min"), cfg.req("verify", "decay_t_max"),
                            cfg.integer("verify", "decay_samples"))
    first = decay_fits(w, times, (1.0, 2.0, math.inf), 1, "u", h)
    second = decay_fits(w, times, (math.inf,), 2, "u", h)
    checks = [
        _near("slope ||u_x||_inf", first[math.inf].slope, -1.0, tol),
        _near("slope ||u_x||_2", first[2.0].slope, -0.5, tol),
        _near("slope ||u_x||_1", first[1.0].slope, 0.0, tol),
        _le("max ||u_x||_1 / delta", max(first[1.0].norms) / w.strength,
            cfg.req("verify", "plateau_factor")),
        # sup-norm exponent of the second derivative is -1 + 1/q
        _near("slope ||u_xx||_inf", second[math.inf].slope, -1.0 + 1.0 / w.q, tol2),
    ]
    return checks


# --------------------------------------------------------------------------
# stationary


def _layer_checks(w, tol, residual_tol, label) -> list[Check]:
    mom, ene = stationary_second_order_residual(w)
    return [
        _le(f"{label} terminal distance", w.terminal_distance, tol),
        _le(f"{label} second-order residual", max(np.max(np.abs(mom)), np.max(np.abs(ene))), residual_tol),
        _ge(f"{label} decay rate c", w.decay_c, 1e-12),
        _ge(f"{label} decay fit R^2", w.decay_r2, 0.99),
        _le(f"{label} boundary mismatch",
            max(abs(w.u[0] - w.u_minus), abs(w.theta[0] - w.theta_minus)), 0.0),
    ]


def stationary_suite(cfg: Config) -> list[Check]:
    if cfg.kind == "rarefaction":
        raise ConfigError("stationary suite needs the middle state (kind stationary or superposition)")
    gas = cfg.gas
    middle = middle_state(cfg)
    u_minus = cfg.req("endstates", "u_minus")
    opts = stationary_options(cfg)
    residual_tol = cfg.req("verify", "residual_tol")
    regime = classify_regime(gas, middle)
    checks = []
    if regime != "subsonic":
        theta_minus = cfg.req("endstates", "theta_minus")
        w = stationary_solve(gas, (u_minus, theta_minus), middle, **opts)
        checks.extend(_layer_checks(w, opts["tol"], residual_tol, regime))
        return checks

    theta_shoot = stationary_stable_boundary(gas, middle, u_minus)
    w = stationary_solve(gas, (u_minus, theta_shoot), middle, **opts)
    checks.append(_le("shooting vs stable manifold theta_-",
                      abs(w.meta["theta_on_curve"] - theta_shoot), 1e-8))
    checks.extend(_layer_checks(w, opts["tol"], residual_tol, "subsonic"))

    theta_cfg = cfg.num("endstates", "theta_minus", allow_auto=True)
    off = theta_cfg if theta_cfg is not None and abs(theta_cfg - theta_shoot) > 1e-6 else theta_shoot + 1e-3
    try:
        stationary_solve(gas, (u_minus, off), middle, **opts)
        diverged = 0.0
    except StationaryDivergence:
        diverged = 1.0
    checks.append(Check("off-curve boundary data diverges (negative test)", diverged,
                        "== 1", diverged == 1.0))
    return checks


# --------------------------------------------------------------------------
# entropy


def entropy_suite(cfg: Config) -> list[Check]:
    gas = cfg.gas
    n = cfg.integer("verify", "entropy_samples")
    rng = np.random.default_rng(cfg.integer("verify", "seed"))
    checks = []

    z = np.exp(rng.uniform(-5.0, 5.0, n))
    phi = phi_entropy(z)
    checks.append(_ge("min Phi(z)", phi.min(), 0.0))
    away = np.abs(z - 1.0) > 1e-6
    checks.append(_ge("min Phi(z) for |z-1| > 1e-6", phi[away].min(), 1e-14))
    checks.append(_le("Phi(1)", float(phi_entropy(1.0)), 0.0))
    zz = np.linspace(0.1, 10.0, 2001)
    checks.append(_ge("min second difference of Phi on [0.1, 10]",
                      np.min(np.diff(phi_entropy(zz), 2)), 1e-300))

    s_rho, s_u, s_th = np.exp(rng.uniform(-2, 2, n)), rng.uniform(-3, 3, n), np.exp(rng.uniform(-2, 2, n))
    r_rho, r_u, r_th = np.exp(rng.uniform(-2, 2, n)), rng.uniform(-3, 3, n), np.exp(rng.uniform(-2, 2, n))
    s = Profile(s_rho, s_u, s_th)
    r = Profile(r_rho, r_u, r_th)
    e_sr = relative_entropy_density(gas, s, r)
    checks.append(_ge("min relative entropy, random pairs", e_sr.min(), 0.0))
    checks.append(_le("relative entropy of identical states", np.max(relative_entropy_density(gas, s, s)), 0.0))
    e_rs = relative_entropy_density(gas, r, s)
    checks.append(_ge("fraction of asymmetric pairs", np.mean(np.abs(e_sr - e_rs) > 1e-12), 0.99))

    if cfg.get("perturbation", "shape") != "none":
        exp = build_experiment(cfg)
        _, summary = run_experiment(exp, check_admissibility(cfg, exp.states), cfg.digest)
        checks.append(_le("max energy integral / initial", summary["checks"]["energy_max_ratio"], 2.0))
    return checks


SUITES: dict[str, Callable[[Config], list[Check]]] = {
    "burgers": burgers_suite,
    "srw": srw_suite,
    "decay": decay_suite,
    "stationary": stationary_suite,
    "entropy": entropy_suite,
}
