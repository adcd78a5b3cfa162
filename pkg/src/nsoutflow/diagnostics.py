"""Analysis quantities for simulated trajectories and wave patterns."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import ValidationError
from .gas import GasModel
from .solver import SimField, Trajectory
from .waves import RarefactionWave, smoothed_rarefaction_eval


def phi_entropy(z):
    """Convex entropy kernel ``z - ln z - 1`` (zero only at ``z = 1``)."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise ValidationError("phi_entropy needs positive arguments")
    return z - np.log(z) - 1.0


def relative_entropy_density(gas: GasModel, s, ref):
    """Relative entropy of ``s`` with respect to the reference state ``ref``."""
    return (gas.R * ref.theta * phi_entropy(ref.rho / s.rho)
            + 0.5 * (s.u - ref.u) ** 2
            + gas.cv * ref.theta * phi_entropy(s.theta / ref.theta))


def trapezoid(f, x) -> float:
    return float(np.trapezoid(f, x))


def energy_integral(gas: GasModel, f: SimField, target, x: np.ndarray) -> float:
    ref = target.state(f.t, x)
    return trapezoid(f.rho * relative_entropy_density(gas, f, ref), x)


@dataclass(frozen=True, eq=False)
class PerturbationField:
    t: float
    phi: np.ndarray
    psi: np.ndarray
    vartheta: np.ndarray

    @classmethod
    def against(cls, f: SimField, pattern, x: np.ndarray, time_shift: float = 0.0):
        ref = pattern.state(f.t + time_shift, x)
        return cls(f.t, f.rho - ref.rho, f.u - ref.u, f.theta - ref.theta)

    def components(self):
        return {"phi": self.phi, "psi": self.psi, "vartheta": self.vartheta}


def perturbation_norms(pf: PerturbationField, x: np.ndarray) -> dict:
    """Discrete L2, H1 and sup norms per component and combined.

    Derivatives: centered in the interior, second-order one-sided at the ends.
    """
    out = {}
    l2_sq = h1_sq = 0.0
    for name, comp in pf.components().items():
        dcomp = np.gradient(comp, x, edge_order=2)
        l2 = trapezoid(comp**2, x)
        d2 = trapezoid(dcomp**2, x)
        out[name] = {"l2": math.sqrt(l2), "h1": math.sqrt(l2 + d2),
                     "sup": float(np.max(np.abs(comp)))}
        l2_sq += l2
        h1_sq += l2 + d2
    pointwise = np.sqrt(pf.phi**2 + pf.psi**2 + pf.vartheta**2)
    n_tail = max(1, int(round(0.05 * x.size)))
    out["combined"] = {"l2": math.sqrt(l2_sq), "h1": math.sqrt(h1_sq),
                       "sup": float(np.max(pointwise)),
                       "tail_sup": float(np.max(pointwise[-n_tail:]))}
    return out


def sup_distance(f: SimField, pattern, x: np.ndarray, time_shift: float = 0.0) -> float:
    ref = pattern.state(f.t + time_shift, x)
    return float(np.max(np.sqrt((f.rho - ref.rho) ** 2 + (f.u - ref.u) ** 2
                                + (f.theta - ref.theta) ** 2)))


# --------------------------------------------------------------------------
# decay of the smoothed rarefaction


@dataclass(frozen=True)
class DecayFit:
    p: float
    order: int
    times: tuple
    norms: tuple
    slope: float
    intercept: float
    r2: float


def lp_norm(f, h: float, p: float) -> float:
    if math.isinf(p):
        return float(np.max(np.abs(f)))
    return float((np.trapezoid(np.abs(f) ** p, dx=h)) ** (1.0 / p))


def derivative_norms(w: RarefactionWave, t: float, ps: Sequence[float], order: int = 1,
                     component: str = "u", h: float = 0.05) -> dict:
    """L^p norms over x >= 0 of a centered-difference x-derivative of the smoothed wave."""
    b = w.burgers
    x_hi = max(b.w_plus, 0.0) * (1.0 + t) + 4.0 * b.q + 40.0
    n = int(math.ceil(x_hi / h))
    x = np.arange(-1, n + 2) * h
    vals = getattr(smoothed_rarefaction_eval(w, t, x), component)
    if order == 1:
        d = (vals[2:] - vals[:-2]) / (2 * h)
    elif order == 2:
        d = (vals[2:] - 2 * vals[1:-1] + vals[:-2]) / (h * h)
    else:
        raise ValidationError("derivative order must be 1 or 2")
    return {p: lp_norm(d, h, p) for p in ps}


def derivative_norm(w: RarefactionWave, t: float, p: float, order: int = 1,
                    component: str = "u", h: float = 0.05) -> float:
    return derivative_norms(w, t, (p,), order, component, h)[p]


def loglog_fit(times, norms) -> tuple[float, float, float]:
    lt, ln = np.log(np.asarray(times, float)), np.log(np.asarray(norms, float))
    A = np.vstack([lt, np.ones_like(lt)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, ln, rcond=None)
    resid = ln - A @ np.array([slope, intercept])
    ss_tot = float(np.sum((ln - ln.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def decay_fits(w: RarefactionWave, times: Sequence[float], ps: Sequence[float],
               order: int = 1, component: str = "u", h: float = 0.05) -> dict:
    """Log-log slope of ``||d^order/dx^order component(t)||_{L^p}`` against ``1 + t``,
    for each ``p`` in ``ps``; the wave is evaluated once per sample time."""
    times = tuple(float(t) for t in times)
    if len(times) < 4:
        raise ValidationError("decay fit needs at least 4 sample times")
    samples = [derivative_norms(w, t, ps, order, component, h) for t in times]
    fits = {}
    for p in ps:
        norms = tuple(s[p] for s in samples)
        if min(norms) <= 0:
            raise ValidationError("derivative norm vanished; zero-strength wave")
        slope, intercept, r2 = loglog_fit([1.0 + t for t in times], norms)
        fits[p] = DecayFit(p, order, times, norms, slope, intercept, r2)
    return fits


def decay_fit(w: RarefactionWave, times: Sequence[float], p: float, order: int = 1,
              component: str = "u", h: float = 0.05) -> DecayFit:
    return decay_fits(w, times, (p,), order, component, h)[p]


def geometric_times(t_lo: float = 10.0, t_hi: float = 1e3, n: int = 8) -> np.ndarray:
    return np.geomspace(t_lo, t_hi, n)


# --------------------------------------------------------------------------
# Lagrangian mass coordinate and cells


def boundary_mass(traj: Trajectory, t: float) -> float:
    """``Y(t) = -u_minus * int_0^t rho(s, 0) ds`` from the per-step boundary trace."""
    if t < traj.boundary_times[0] or t > traj.boundary_times[-1]:
        raise ValidationError(f"t={t} outside the stored time range")
    if traj.u_minus == 0:
        return 0.0
    mask = traj.boundary_times <= t
    ts = traj.boundary_times[mask]
    rs = traj.boundary_rho[mask]
    if ts[-1] < t:
        r_end = np.interp(t, traj.boundary_times, traj.boundary_rho)
        ts, rs = np.append(ts, t), np.append(rs, r_end)
    return -traj.u_minus * trapezoid(rs, ts)


def lagrangian_coordinate(traj: Trajectory, t: float, x) -> tuple[np.ndarray, float]:
    """Mass coordinate ``y`` of points ``x`` at time ``t`` and the boundary ``Y(t)``."""
    snap = traj.at(t)
    Y = boundary_mass(traj, t)
    y_nodes = Y + cumulative_trapezoid(snap.rho, traj.x, initial=0.0)
    return np.interp(x, traj.x, y_nodes), Y


def mass_budget(traj: Trajectory, t: float) -> float:
    """Mass-balance residual ``M(t) - M(0) - int_0^t (rho u)(s,0) - (rho u)(s,L) ds``.

    Zero for the continuous problem; the nonconservative scheme leaves an O(h) defect.
    """
    m0 = trapezoid(traj.snapshots[0].rho, traj.x)
    mt = trapezoid(traj.at(t).rho, traj.x)
    mask = traj.boundary_times <= t
    ts = traj.boundary_times[mask]
    influx = traj.u_minus * traj.boundary_rho[mask] - traj.far_flux[mask]
    return mt - m0 - trapezoid(influx, ts)


@dataclass(frozen=True)
class Cell:
    lo: float
    hi: float
    int_v: float
    int_theta: float
    witness_v: float
    witness_theta: float
    x_width: float
    entropy: Optional[float] = None


def _segment_integral(y, f, a, b):
    inside = (y > a) & (y < b)
    ys = np.concatenate([[a], y[inside], [b]])
    fs = np.concatenate([[np.interp(a, y, f)], f[inside], [np.interp(b, y, f)]])
    return trapezoid(fs, ys), ys, fs


def _witness(ys, fs, mean):
    return float(ys[int(np.argmin(np.abs(fs - mean)))])


def cell_entropy_averages(f: SimField, x: np.ndarray, Y: float, gas: Optional[GasModel] = None,
                          target=None) -> list[Cell]:
    """Per-cell integrals of ``v = 1/rho`` and ``theta`` in the mass coordinate.

    The first cell is ``[Y, floor(Y) + 2]``; the following ones are unit
    intervals ``[i, i+1]`` fully contained in the sampled mass range.  With a
    target pattern the cell's relative entropy ``int Phi(v/v_hat) + Phi(theta/theta_hat) dy``
    is reported as well.
    """
    y = Y + cumulative_trapezoid(f.rho, x, initial=0.0)
    v = 1.0 / f.rho
    ref = target.state(f.t, x) if target is not None else None
    h = float(x[1] - x[0])
    edges = [Y, math.floor(Y) + 2.0]
    while edges[-1] + 1.0 <= y[-1]:
        edges.append(edges[-1] + 1.0)
    if edges[1] > y[-1]:
        return []
    cells = []
    for a, b in zip(edges[:-1], edges[1:]):
        int_v, ys, vs = _segment_integral(y, v, a, b)
        int_th, _, ths = _segment_integral(y, f.theta, a, b)
        x_width = float(np.interp(b, y, x) - np.interp(a, y, x))
        if x_width < 2 * h:
            raise ValidationError(f"degenerate cell [{a}, {b}] spans only {x_width:.3g} in x")
        ent = None
        if ref is not None:
            integrand = phi_entropy(v * ref.rho) + phi_entropy(f.theta / ref.theta)
            ent, _, _ = _segment_integral(y, integrand, a, b)
        width = b - a
        cells.append(Cell(a, b, int_v, int_th, _witness(ys, vs, int_v / width),
                          _witness(ys, ths, int_th / width), x_width, ent))
    return cells


# --------------------------------------------------------------------------
# run-level tracking


@dataclass
class BoundsTracker:
    """Step hook recording density/temperature extrema and boundary traces."""

    target: object = None
    per_snapshot: list = field(default_factory=list)
    rho_min: float = math.inf
    rho_max: float = -math.inf
    theta_min: float = math.inf
    theta_max: float = -math.inf
    snapshot_times: Optional[set] = None

    def __call__(self, step: int, f: SimField) -> None:
        r_lo, r_hi = float(f.rho.min()), float(f.rho.max())
        t_lo, t_hi = float(f.theta.min()), float(f.theta.max())
        self.rho_min = min(self.rho_min, r_lo)
        self.rho_max = max(self.rho_max, r_hi)
        self.theta_min = min(self.theta_min, t_lo)
        self.theta_max = max(self.theta_max, t_hi)
        if self.snapshot_times is not None and f.t in self.snapshot_times:
            entry = {"t": f.t, "rho_min": r_lo, "rho_max": r_hi,
                     "theta_min": t_lo, "theta_max": t_hi, "boundary_rho": float(f.rho[0])}
            if self.target is not None:
                rho_hat = float(self.target.state(f.t, np.array([0.0])).rho[0])
                entry["boundary_phi"] = float(phi_entropy(rho_hat / f.rho[0]))
            self.per_snapshot.append(entry)

    def report(self) -> dict:
        return {"rho_min": self.rho_min, "rho_max": self.rho_max,
                "theta_min": self.theta_min, "theta_max": self.theta_max,
                "per_snapshot": self.per_snapshot}

