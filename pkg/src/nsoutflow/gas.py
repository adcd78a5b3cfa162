"""Ideal polytropic gas model and pointwise fluid states.

All thermodynamic helpers accept either a :class:`FluidState` or any object
exposing ``rho``, ``u``, ``theta`` attributes (e.g. :class:`Profile`), so the
same formulas work on scalars and on numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class GasModel:
    """Constants of an ideal polytropic gas in normalized units."""

    R: float = 1.0
    gamma: float = 1.4
    mu: float = 1.0
    kappa: float = 1.0

    def __post_init__(self):
        for name in ("R", "mu", "kappa"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be positive, got {value!r}")
        if not (np.isfinite(self.gamma) and self.gamma > 1):
            raise ValidationError(f"gamma must exceed 1, got {self.gamma!r}")

    @property
    def cv(self) -> float:
        return self.R / (self.gamma - 1.0)

    def sound_speed(self, theta):
        return np.sqrt(self.R * self.gamma * theta)


@dataclass(frozen=True)
class FluidState:
    """A single (rho, u, theta) triple with positive density and temperature."""

    rho: float
    u: float
    theta: float

    def __post_init__(self):
        if not (np.isfinite(self.rho) and self.rho > 0):
            raise ValidationError(f"density must be positive, got {self.rho!r}")
        if not (np.isfinite(self.theta) and self.theta > 0):
            raise ValidationError(f"temperature must be positive, got {self.theta!r}")
        if not np.isfinite(self.u):
            raise ValidationError(f"velocity must be finite, got {self.u!r}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.rho, self.u, self.theta)


class Profile(NamedTuple):
    """Array-valued (rho, u, theta) sampled on a set of points."""

    rho: np.ndarray
    u: np.ndarray
    theta: np.ndarray


@dataclass(frozen=True)
class EndStates:
    """Boundary data at x=0, optional middle state and far-field state."""

    u_minus: float
    theta_minus: float
    right: FluidState
    middle: Optional[FluidState] = None

    def __post_init__(self):
        if not (np.isfinite(self.theta_minus) and self.theta_minus > 0):
            raise ValidationError(f"theta_minus must be positive, got {self.theta_minus!r}")


def pressure(gas: GasModel, s):
    return gas.R * s.rho * s.theta


def internal_energy(gas: GasModel, s):
    return gas.cv * s.theta


def entropy(gas: GasModel, s):
    """Specific entropy ``cv * ln(rho**(1-gamma) * theta)``."""
    return gas.cv * ((1.0 - gas.gamma) * np.log(s.rho) + np.log(s.theta))


def lambda3(gas: GasModel, s):
    """Third characteristic speed ``u + sqrt(R gamma theta)``."""
    return s.u + gas.sound_speed(s.theta)


def mach_at_infinity(gas: GasModel, s):
    return np.abs(s.u) / gas.sound_speed(s.theta)


def specific_total_energy(gas: GasModel, s):
    return gas.cv * s.theta + 0.5 * s.u * s.u
