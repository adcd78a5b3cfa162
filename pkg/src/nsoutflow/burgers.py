"""Smooth solution of the inviscid Burgers equation by characteristics.

The initial profile is

    w0(x) = w_minus + (w_plus - w_minus) * P(q + 1, max(x, 0))

with ``P`` the regularized lower incomplete gamma function, so that ``w0``
rises smoothly from ``w_minus`` to ``w_plus`` over a window of width ~q.
Because ``w0`` is non-decreasing, characteristics never cross and the
solution at ``(t, x)`` is ``w0(x0)`` where ``x = x0 + t * w0(x0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import RootBracketError, ValidationError

BISECTION_WIDTH = 1e-8
NEWTON_STEPS = 3


@dataclass(frozen=True)
class BurgersProfile:
    w_minus: float
    w_plus: float
    q: int = 16

    def __post_init__(self):
        if not (np.isfinite(self.w_minus) and np.isfinite(self.w_plus)):
            raise ValidationError("Burgers end values must be finite")
        if self.w_minus > self.w_plus:
            raise ValidationError(
                f"need w_minus <= w_plus, got {self.w_minus} > {self.w_plus}"
            )
        if isinstance(self.q, bool) or int(self.q) != self.q or self.q < 16:
            raise ValidationError(f"q must be an integer >= 16, got {self.q!r}")
        object.__setattr__(self, "q", int(self.q))

    @property
    def strength(self) -> float:
        return self.w_plus - self.w_minus


class BurgersValue(NamedTuple):
    w: np.ndarray
    w_x: np.ndarray
    w_xx: np.ndarray
    foot: np.ndarray


def log_normalization_constant(q: int) -> float:
    return -math.lgamma(q + 1)


def normalization_constant(q: int) -> float:
    """``k_q`` with ``k_q * int_0^inf z^q e^{-z} dz = 1``, i.e. ``1/q!``."""
    if int(q) != q or q < 0:
        raise ValidationError(f"q must be a non-negative integer, got {q!r}")
    q = int(q)
    # exact integer factorial, correctly rounded; log space once it would underflow
    if q <= 170:
        return 1.0 / math.factorial(q)
    return math.exp(log_normalization_constant(q))


def regularized_lower_gamma(a: int, x):
    """``P(a, x)`` for integer ``a >= 1`` and ``x >= 0`` (vectorized).

    Uses the power series below ``x = a`` (no cancellation for small x) and the
    finite Poisson sum ``1 - e^{-x} sum_{k<a} x^k/k!`` above it.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    series = pos & (x < a)
    tail = pos & ~series

    if np.any(series):
        xs = x[series]
        lead = np.exp(a * np.log(xs) - xs - math.lgamma(a + 1))
        term = np.ones_like(xs)
        total = np.ones_like(xs)
        n = 1
        while True:
            term = term * xs / (a + n)
            total += term
            if np.all(term <= 1e-17 * total):
                break
            n += 1
        out[series] = lead * total

    if np.any(tail):
        xt = x[tail]
        logx = np.log(xt)
        q_sum = np.zeros_like(xt)
        for k in range(a):
            q_sum += np.exp(k * logx - xt - math.lgamma(k + 1))
        out[tail] = 1.0 - q_sum
    return out


def _profile_derivative(p: BurgersProfile, x0):
    """First and second x-derivatives of the initial profile."""
    x0 = np.asarray(x0, dtype=float)
    d1 = np.zeros_like(x0)
    d2 = np.zeros_like(x0)
    pos = x0 > 0
    if np.any(pos):
        xp = x0[pos]
        density = np.exp(p.q * np.log(xp) - xp + log_normalization_constant(p.q))
        d1[pos] = p.strength * density
        d2[pos] = p.strength * density * (p.q / xp - 1.0)
    return d1, d2


def initial_profile(p: BurgersProfile, x):
    x = np.asarray(x, dtype=float)
    return p.w_minus + p.strength * regularized_lower_gamma(p.q + 1, np.maximum(x, 0.0))


def exact_solution(p: BurgersProfile, t: float, x) -> BurgersValue:
    """Evaluate ``w, w_x, w_xx`` at time ``t`` for points ``x``.

    The foot point is bracketed in ``[x - t w_plus, x - t w_minus]``, narrowed
    by bisection and polished by Newton steps on ``x0 + t w0(x0) - x``.
    """
    if t < 0:
        raise ValidationError(f"time must be non-negative, got {t}")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)

    if t == 0 or p.strength == 0:
        x0 = x - t * p.w_minus
    else:
        lo = x - t * p.w_plus
        hi = x - t * p.w_minus
        f_lo = lo + t * initial_profile(p, lo) - x
        f_hi = hi + t * initial_profile(p, hi) - x
        tol = 1e-12 * np.maximum(1.0, np.abs(x))
        if np.any(f_lo > tol) or np.any(f_hi < -tol):
            raise RootBracketError("characteristic foot point not bracketed")
        span = t * p.strength
        n_iter = math.ceil(math.log2(span / BISECTION_WIDTH)) if span > BISECTION_WIDTH else 0
        for _ in range(n_iter):
            mid = 0.5 * (lo + hi)
            f_mid = mid + t * initial_profile(p, mid) - x
            right = f_mid > 0
            hi = np.where(right, mid, hi)
            lo = np.where(right, lo, mid)
        lo0 = x - t * p.w_plus
        hi0 = x - t * p.w_minus
        x0 = 0.5 * (lo + hi)
        for _ in range(NEWTON_STEPS):
            d1, _ = _profile_derivative(p, x0)
            resid = x0 + t * initial_profile(p, x0) - x
            x0 = np.clip(x0 - resid / (1.0 + t * d1), lo0, hi0)

    w = initial_profile(p, x0)
    d1, d2 = _profile_derivative(p, x0)
    stretch = 1.0 + t * d1
    w_x = d1 / stretch
    w_xx = d2 / stretch**3
    if scalar:
        return BurgersValue(w[0], w_x[0], w_xx[0], x0[0])
    return BurgersValue(w, w_x, w_xx, x0)


def characteristic_residual(p: BurgersProfile, t: float, x, foot):
    return np.abs(np.asarray(x) - foot - t * initial_profile(p, foot))


def riemann_solution(w_minus: float, w_plus: float, t: float, x):
    """Centered rarefaction fan of the Burgers Riemann problem."""
    if t <= 0:
        raise ValidationError(f"Riemann fan needs t > 0, got {t}")
    if w_minus > w_plus:
        raise ValidationError("Riemann fan needs w_minus <= w_plus")
    x = np.asarray(x, dtype=float)
    return np.where(x <= w_minus * t, w_minus, np.where(x >= w_plus * t, w_plus, x / t))
