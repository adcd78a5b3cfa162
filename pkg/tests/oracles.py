"""Reference implementations used only by the tests.

Each one takes a different route from the package code it checks: a
conservative finite-volume Burgers solver instead of characteristics,
``scipy.special.gammainc`` instead of the series/Poisson sums, quadrature
plus root finding for the rarefaction fan instead of the closed-form
inversion.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import gammainc


def burgers_initial(w_minus, w_plus, q, x):
    x = np.asarray(x, dtype=float)
    return w_minus + (w_plus - w_minus) * gammainc(q + 1, np.maximum(x, 0.0))


def godunov_burgers(w_minus, w_plus, q, x_lo, x_hi, h, t_end, cfl=0.9):
    """First-order Godunov scheme for ``w_t + (w^2/2)_x = 0`` with transmissive ends.

    Returns cell centers and cell averages at ``t_end``.  Cells are
    initialized with the exact cell average of the initial profile.
    """
    edges = np.arange(x_lo, x_hi + 0.5 * h, h)
    xc = 0.5 * (edges[1:] + edges[:-1])

    # cell averages via the antiderivative of P(q+1, x): x P(q+1,x) - (q+1) P(q+2,x)
    def anti(x):
        xp = np.maximum(x, 0.0)
        return w_minus * x + (w_plus - w_minus) * (xp * gammainc(q + 1, xp) - (q + 1) * gammainc(q + 2, xp))

    w = (anti(edges[1:]) - anti(edges[:-1])) / h
    t = 0.0
    while t < t_end:
        dt = min(cfl * h / max(np.max(np.abs(w)), 1e-12), t_end - t)
        wl = np.concatenate([[w[0]], w])
        wr = np.concatenate([w, [w[-1]]])
        # exact Riemann flux for the convex flux w^2/2
        f = np.where(
            wl <= wr,
            np.where(wl > 0, 0.5 * wl**2, np.where(wr < 0, 0.5 * wr**2, 0.0)),
            np.maximum(0.5 * wl**2, 0.5 * wr**2),
        )
        w = w - dt / h * (f[1:] - f[:-1])
        t += dt
    return xc, w


def rarefaction_state(R, gamma, left, right, xi):
    """State inside a 3-rarefaction fan at similarity speed ``xi``.

    Integrates ``du/drho = c(rho)/rho`` along the isentrope by quadrature and
    finds the density with ``u + c = xi`` by root finding.
    """
    rho_l, u_l, th_l = left
    rho_r, u_r, th_r = right
    iso = rho_l ** (1.0 - gamma) * th_l

    def theta(rho):
        return iso * rho ** (gamma - 1.0)

    def c(rho):
        return math.sqrt(R * gamma * theta(rho))

    def u(rho):
        val, _ = quad(lambda z: c(z) / z, rho_l, rho, epsabs=0, epsrel=1e-13)
        return u_l + val

    lam_l = u_l + c(rho_l)
    lam_r = u_r + c(rho_r)
    if xi <= lam_l:
        return rho_l, u_l, th_l
    if xi >= lam_r:
        return rho_r, u_r, th_r
    rho = brentq(lambda r: u(r) + c(r) - xi, rho_l, rho_r, xtol=1e-15, rtol=1e-15)
    return rho, u(rho), theta(rho)


def fd_jacobian(f, y, eps=1e-7):
    y = np.asarray(y, dtype=float)
    f0 = np.asarray(f(y))
    J = np.empty((f0.size, y.size))
    for j in range(y.size):
        dy = np.zeros_like(y)
        dy[j] = eps
        J[:, j] = (np.asarray(f(y + dy)) - np.asarray(f(y - dy))) / (2 * eps)
    return J
