"""PID control with command integration on one-dimensional groups.

Configuration errors on a circle cannot be summed, so the integral term
accumulates the applied control command (a plain real number) instead of
the output error.  This module assembles the closed loops for the second-
and first-order plants, the Lyapunov functions that certify convergence
under a configuration-dependent input bias, and the Gershgorin-based gain
tuning that makes those certificates hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .circle import grad_phi, hess_phi, potential_phi


@dataclass(frozen=True)
class Gains:
    """Controller gains plus the weights of the associated Lyapunov function.

    ``alpha`` is pinned to 1/k_p (the choice that cancels the cross term
    between the position error and the velocity in dV/dt); ``beta`` weighs
    the integrator-mismatch term and is free as long as it is positive.
    """

    k_p: float
    k_i: float
    k_d: float
    beta: float
    alpha: float | None = None

    def __post_init__(self):
        if self.k_p <= 0 or self.k_i <= 0 or self.k_d <= 0:
            raise ValueError("k_p, k_i, k_d must be positive")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.alpha is None:
            object.__setattr__(self, "alpha", 1.0 / self.k_p)
        elif abs(self.alpha * self.k_p - 1.0) > 1e-12:
            raise ValueError("alpha must equal 1/k_p")


@dataclass(frozen=True)
class BiasModel:
    """Configuration-dependent input bias with a bound on its slope.

    ``d_r`` and ``d_c`` bound the row/column sums of the bias gradient; on
    a one-dimensional group they coincide, but both are kept so the tuning
    formulas read the same as in higher dimensions.
    """

    u_b: Callable[[float], float]
    d_r: float
    d_c: float
    grad: Callable[[float], float] | None = None

    def __post_init__(self):
        if self.d_r < 0 or self.d_c < 0:
            raise ValueError("gradient bounds must be nonnegative")

    def grad_at(self, theta: float) -> float:
        """Bias slope at ``theta``; central difference when no analytic form."""
        if self.grad is not None:
            return self.grad(theta)
        h = 1e-6
        return (self.u_b(theta + h) - self.u_b(theta - h)) / (2.0 * h)


ZERO_BIAS = BiasModel(u_b=lambda theta: 0.0, d_r=0.0, d_c=0.0, grad=lambda theta: 0.0)


class SecondOrderState(NamedTuple):
    theta: float
    xi: float
    u_i: float


def pid_control(state: SecondOrderState, gains: Gains, grad: float) -> tuple[float, float]:
    """Control command and integrator rate for the second-order loop.

    Returns ``(u, du_i)`` with ``u = -k_p*grad - k_d*xi + k_i*u_i``; the
    integrator accumulates the other two terms, ``du_i = -k_p*grad - k_d*xi``.
    """
    pd = -gains.k_p * grad - gains.k_d * state.xi
    return pd + gains.k_i * state.u_i, pd


def closed_loop_field_second_order(gains: Gains, b: float, bias: BiasModel,
                                   theta_target: float):
    """Vector field over (theta, xi, u_i) of the PID-controlled plant.

    The plant is dtheta = xi, dxi = b*xi + u + u_b(theta); the proportional
    push is the gradient of the target-shaping potential.
    """

    def field(t: float, x: np.ndarray) -> np.ndarray:
        state = SecondOrderState(float(x[0]), float(x[1]), float(x[2]))
        grad = grad_phi(state.theta, theta_target)
        u, du_i = pid_control(state, gains, grad)
        dxi = b * state.xi + u + bias.u_b(state.theta)
        return np.array([state.xi, dxi, du_i])

    return field


def lyapunov_second_order(state: SecondOrderState, gains: Gains, bias: BiasModel,
                          theta_target: float) -> float:
    """Lyapunov value phi + (alpha/2)*xi^2 + (beta/2)*(k_i*(u_i - xi) + u_b)^2.

    Nonnegative, and zero exactly at the target with zero velocity and the
    integrator cancelling the local bias.
    """
    z = gains.k_i * (state.u_i - state.xi) + bias.u_b(state.theta)
    return (potential_phi(state.theta, theta_target)
            + 0.5 * gains.alpha * state.xi * state.xi
            + 0.5 * gains.beta * z * z)


def dissipation_matrix(gains: Gains, b: float, grad_u_b: float) -> np.ndarray:
    """Symmetric 2x2 matrix M with dV/dt = [z, xi] M [z, xi]^T.

    Here z = k_i*(u_i - xi) + u_b(theta) and grad_u_b is the bias slope at
    the current configuration.  Negative definiteness of M for every
    admissible slope certifies Lyapunov decrease.
    """
    a1 = gains.beta * gains.k_i
    a2 = (gains.k_d - (b + gains.k_i)) / gains.k_p
    off = ((1.0 / (2.0 * gains.k_p) - (b + gains.k_i) * gains.beta * gains.k_i / 2.0)
           + gains.beta / 2.0 * grad_u_b)
    return np.array([[-a1, off], [off, -a2]])


@dataclass(frozen=True)
class GershgorinReport:
    """Outcome of the diagonal-dominance gain check, with margins."""

    passed: bool
    f: float
    margin_k_i: float
    margin_k_d: float


def check_gershgorin_gains(k_i: float, k_d: float, b: float, k_p: float,
                           beta: float, d_r: float, d_c: float) -> GershgorinReport:
    """Sufficient conditions for the dissipation matrix to be negative definite.

    Requires ``k_i > f + d_r/2`` and ``k_d > b + k_i + k_p*f + beta*k_p*d_c/2``
    with ``f = |1/(2*k_p*beta) - (b + k_i)*k_i/2|``, both strict and
    evaluated with zero tolerance.  These bounds are sufficient only;
    callers wanting robustness enforce extra margin themselves.
    """
    if k_i <= 0 or k_d <= 0 or k_p <= 0 or beta <= 0:
        raise ValueError("gains and beta must be positive")
    f = abs(1.0 / (2.0 * k_p * beta) - (b + k_i) * k_i / 2.0)
    margin_k_i = k_i - (f + d_r / 2.0)
    margin_k_d = k_d - (b + k_i + k_p * f + beta * k_p * d_c / 2.0)
    return GershgorinReport(passed=margin_k_i > 0.0 and margin_k_d > 0.0,
                            f=f, margin_k_i=margin_k_i, margin_k_d=margin_k_d)


def tune_gains_gershgorin(b: float, k_p: float, d_r: float, d_c: float,
                          margin: float) -> tuple[float, float, float]:
    """Pick (k_i, k_d, beta) passing :func:`check_gershgorin_gains`.

    ``beta = 1/(k_p*(b + k_i)*k_i)`` makes f vanish, after which the k_i
    condition needs only k_i > d_r/2 and the k_d condition is met by
    scaling.  ``margin`` multiplies both baseline gains; 1.0 lands exactly
    on the classical choice, anything larger adds slack.
    """
    if k_p <= 0:
        raise ValueError("k_p must be positive")
    if d_r < 0 or d_c < 0:
        raise ValueError("gradient bounds must be nonnegative")
    if margin < 1.0:
        raise ValueError("margin must be at least 1")
    base = max(d_r, -b, 0.0)
    if base == 0.0:
        # bias-free, open-loop-stable plant: any positive integral gain works
        base = 1.0
    k_i = margin * base
    beta = 1.0 / (k_p * (b + k_i) * k_i)
    k_d = margin * (b + k_i + beta * k_p * d_c / 2.0)
    return k_i, k_d, beta


def closed_loop_field_first_order(k_p: float, k_i: float, bias: BiasModel,
                                  theta_target: float):
    """Vector field over (theta, u_i) of the first-order integral loop.

    dtheta = -k_p*grad(phi) + u_b(theta) + k_i*u_i, and the integrator
    accumulates the proportional command: du_i = -k_p*grad(phi).
    """

    def field(t: float, x: np.ndarray) -> np.ndarray:
        theta, u_i = float(x[0]), float(x[1])
        grad = grad_phi(theta, theta_target)
        return np.array([-k_p * grad + bias.u_b(theta) + k_i * u_i, -k_p * grad])

    return field


def lyapunov_first_order(theta: float, u_i: float, k_p: float, k_i: float,
                         bias: BiasModel, theta_target: float) -> float:
    """Lyapunov value k_i*k_p*phi + 0.5*(-k_p*grad(phi) + u_b + k_i*u_i)^2.

    The second term is half the squared configuration velocity; with this
    weighting dV/dt = -(k_p*hess(phi) - grad(u_b)) * dtheta^2, so decrease
    is exactly the gradient-dominance condition checked by
    :func:`check_first_order_certificate`.
    """
    drift = -k_p * grad_phi(theta, theta_target) + bias.u_b(theta)
    rate = drift + k_i * u_i
    return k_i * k_p * potential_phi(theta, theta_target) + 0.5 * rate * rate


@dataclass(frozen=True)
class FirstOrderCertificate:
    """Grid-sampled premises for first-order convergence on a region.

    ``potential_ok``/``hessian_ok`` cover the shape of the region R
    (potential strictly below its boundary value inside, and
    k_p*hess(phi) - grad(u_b) positive there); ``trapping_ok`` is the
    integral-gain condition confining starts in S below the boundary
    level.  ``passed`` requires all three.
    """

    potential_ok: bool
    hessian_ok: bool
    trapping_ok: bool
    hessian_margin: float
    potential_margin: float
    trapping_margin: float
    phi_boundary: float
    n_samples: int

    @property
    def passed(self) -> bool:
        return self.potential_ok and self.hessian_ok and self.trapping_ok


def check_first_order_certificate(k_p: float, k_i: float, bias: BiasModel,
                                  theta_target: float,
                                  region: tuple[float, float],
                                  subset: tuple[float, float],
                                  n_samples: int = 201) -> FirstOrderCertificate:
    """Sample the first-order convergence premises on a uniform grid.

    ``region`` is the compact interval R (interior sampled for the strict
    interior conditions), ``subset`` the closed start set S (endpoints
    included, so a start on the boundary of R is correctly rejected).
    """
    r_lo, r_hi = region
    s_lo, s_hi = subset
    if not (r_hi > r_lo):
        raise ValueError("region must be a nonempty interval")
    if s_lo < r_lo - 1e-12 or s_hi > r_hi + 1e-12 or s_hi < s_lo:
        raise ValueError("subset must be a nonempty sub-interval of region")
    if not (s_lo - 1e-12 <= theta_target <= s_hi + 1e-12):
        raise ValueError("theta_target must lie in the subset")
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")

    phi_boundary = min(potential_phi(r_lo, theta_target),
                       potential_phi(r_hi, theta_target))

    interior = np.linspace(r_lo, r_hi, n_samples + 2)[1:-1]
    hessian_margin = math.inf
    potential_margin = math.inf
    for theta in interior:
        theta = float(theta)
        hessian_margin = min(
            hessian_margin,
            k_p * hess_phi(theta, theta_target) - bias.grad_at(theta))
        potential_margin = min(
            potential_margin, phi_boundary - potential_phi(theta, theta_target))

    lhs_max = -math.inf
    for theta in np.linspace(s_lo, s_hi, n_samples):
        theta = float(theta)
        drift = -k_p * grad_phi(theta, theta_target) + bias.u_b(theta)
        lhs_max = max(lhs_max,
                      k_i * k_p * potential_phi(theta, theta_target)
                      + 0.5 * drift * drift)
    trapping_margin = k_i * k_p * phi_boundary - lhs_max

    return FirstOrderCertificate(
        potential_ok=potential_margin > 0.0,
        hessian_ok=hessian_margin > 0.0,
        trapping_ok=trapping_margin > 0.0,
        hessian_margin=hessian_margin,
        potential_margin=potential_margin,
        trapping_margin=trapping_margin,
        phi_boundary=phi_boundary,
        n_samples=n_samples)
