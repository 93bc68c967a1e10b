"""Adapted integral action for the steering-controlled vehicle.

Direction misalignment acts like a bias folded into the measured steering
command, so the integrator here has two twists: its sign is reversed (it
damps rather than reinforces the applied correction) and it integrates
every input command including itself.  Whenever the integrator settles,
the commanded rate equals the reference rate by construction.

The closed loop reduces, in a frame rotating with the vehicle, to a
three-state system whose equilibrium and cubic characteristic polynomial
are known in closed form; Routh-Hurwitz conditions on that cubic give the
local stability certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .ode import IntegrationError, Trajectory, n_steps_for
from .vehicle import (BodyVelocity, Pose, Reference, _center_series,
                      _check_states_finite, _omega_p_series, omega_p)

STATE_NAMES = ("heading", "p_x", "p_y", "omega_I")
ROTATING_STATE_NAMES = ("x_1", "x_2", "omega_I")


def omega_with_integral(pose: Pose, ref_pose: Pose, omega_i: float,
                        k_p: float, k_i: float, omega_0: float) -> tuple[float, float]:
    """Commanded rate and integrator rate of the adapted integral law.

    ``omega_cmd = omega_0 + omega_p - k_i*omega_i`` and the integrator
    absorbs the whole correction: ``d_omega_i = omega_p - k_i*omega_i``.
    The two share the correction term, so a settled integrator means the
    commanded rate is exactly ``omega_0``.
    """
    if k_p <= 0 or k_i <= 0:
        raise ValueError("k_p and k_i must be positive")
    correction = omega_p(pose, ref_pose, k_p, omega_0) - k_i * omega_i
    return omega_0 + correction, correction


def equilibrium_integrator_state(v: BodyVelocity, k_p: float, k_i: float) -> float:
    """Integrator value at the target equilibrium: (k_p/k_i)*speed*sin(phi)."""
    return k_p * float(v.v[1]) / k_i


def rotating_frame_field(s: np.ndarray, v: BodyVelocity, omega_0: float,
                         k_p: float, k_i: float) -> np.ndarray:
    """Autonomous field over (x_1, x_2, omega_I) in the body-rotating frame.

    ``x`` is the turning-center offset expressed in the body frame (the
    reference center sits at the origin).  The equilibrium is x = 0 with
    the integrator at :func:`equilibrium_integrator_state`.
    """
    if omega_0 <= 0:
        raise ValueError("omega_0 must be positive")
    x1, x2, wi = float(s[0]), float(s[1]), float(s[2])
    v1, v2 = float(v.v[0]), float(v.v[1])
    bracket = k_p * omega_0 * x1 + k_p * v2 - k_i * wi
    omega = omega_0 + bracket
    return np.array([
        -(v1 / omega_0) * bracket + omega * x2,
        -(v2 / omega_0) * bracket - omega * x1,
        bracket,
    ])


def char_poly_coeffs(omega_0: float, k_p: float, k_i: float, speed: float,
                     phi_mis: float) -> tuple[float, float, float]:
    """Coefficients (a2, a1, a0) of the linearization's characteristic cubic.

    lambda^3 + (k_i + speed*k_p*cos(phi))*lambda^2
             + (omega_0^2 + omega_0*speed*k_p*sin(phi))*lambda
             + k_i*omega_0^2.
    """
    a2 = k_i + speed * k_p * math.cos(phi_mis)
    a1 = omega_0 * omega_0 + omega_0 * speed * k_p * math.sin(phi_mis)
    a0 = k_i * omega_0 * omega_0
    return a2, a1, a0


@dataclass(frozen=True)
class RouthReport:
    """Stability verdicts for the rotating-frame linearization.

    ``sufficient_ok`` are the small-gain bounds (conservative, meaningful
    for misalignment strictly inside a quarter turn); ``exact_ok`` is the
    full Routh-Hurwitz test on the cubic.  The sufficient bounds imply the
    exact ones.
    """

    sufficient_ok: bool
    exact_ok: bool
    margin_rate: float
    margin_damping: float
    a2: float
    a1: float
    a0: float

    @property
    def routh_margin(self) -> float:
        return self.a2 * self.a1 - self.a0


def routh_hurwitz_stable(omega_0: float, k_p: float, k_i: float, speed: float,
                         phi_mis: float) -> RouthReport:
    """Evaluate both the small-gain bounds and the exact Routh-Hurwitz test.

    Sufficient: omega_0 > k_p*speed*|sin(phi)| and
    omega_0*cos(phi) > k_i*|sin(phi)| + speed*k_p*|sin(phi)*cos(phi)|.
    Exact: a2 > 0, a0 > 0 and a2*a1 > a0.
    """
    sin_phi = math.sin(phi_mis)
    cos_phi = math.cos(phi_mis)
    margin_rate = omega_0 - k_p * speed * abs(sin_phi)
    margin_damping = (omega_0 * cos_phi - k_i * abs(sin_phi)
                      - speed * k_p * abs(sin_phi * cos_phi))
    a2, a1, a0 = char_poly_coeffs(omega_0, k_p, k_i, speed, phi_mis)
    exact_ok = a2 > 0.0 and a0 > 0.0 and a2 * a1 > a0
    return RouthReport(sufficient_ok=margin_rate > 0.0 and margin_damping > 0.0,
                       exact_ok=exact_ok,
                       margin_rate=margin_rate, margin_damping=margin_damping,
                       a2=a2, a1=a1, a0=a0)


def simulate_integral(v: BodyVelocity, ref: Reference, k_p: float, k_i: float,
                      init: Pose, omega_i0: float = 0.0,
                      t_end: float = 200.0, h: float = 1e-3) -> Trajectory:
    """Closed loop under the adapted integral law.

    Monitors: dist_c, omega_cmd, omega_I, omega_P.
    """
    if k_p <= 0 or k_i <= 0:
        raise ValueError("k_p and k_i must be positive")
    n = n_steps_for(0.0, t_end, h)
    try:
        states = kernels.vehicle_integral_loop(
            init.heading, float(init.p[0]), float(init.p[1]), omega_i0,
            float(v.v[0]), float(v.v[1]), ref.omega_0, k_p, k_i,
            float(ref.center[0]), float(ref.center[1]), ref.phase0,
            0.0, h, n)
    except (ValueError, OverflowError) as err:
        raise IntegrationError(f"integration blew up: {err}") from err
    _check_states_finite(states, h)
    times = h * np.arange(n + 1)

    centers = _center_series(states, v, ref.omega_0)
    dist_c = np.hypot(centers[:, 0] - ref.center[0], centers[:, 1] - ref.center[1])
    wp = _omega_p_series(times, states, ref, k_p)
    monitors = {
        "dist_c": dist_c,
        "omega_cmd": ref.omega_0 + wp - k_i * states[:, 3],
        "omega_I": states[:, 3].copy(),
        "omega_P": wp,
    }
    return Trajectory(times=times, states=states, monitors=monitors,
                      state_names=STATE_NAMES)


def simulate_rotating_frame(x0: np.ndarray, omega_i0: float, v: BodyVelocity,
                            omega_0: float, k_p: float, k_i: float,
                            t_end: float = 200.0, h: float = 1e-3) -> Trajectory:
    """Integrate the rotating-frame reduction (reference center at origin)."""
    if omega_0 <= 0:
        raise ValueError("omega_0 must be positive")
    x0 = np.asarray(x0, dtype=float)
    n = n_steps_for(0.0, t_end, h)
    try:
        states = kernels.rotating_frame_loop(
            float(x0[0]), float(x0[1]), omega_i0,
            float(v.v[0]), float(v.v[1]), omega_0, k_p, k_i, h, n)
    except (ValueError, OverflowError) as err:
        raise IntegrationError(f"integration blew up: {err}") from err
    _check_states_finite(states, h)
    times = h * np.arange(n + 1)
    monitors = {"dist_x": np.hypot(states[:, 0], states[:, 1])}
    return Trajectory(times=times, states=states, monitors=monitors,
                      state_names=ROTATING_STATE_NAMES)
