"""Planar steering-controlled vehicle tracking a circular reference motion.

The vehicle turns at a commanded rate and translates with a body-fixed
velocity it cannot change.  Tracking is judged through the center of the
circle the vehicle would trace at the reference turning rate: the
proportional steering law contracts that center toward the reference
center, which makes the scheme insensitive to speed error but leaves a
residual turning-rate offset under direction misalignment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import kernels
from .circle import wrap_angle
from .ode import IntegrationError, Trajectory, n_steps_for

E1 = np.array([1.0, 0.0])

STATE_NAMES = ("heading", "p_x", "p_y")


def rot2(angle: float) -> np.ndarray:
    """2x2 planar rotation matrix."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


# Quarter-turn used to point from the vehicle toward its turning center.
Q_QUARTER = rot2(math.pi / 2)


@dataclass
class Pose:
    """Planar pose: canonical heading plus position in the world frame."""

    heading: float
    p: np.ndarray

    def __post_init__(self):
        self.heading = wrap_angle(float(self.heading))
        self.p = np.asarray(self.p, dtype=float)
        if self.p.shape != (2,) or not np.all(np.isfinite(self.p)):
            raise ValueError("position must be a finite 2-vector")

    @property
    def rotation(self) -> np.ndarray:
        return rot2(self.heading)


@dataclass(frozen=True)
class BodyVelocity:
    """Body-frame translation velocity, fixed in direction and magnitude."""

    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))
        if self.v.shape != (2,):
            raise ValueError("velocity must be a 2-vector")
        if self.speed <= 0:
            raise ValueError("speed must be positive")

    @property
    def speed(self) -> float:
        return float(math.hypot(self.v[0], self.v[1]))

    @property
    def misalignment(self) -> float:
        """Angle between the actual velocity and the assumed forward axis."""
        return float(math.atan2(self.v[1], self.v[0]))


@dataclass(frozen=True)
class Reference:
    """Circular reference motion: constant turning rate about a fixed center.

    The center is the primary datum; the reference position is derived
    from it so that the center is constant by construction.
    """

    omega_0: float
    center: np.ndarray = dataclass_field(default_factory=lambda: np.zeros(2))
    phase0: float = 0.0

    def __post_init__(self):
        if self.omega_0 <= 0:
            raise ValueError("omega_0 must be positive")
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if self.center.shape != (2,):
            raise ValueError("center must be a 2-vector")
        object.__setattr__(self, "phase0", wrap_angle(float(self.phase0)))


def vehicle_field(pose: Pose, omega_cmd: float, v: BodyVelocity) -> np.ndarray:
    """Time derivative (dheading, dp_x, dp_y) of the steering plant."""
    dp = pose.rotation @ v.v
    return np.array([omega_cmd, dp[0], dp[1]])


def reference_pose(t: float, ref: Reference) -> Pose:
    """Reference pose at time ``t``: unit forward speed on the circle."""
    heading = ref.phase0 + ref.omega_0 * t
    p = ref.center - (Q_QUARTER @ rot2(heading) @ E1) / ref.omega_0
    return Pose(heading=heading, p=p)


def omega_p(pose: Pose, ref_pose: Pose, k_p: float, omega_0: float) -> float:
    """Proportional steering correction from relative pose measurements.

    Uses only the reference position/orientation expressed in the vehicle
    body frame; in heading form this is
    ``k_p*(omega_0*e1.(R(-heading)(p - p_r)) + sin(heading_r - heading))``.
    """
    if k_p <= 0:
        raise ValueError("k_p must be positive")
    dp = pose.p - ref_pose.p
    c, s = math.cos(pose.heading), math.sin(pose.heading)
    along = c * dp[0] + s * dp[1]
    return k_p * (omega_0 * along + math.sin(ref_pose.heading - pose.heading))


def omega_p_center_form(pose: Pose, v: BodyVelocity, center_ref: np.ndarray,
                        k_p: float, omega_0: float) -> float:
    """Steering correction rewritten through the turning-center offset.

    Identical to :func:`omega_p` for any body velocity ``v`` used
    consistently here and in the center: the relative-pose terms regroup
    into ``k_p*omega_0*e1.(R(-heading)(c - c_r)) - k_p*e1.(Q_quarter v)``.
    """
    c = circle_center(pose, v, omega_0)
    d = c - np.asarray(center_ref, dtype=float)
    ch, sh = math.cos(pose.heading), math.sin(pose.heading)
    along = ch * d[0] + sh * d[1]
    return k_p * omega_0 * along - k_p * float(Q_QUARTER[0] @ v.v)


def circle_center(pose: Pose, v: BodyVelocity, omega_assumed: float) -> np.ndarray:
    """Center of the circle traced when turning at ``omega_assumed``."""
    if omega_assumed == 0:
        raise ValueError("omega_assumed must be nonzero")
    return pose.p + (Q_QUARTER @ (pose.rotation @ v.v)) / omega_assumed


def lyapunov_center(c: np.ndarray, c_r: np.ndarray) -> float:
    """Half squared distance between turning center and reference center."""
    d = np.asarray(c, dtype=float) - np.asarray(c_r, dtype=float)
    return 0.5 * float(d @ d)


def residual_omega_roots(omega_0: float, k_p: float, speed: float,
                         phi_mis: float) -> tuple[float, float]:
    """Both fixed-point roots of the residual steering offset.

    Solves ``w*(omega_0 + w) = omega_0*k_p*speed*sin(phi_mis)``.  Raises
    when the discriminant is negative (no steady turning rate exists for
    that misalignment) rather than clamping.
    """
    disc = omega_0 * omega_0 / 4.0 + omega_0 * k_p * speed * math.sin(phi_mis)
    if disc < 0:
        raise ValueError(f"negative discriminant {disc}: no real residual rate")
    root = math.sqrt(disc)
    return -omega_0 / 2.0 + root, -omega_0 / 2.0 - root


def predicted_residual_omega(omega_0: float, k_p: float, speed: float,
                             phi_mis: float) -> float:
    """Asymptotic steering offset under misalignment (the root that is
    observed in simulation; zero when the misalignment vanishes)."""
    return residual_omega_roots(omega_0, k_p, speed, phi_mis)[0]


def _check_states_finite(states: np.ndarray, h: float) -> None:
    if not np.all(np.isfinite(states)):
        bad = int(np.flatnonzero(~np.isfinite(states).all(axis=1))[0])
        raise IntegrationError(f"non-finite state at step {bad} (t={bad * h})",
                               t=bad * h, step=bad)


def _center_series(states: np.ndarray, v: BodyVelocity, omega: float) -> np.ndarray:
    th = states[:, 0]
    v1, v2 = float(v.v[0]), float(v.v[1])
    cx = states[:, 1] + (-np.sin(th) * v1 - np.cos(th) * v2) / omega
    cy = states[:, 2] + (np.cos(th) * v1 - np.sin(th) * v2) / omega
    return np.column_stack([cx, cy])


def _omega_p_series(times: np.ndarray, states: np.ndarray, ref: Reference,
                    k_p: float) -> np.ndarray:
    th = states[:, 0]
    th_r = ref.phase0 + ref.omega_0 * times
    prx = ref.center[0] + np.sin(th_r) / ref.omega_0
    pry = ref.center[1] - np.cos(th_r) / ref.omega_0
    along = np.cos(th) * (states[:, 1] - prx) + np.sin(th) * (states[:, 2] - pry)
    return k_p * (ref.omega_0 * along + np.sin(th_r - th))


def simulate_nominal(v: BodyVelocity, ref: Reference, k_p: float, init: Pose,
                     t_end: float = 200.0, h: float = 1e-3) -> Trajectory:
    """Closed loop omega = omega_0 + omega_p under the steering plant.

    Monitors: V_center, omega_P, dist_c (distance of the true turning
    center from the reference center) and, when the residual-rate
    prediction exists, dist_chat (same distance but for the center
    computed at the predicted final turning rate).
    """
    if k_p <= 0:
        raise ValueError("k_p must be positive")
    n = n_steps_for(0.0, t_end, h)
    try:
        states = kernels.vehicle_nominal_loop(
            init.heading, float(init.p[0]), float(init.p[1]),
            float(v.v[0]), float(v.v[1]), ref.omega_0, k_p,
            float(ref.center[0]), float(ref.center[1]), ref.phase0,
            0.0, h, n)
    except (ValueError, OverflowError) as err:
        raise IntegrationError(f"integration blew up: {err}") from err
    _check_states_finite(states, h)
    times = h * np.arange(n + 1)

    centers = _center_series(states, v, ref.omega_0)
    dist_c = np.hypot(centers[:, 0] - ref.center[0], centers[:, 1] - ref.center[1])
    monitors = {
        "V_center": 0.5 * dist_c * dist_c,
        "omega_P": _omega_p_series(times, states, ref, k_p),
        "dist_c": dist_c,
    }
    try:
        residual = predicted_residual_omega(ref.omega_0, k_p, v.speed, v.misalignment)
    except ValueError:
        residual = None  # no steady rate predicted; skip the hat-center monitor
    if residual is not None:
        hat_centers = _center_series(states, v, ref.omega_0 + residual)
        monitors["dist_chat"] = np.hypot(hat_centers[:, 0] - ref.center[0],
                                         hat_centers[:, 1] - ref.center[1])
    return Trajectory(times=times, states=states, monitors=monitors,
                      state_names=STATE_NAMES)
