"""Pure-Python fixed-step RK4 loops for the bundled closed-loop plants.

Fallback twin of the compiled module ``liepid._speedups``; the arithmetic
here mirrors the compiled kernels operation for operation so the two
backends produce matching trajectories.
"""

from math import cos, sin

import numpy as np


def pendulum_loop(theta, omega, u_i, w, b, k_p, k_i, k_d, theta_target, h, n_steps):
    """Integrate the PID pendulum loop; returns an (n_steps+1, 3) array."""
    out = np.empty((n_steps + 1, 3))
    th = theta
    om = omega
    ui = u_i
    out[0, 0] = th
    out[0, 1] = om
    out[0, 2] = ui

    def rhs(a, o, i):
        g = 0.5 * sin(a - theta_target)
        pd = -k_p * g - k_d * o
        return o, b * o + (pd + k_i * i) + (-w * sin(a)), pd

    for k in range(n_steps):
        k1t, k1o, k1u = rhs(th, om, ui)
        k2t, k2o, k2u = rhs(th + 0.5 * h * k1t, om + 0.5 * h * k1o, ui + 0.5 * h * k1u)
        k3t, k3o, k3u = rhs(th + 0.5 * h * k2t, om + 0.5 * h * k2o, ui + 0.5 * h * k2u)
        k4t, k4o, k4u = rhs(th + h * k3t, om + h * k3o, ui + h * k3u)
        th = th + (h / 6.0) * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
        om = om + (h / 6.0) * (k1o + 2.0 * k2o + 2.0 * k3o + k4o)
        ui = ui + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        out[k + 1, 0] = th
        out[k + 1, 1] = om
        out[k + 1, 2] = ui
    return out


def vehicle_nominal_loop(heading, px, py, v1, v2, omega_0, k_p,
                         crx, cry, phase0, t0, h, n_steps):
    """Integrate the proportional steering loop; returns (n_steps+1, 3)."""
    out = np.empty((n_steps + 1, 3))
    th = heading
    x = px
    y = py
    out[0, 0] = th
    out[0, 1] = x
    out[0, 2] = y

    def rhs(a, qx, qy, t):
        th_r = phase0 + omega_0 * t
        prx = crx + sin(th_r) / omega_0
        pry = cry - cos(th_r) / omega_0
        c = cos(a)
        s = sin(a)
        wp = k_p * (omega_0 * (c * (qx - prx) + s * (qy - pry)) + sin(th_r - a))
        return omega_0 + wp, c * v1 - s * v2, s * v1 + c * v2

    for k in range(n_steps):
        t = t0 + k * h
        k1t, k1x, k1y = rhs(th, x, y, t)
        k2t, k2x, k2y = rhs(th + 0.5 * h * k1t, x + 0.5 * h * k1x, y + 0.5 * h * k1y, t + 0.5 * h)
        k3t, k3x, k3y = rhs(th + 0.5 * h * k2t, x + 0.5 * h * k2x, y + 0.5 * h * k2y, t + 0.5 * h)
        k4t, k4x, k4y = rhs(th + h * k3t, x + h * k3x, y + h * k3y, t + h)
        th = th + (h / 6.0) * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
        x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        out[k + 1, 0] = th
        out[k + 1, 1] = x
        out[k + 1, 2] = y
    return out


def vehicle_integral_loop(heading, px, py, omega_i, v1, v2, omega_0, k_p, k_i,
                          crx, cry, phase0, t0, h, n_steps):
    """Integrate the steering loop with command integration; (n_steps+1, 4)."""
    out = np.empty((n_steps + 1, 4))
    th = heading
    x = px
    y = py
    wi = omega_i
    out[0, 0] = th
    out[0, 1] = x
    out[0, 2] = y
    out[0, 3] = wi

    def rhs(a, qx, qy, z, t):
        th_r = phase0 + omega_0 * t
        prx = crx + sin(th_r) / omega_0
        pry = cry - cos(th_r) / omega_0
        c = cos(a)
        s = sin(a)
        wp = k_p * (omega_0 * (c * (qx - prx) + s * (qy - pry)) + sin(th_r - a))
        dwi = wp - k_i * z
        return omega_0 + dwi, c * v1 - s * v2, s * v1 + c * v2, dwi

    for k in range(n_steps):
        t = t0 + k * h
        k1t, k1x, k1y, k1w = rhs(th, x, y, wi, t)
        k2t, k2x, k2y, k2w = rhs(th + 0.5 * h * k1t, x + 0.5 * h * k1x,
                                 y + 0.5 * h * k1y, wi + 0.5 * h * k1w, t + 0.5 * h)
        k3t, k3x, k3y, k3w = rhs(th + 0.5 * h * k2t, x + 0.5 * h * k2x,
                                 y + 0.5 * h * k2y, wi + 0.5 * h * k2w, t + 0.5 * h)
        k4t, k4x, k4y, k4w = rhs(th + h * k3t, x + h * k3x, y + h * k3y, wi + h * k3w, t + h)
        th = th + (h / 6.0) * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
        x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        wi = wi + (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        out[k + 1, 0] = th
        out[k + 1, 1] = x
        out[k + 1, 2] = y
        out[k + 1, 3] = wi
    return out


def rotating_frame_loop(x1, x2, omega_i, v1, v2, omega_0, k_p, k_i, h, n_steps):
    """Integrate the rotating-frame reduction; returns (n_steps+1, 3)."""
    out = np.empty((n_steps + 1, 3))
    a = x1
    b = x2
    wi = omega_i
    out[0, 0] = a
    out[0, 1] = b
    out[0, 2] = wi

    def rhs(p, q, z):
        br = k_p * omega_0 * p + k_p * v2 - k_i * z
        om = omega_0 + br
        return -(v1 / omega_0) * br + om * q, -(v2 / omega_0) * br - om * p, br

    for k in range(n_steps):
        k1a, k1b, k1w = rhs(a, b, wi)
        k2a, k2b, k2w = rhs(a + 0.5 * h * k1a, b + 0.5 * h * k1b, wi + 0.5 * h * k1w)
        k3a, k3b, k3w = rhs(a + 0.5 * h * k2a, b + 0.5 * h * k2b, wi + 0.5 * h * k2w)
        k4a, k4b, k4w = rhs(a + h * k3a, b + h * k3b, wi + h * k3w)
        a = a + (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        b = b + (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        wi = wi + (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        out[k + 1, 0] = a
        out[k + 1, 1] = b
        out[k + 1, 2] = wi
    return out
