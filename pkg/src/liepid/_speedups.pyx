# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-step RK4 loops for the bundled closed-loop plants.

Hot path of the simulators; a pure-Python twin lives in
``liepid._pyloops`` and mirrors the arithmetic operation for operation.
"""

from libc.math cimport cos, sin

import numpy as np


def pendulum_loop(double theta, double omega, double u_i,
                  double w, double b, double k_p, double k_i, double k_d,
                  double theta_target, double h, Py_ssize_t n_steps):
    """Integrate the PID pendulum loop; returns an (n_steps+1, 3) array."""
    out = np.empty((n_steps + 1, 3))
    cdef double[:, ::1] s = out
    cdef double th = theta, om = omega, ui = u_i
    cdef double g, pd
    cdef double k1t, k1o, k1u, k2t, k2o, k2u, k3t, k3o, k3u, k4t, k4o, k4u
    cdef double at, ao, au
    cdef Py_ssize_t k
    s[0, 0] = th
    s[0, 1] = om
    s[0, 2] = ui
    for k in range(n_steps):
        g = 0.5 * sin(th - theta_target)
        pd = -k_p * g - k_d * om
        k1t = om; k1o = b * om + (pd + k_i * ui) + (-w * sin(th)); k1u = pd

        at = th + 0.5 * h * k1t; ao = om + 0.5 * h * k1o; au = ui + 0.5 * h * k1u
        g = 0.5 * sin(at - theta_target)
        pd = -k_p * g - k_d * ao
        k2t = ao; k2o = b * ao + (pd + k_i * au) + (-w * sin(at)); k2u = pd

        at = th + 0.5 * h * k2t; ao = om + 0.5 * h * k2o; au = ui + 0.5 * h * k2u
        g = 0.5 * sin(at - theta_target)
        pd = -k_p * g - k_d * ao
        k3t = ao; k3o = b * ao + (pd + k_i * au) + (-w * sin(at)); k3u = pd

        at = th + h * k3t; ao = om + h * k3o; au = ui + h * k3u
        g = 0.5 * sin(at - theta_target)
        pd = -k_p * g - k_d * ao
        k4t = ao; k4o = b * ao + (pd + k_i * au) + (-w * sin(at)); k4u = pd

        th = th + (h / 6.0) * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
        om = om + (h / 6.0) * (k1o + 2.0 * k2o + 2.0 * k3o + k4o)
        ui = ui + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        s[k + 1, 0] = th
        s[k + 1, 1] = om
        s[k + 1, 2] = ui
    return out


def vehicle_nominal_loop(double heading, double px, double py,
                         double v1, double v2, double omega_0, double k_p,
                         double crx, double cry, double phase0,
                         double t0, double h, Py_ssize_t n_steps):
    """Integrate the proportional steering loop; returns (n_steps+1, 3)."""
    out = np.empty((n_steps + 1, 3))
    cdef double[:, ::1] s = out
    cdef double th = heading, x = px, y = py
    cdef double t, th_r, prx, pry, c, si, wp
    cdef double k1t, k1x, k1y, k2t, k2x, k2y, k3t, k3x, k3y, k4t, k4x, k4y
    cdef double at, ax, ay
    cdef Py_ssize_t k
    s[0, 0] = th
    s[0, 1] = x
    s[0, 2] = y
    for k in range(n_steps):
        t = t0 + k * h

        th_r = phase0 + omega_0 * t
        prx = crx + sin(th_r) / omega_0
        pry = cry - cos(th_r) / omega_0
        c = cos(th); si = sin(th)
        wp = k_p * (omega_0 * (c * (x - prx) + si * (y - pry)) + sin(th_r - th))
        k1t = omega_0 + wp; k1x = c * v1 - si * v2; k1y = si * v1 + c * v2

        at = th + 0.5 * h * k1t; ax = x + 0.5 * h * k1x; ay = y + 0.5 * h * k1y
        th_r = phase0 + omega_0 * (t + 0.5 * h)
        prx = crx + sin(th_r) / omega_0
        pry = cry - cos(th_r) / omega_0
        c = cos(at); si = sin(at)
        wp = k_p * (omega_0 * (c * (ax - prx) + si * (ay - pry)) + sin(th_r - at))
        k2t = omega_0 + wp; k2x = c * v1 - si * v2; k2y = si * v1 + c * v2

        at = th + 0.5 * h * k2t; ax = x + 0.5 * h * k2x; ay = y + 0.5 * h * k2y
        c = cos(at); si = sin(at)
        wp = k_p * (omega_0 * (c * (ax - prx) + si * (ay - pry)) + sin(th_r - at))
        k3t = omega_0 + wp; k3x = c * v1 - si * v2; k3y = si * v1 + c * v2

        at = th + h * k3t; ax = x + h * k3x; ay = y + h * k3y
        th_r = phase0 + omega_0 * (t + h)
        prx = crx + sin(th_r) / omega_0
        pry = cry - cos(th_r) / omega_0
        c = cos(at); si = sin(at)
        wp = k_p * (omega_0 * (c * (ax - prx) + si * (ay - pry)) + sin(th_r - at))
        k4t = omega_0 + wp; k4x = c * v1 - si * v2; k4y = si * v1 + c * v2

        th = th + (h / 6.0) * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
        x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        s[k + 1, 0] = th
        s[k + 1, 1] = x
        s[k + 1, 2] = y
    return out


def vehicle_integral_loop(double heading, double px, double py, double omega_i,
                          double v1, double v2, double omega_0, double k_p, double k_i,
                          double crx, double cry, double phase0,
                          double t0, double h, Py_ssize_t n_steps):
    """Integrate the steering loop with command integration; (n_steps+1, 4)."""
    out = np.empty((n_steps + 1, 4))
    cdef double[:, ::1] s = out
    cdef double th = heading, x = px, y = py, wi = omega_i
    cdef double t, th_r, prx, pry, c, si, wp, dwi
    cdef double k1t, k1x, k1y, k1w, k2t, k2x, k2y, k2w
    cdef double k3t, k3x, k3y, k3w, k4t, k4x, k4y, k4w
    cdef double at, ax, ay, aw
    cdef Py_ssize_t k
    s[0, 0] = th
    s[0, 1] = x
    s[0, 2] = y
    s[0, 3] = wi
    for k in range(n_steps):
        t = t0 + k * h

        th_r = phase0 + omega_0 * t
        prx = crx + sin(th_r) / omega_0
        pry = cry - cos(th_r) / omega_0
        c = cos(th); si = sin(th)
        wp = k_p * (omega_0 * (c * (x - prx) + si * (y - pry)) + sin(th_r - th))
        dwi = wp - k_i * wi
        k1t = omega_0 + dwi; k1x = c * v1 - si * v2; k1y = si * v1 + c * v2; k1w = dwi

        at = th + 0.5 * h * k1t; ax = x + 0.5 * h * k1x; ay = y + 0.5 * h * k1y
        aw = wi + 0.5 * h * k1w
        th_r = phase0 + omega_0 * (t + 0.5 * h)
        prx = crx + sin(th_r) / omega_0
        pry = cry - cos(th_r) / omega_0
        c = cos(at); si = sin(at)
        wp = k_p * (omega_0 * (c * (ax - prx) + si * (ay - pry)) + sin(th_r - at))
        dwi = wp - k_i * aw
        k2t = omega_0 + dwi; k2x = c * v1 - si * v2; k2y = si * v1 + c * v2; k2w = dwi

        at = th + 0.5 * h * k2t; ax = x + 0.5 * h * k2x; ay = y + 0.5 * h * k2y
        aw = wi + 0.5 * h * k2w
        c = cos(at); si = sin(at)
        wp = k_p * (omega_0 * (c * (ax - prx) + si * (ay - pry)) + sin(th_r - at))
        dwi = wp - k_i * aw
        k3t = omega_0 + dwi; k3x = c * v1 - si * v2; k3y = si * v1 + c * v2; k3w = dwi

        at = th + h * k3t; ax = x + h * k3x; ay = y + h * k3y
        aw = wi + h * k3w
        th_r = phase0 + omega_0 * (t + h)
        prx = crx + sin(th_r) / omega_0
        pry = cry - cos(th_r) / omega_0
        c = cos(at); si = sin(at)
        wp = k_p * (omega_0 * (c * (ax - prx) + si * (ay - pry)) + sin(th_r - at))
        dwi = wp - k_i * aw
        k4t = omega_0 + dwi; k4x = c * v1 - si * v2; k4y = si * v1 + c * v2; k4w = dwi

        th = th + (h / 6.0) * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
        x = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        wi = wi + (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        s[k + 1, 0] = th
        s[k + 1, 1] = x
        s[k + 1, 2] = y
        s[k + 1, 3] = wi
    return out


def rotating_frame_loop(double x1, double x2, double omega_i,
                        double v1, double v2, double omega_0,
                        double k_p, double k_i, double h, Py_ssize_t n_steps):
    """Integrate the rotating-frame reduction; returns (n_steps+1, 3)."""
    out = np.empty((n_steps + 1, 3))
    cdef double[:, ::1] s = out
    cdef double a = x1, b = x2, wi = omega_i
    cdef double br, om
    cdef double k1a, k1b, k1w, k2a, k2b, k2w, k3a, k3b, k3w, k4a, k4b, k4w
    cdef double pa, pb, pw
    cdef Py_ssize_t k
    s[0, 0] = a
    s[0, 1] = b
    s[0, 2] = wi
    for k in range(n_steps):
        br = k_p * omega_0 * a + k_p * v2 - k_i * wi
        om = omega_0 + br
        k1a = -(v1 / omega_0) * br + om * b; k1b = -(v2 / omega_0) * br - om * a; k1w = br

        pa = a + 0.5 * h * k1a; pb = b + 0.5 * h * k1b; pw = wi + 0.5 * h * k1w
        br = k_p * omega_0 * pa + k_p * v2 - k_i * pw
        om = omega_0 + br
        k2a = -(v1 / omega_0) * br + om * pb; k2b = -(v2 / omega_0) * br - om * pa; k2w = br

        pa = a + 0.5 * h * k2a; pb = b + 0.5 * h * k2b; pw = wi + 0.5 * h * k2w
        br = k_p * omega_0 * pa + k_p * v2 - k_i * pw
        om = omega_0 + br
        k3a = -(v1 / omega_0) * br + om * pb; k3b = -(v2 / omega_0) * br - om * pa; k3w = br

        pa = a + h * k3a; pb = b + h * k3b; pw = wi + h * k3w
        br = k_p * omega_0 * pa + k_p * v2 - k_i * pw
        om = omega_0 + br
        k4a = -(v1 / omega_0) * br + om * pb; k4b = -(v2 / omega_0) * br - om * pa; k4w = br

        a = a + (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        b = b + (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        wi = wi + (h / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        s[k + 1, 0] = a
        s[k + 1, 1] = b
        s[k + 1, 2] = wi
    return out
