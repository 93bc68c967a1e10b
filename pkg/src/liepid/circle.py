"""Angle arithmetic on the circle and the target-shaping potential."""

import math

TWO_PI = math.tau


def wrap_angle(x: float) -> float:
    """Canonical representative of ``x`` mod 2*pi, in (-pi, pi]."""
    if not math.isfinite(x):
        raise ValueError(f"angle must be finite, got {x!r}")
    r = math.remainder(x, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


def compose(a: float, b: float) -> float:
    """Group operation: wrapped sum of two angles."""
    return wrap_angle(a + b)


def inverse(a: float) -> float:
    """Group inverse: wrapped negation."""
    return wrap_angle(-a)


def angle_diff(a: float, b: float) -> float:
    """Wrapped difference a - b, in (-pi, pi]."""
    return wrap_angle(a - b)


def potential_phi(theta: float, theta_target: float) -> float:
    """Squared half-angle error sin((theta - theta_target)/2)**2.

    Takes values in [0, 1]; zero exactly at the target and its only other
    critical point is the maximum at the antipode.
    """
    s = math.sin(0.5 * (theta - theta_target))
    return s * s


def grad_phi(theta: float, theta_target: float) -> float:
    """Derivative of :func:`potential_phi`: 0.5*sin(theta - theta_target)."""
    return 0.5 * math.sin(theta - theta_target)


def hess_phi(theta: float, theta_target: float) -> float:
    """Second derivative of :func:`potential_phi`: 0.5*cos(theta - theta_target)."""
    return 0.5 * math.cos(theta - theta_target)
