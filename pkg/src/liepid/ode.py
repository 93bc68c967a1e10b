"""Deterministic fixed-step RK4 integration with trajectory recording.

The plants in this package are smooth and non-stiff at the gains we
simulate, so a fixed step (default 1e-3 s) is used throughout:
reproducibility matters more than adaptive speed, and recording every
accepted step lets Lyapunov monotonicity checks see every sample.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Callable

import numpy as np

# A state is a flat float64 vector; its interpretation is owned by the caller.
StateVector = np.ndarray

VectorField = Callable[[float, np.ndarray], np.ndarray]
MonitorFn = Callable[[float, np.ndarray], float]


class IntegrationError(RuntimeError):
    """A vector field evaluated to a non-finite value."""

    def __init__(self, message: str, t: float | None = None,
                 component: int | None = None, step: int | None = None):
        super().__init__(message)
        self.t = t
        self.component = component
        self.step = step


@dataclass
class Trajectory:
    """Uniformly sampled ODE solution plus named monitor series.

    ``times`` is strictly increasing with constant step, ``states`` has one
    row per sample, and every monitor series has the same length as
    ``times``.
    """

    times: np.ndarray
    states: np.ndarray
    monitors: dict[str, np.ndarray] = dataclass_field(default_factory=dict)
    state_names: tuple[str, ...] = ()

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=float)
        if self.states.ndim != 2 or self.states.shape[0] != self.times.shape[0]:
            raise ValueError("states must have one row per sample time")
        if self.times.shape[0] >= 2 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")
        for name, series in self.monitors.items():
            if len(series) != len(self.times):
                raise ValueError(f"monitor {name!r} length mismatch")
        if not self.state_names:
            self.state_names = tuple(f"x{i}" for i in range(self.states.shape[1]))
        elif len(self.state_names) != self.states.shape[1]:
            raise ValueError("state_names length does not match state dimension")

    @property
    def h(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]


def _check_finite(k: np.ndarray, t: float, step: int | None = None) -> None:
    if not np.all(np.isfinite(k)):
        bad = int(np.flatnonzero(~np.isfinite(k))[0])
        raise IntegrationError(
            f"non-finite field evaluation at t={t!r}, component {bad}",
            t=t, component=bad, step=step)


def rk4_step(field: VectorField, x: StateVector, t: float, h: float) -> StateVector:
    """One classical 4th-order Runge-Kutta step from ``t`` to ``t + h``.

    Inputs are never mutated; each stage evaluation is checked for
    non-finite values.
    """
    if h <= 0:
        raise ValueError("step size h must be positive")
    x = np.asarray(x, dtype=float)
    k1 = np.asarray(field(t, x), dtype=float)
    _check_finite(k1, t)
    k2 = np.asarray(field(t + 0.5 * h, x + 0.5 * h * k1), dtype=float)
    _check_finite(k2, t + 0.5 * h)
    k3 = np.asarray(field(t + 0.5 * h, x + 0.5 * h * k2), dtype=float)
    _check_finite(k3, t + 0.5 * h)
    k4 = np.asarray(field(t + h, x + h * k3), dtype=float)
    _check_finite(k4, t + h)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def n_steps_for(t0: float, t1: float, h: float) -> int:
    """Number of fixed steps covering [t0, t1]; the end lands within h of t1."""
    if t1 <= t0:
        raise ValueError("t1 must exceed t0")
    if h <= 0:
        raise ValueError("step size h must be positive")
    if h > (t1 - t0):
        raise ValueError("step size h must not exceed the interval length")
    return max(1, round((t1 - t0) / h))


def integrate(field: VectorField, x0: StateVector, t0: float, t1: float, h: float,
              monitors: dict[str, MonitorFn] | None = None,
              state_names: tuple[str, ...] = ()) -> Trajectory:
    """Integrate ``field`` from ``x0`` over [t0, t1] with fixed step ``h``.

    Monitors are evaluated at every stored sample, including the initial
    one. The result is a pure function of the inputs: two calls with
    identical arguments produce bit-identical trajectories.
    """
    n = n_steps_for(t0, t1, h)
    x = np.asarray(x0, dtype=float)
    times = t0 + h * np.arange(n + 1)
    states = np.empty((n + 1, x.shape[0]))
    states[0] = x
    for k in range(n):
        try:
            x = rk4_step(field, x, float(times[k]), h)
        except IntegrationError as err:
            err.step = k
            raise IntegrationError(
                f"integration failed at step {k}: {err}",
                t=err.t, component=err.component, step=k) from err
        states[k + 1] = x
    monitor_series: dict[str, np.ndarray] = {}
    for name, fn in (monitors or {}).items():
        monitor_series[name] = np.array(
            [fn(float(times[k]), states[k]) for k in range(n + 1)])
    return Trajectory(times=times, states=states, monitors=monitor_series,
                      state_names=state_names)
