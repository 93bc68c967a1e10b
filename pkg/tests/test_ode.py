import math

import numpy as np
import pytest

from liepid.ode import IntegrationError, Trajectory, integrate, n_steps_for, rk4_step


def decay(t, x):
    return -x


def test_rk4_step_linear_decay_matches_hand_expansion():
    # hand-expanded stages for xdot = -x, h = 0.1:
    # x * (1 - h + h^2/2 - h^3/6 + h^4/24) = 0.9048375 exactly
    out = rk4_step(decay, np.array([1.0]), 0.0, 0.1)
    assert out[0] == pytest.approx(0.9048375, abs=1e-12)
    assert abs(out[0] - math.exp(-0.1)) < 1e-6


def test_rk4_step_zero_field_keeps_state():
    x = np.array([3.25, -1.5])
    out = rk4_step(lambda t, s: np.zeros_like(s), x, 0.0, 0.7)
    assert np.array_equal(out, x)


def test_rk4_step_constant_field_is_exact():
    out = rk4_step(lambda t, s: np.array([1.0]), np.array([0.0]), 0.0, 0.5)
    assert out[0] == pytest.approx(0.5, abs=1e-15)


def test_rk4_step_rejects_nonpositive_h():
    with pytest.raises(ValueError):
        rk4_step(decay, np.array([1.0]), 0.0, 0.0)


def test_rk4_step_reports_nonfinite_component():
    def bad(t, x):
        return np.array([np.nan, 1.0])

    with pytest.raises(IntegrationError) as excinfo:
        rk4_step(bad, np.array([1.0, 1.0]), 2.5, 0.1)
    assert excinfo.value.component == 0
    assert "2.5" in str(excinfo.value)


def test_integrate_exponential_decay_endpoint():
    traj = integrate(decay, np.array([1.0]), 0.0, 1.0, 1e-3)
    assert abs(traj.final_state[0] - math.exp(-1.0)) < 1e-9
    assert traj.times[0] == 0.0
    assert traj.times[-1] == pytest.approx(1.0, abs=1e-12)


def test_integrate_zero_field_all_samples_equal():
    v = np.array([2.0, -0.5])
    traj = integrate(lambda t, x: np.zeros_like(x), v, 0.0, 1.0, 0.1)
    assert np.all(traj.states == v)
    assert len(traj.times) == 11


def test_integrate_monitor_contraction_is_decreasing():
    traj = integrate(decay, np.array([1.0]), 0.0, 1.0, 0.01,
                     monitors={"norm": lambda t, x: float(np.abs(x[0]))})
    norm = traj.monitors["norm"]
    assert len(norm) == len(traj.times)
    assert np.all(np.diff(norm) < 0)


def test_integrate_validates_interval_and_step():
    with pytest.raises(ValueError):
        integrate(decay, np.array([1.0]), 1.0, 0.0, 0.1)
    with pytest.raises(ValueError):
        integrate(decay, np.array([1.0]), 0.0, 1.0, -0.1)
    with pytest.raises(ValueError):
        integrate(decay, np.array([1.0]), 0.0, 1.0, 2.0)


def test_integrate_error_carries_step_index():
    def blows_up(t, x):
        with np.errstate(over="ignore"):
            return np.array([x[0] ** 2])

    with pytest.raises(IntegrationError) as excinfo:
        integrate(blows_up, np.array([10.0]), 0.0, 10.0, 0.05)
    assert excinfo.value.step is not None
    assert "step" in str(excinfo.value)


def test_order_four_convergence():
    # independent oracle: closed form exp(-1)
    errs = []
    for h in (1e-2, 5e-3, 2.5e-3):
        traj = integrate(decay, np.array([1.0]), 0.0, 1.0, h)
        errs.append(abs(traj.final_state[0] - math.exp(-1.0)))
    for coarse, fine in zip(errs, errs[1:]):
        assert 14.0 <= coarse / fine <= 18.0


def test_determinism_bit_identical():
    field = lambda t, x: np.array([math.sin(x[0]) - 0.3 * x[1], x[0]])
    a = integrate(field, np.array([0.3, -0.2]), 0.0, 2.0, 1e-3)
    b = integrate(field, np.array([0.3, -0.2]), 0.0, 2.0, 1e-3)
    assert np.array_equal(a.states, b.states)
    assert np.array_equal(a.times, b.times)


def test_trajectory_validation():
    with pytest.raises(ValueError):
        Trajectory(times=np.array([0.0, 1.0]), states=np.zeros((3, 2)))
    with pytest.raises(ValueError):
        Trajectory(times=np.array([0.0, 1.0, 0.5]), states=np.zeros((3, 2)))
    with pytest.raises(ValueError):
        Trajectory(times=np.array([0.0, 1.0]), states=np.zeros((2, 2)),
                   monitors={"m": np.zeros(3)})


def test_n_steps_lands_within_h_of_t1():
    assert n_steps_for(0.0, 1.0, 0.3) == 3
    assert n_steps_for(0.0, 1.0, 1e-3) == 1000
