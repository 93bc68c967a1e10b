"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; every tolerance is pinned here, not configurable.
"""

import math
import time

import numpy as np
import pytest

from liepid.circle import wrap_angle
from liepid.ode import integrate
from liepid.pendulum import benchmark_config, simulate_pendulum
from liepid.pid import Gains, check_gershgorin_gains, dissipation_matrix
from liepid.vehicle import (BodyVelocity, Pose, Reference,
                            predicted_residual_omega, simulate_nominal)
from liepid.vehicle_integral import (char_poly_coeffs, equilibrium_integrator_state,
                                     rotating_frame_field, routh_hurwitz_stable,
                                     simulate_integral)
from liepid.verify import (certificate_grid, char_poly_from_matrix,
                           check_monotone_nonincreasing, finite_diff_jacobian,
                           is_negative_definite)

TARGET = math.pi / 2


def report(name, ok, detail):
    print(f"[acceptance] {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


def test_criterion_1_pendulum_stabilization():
    cfg = benchmark_config(t_end=50.0, h=1e-3)
    t0 = time.perf_counter()
    traj = simulate_pendulum(cfg)
    elapsed = time.perf_counter() - t0
    theta_err = abs(wrap_angle(traj.final_state[0] - TARGET))
    omega_err = abs(traj.final_state[1])
    integral_err = abs(cfg.gains.k_i * traj.final_state[2] - 1.0)
    mono = check_monotone_nonincreasing(traj.monitors["V"], 1e-9 * cfg.h)
    ok = (theta_err < 1e-4 and omega_err < 1e-4 and integral_err < 1e-3
          and mono.passed and elapsed < 5.0)
    report("pendulum_stabilization", ok,
           f"|theta err|={theta_err:.2e}, |omega|={omega_err:.2e}, "
           f"|kI*uI - 1|={integral_err:.2e}, V monotone={mono.passed}, "
           f"runtime={elapsed:.2f}s")


def test_criterion_2_gain_certificate():
    rep = check_gershgorin_gains(k_i=1.0, k_d=600.0, b=100.0, k_p=1000.0,
                                 beta=1.0 / 101000.0, d_r=1.0, d_c=1.0)
    gains = Gains(k_p=1000.0, k_i=1.0, k_d=600.0, beta=1.0 / 101000.0)
    all_nd = all(is_negative_definite(dissipation_matrix(gains, 100.0, float(g)))
                 for g in np.linspace(-1.0, 1.0, 101))
    ok = rep.passed and rep.f == 0.0 and all_nd
    report("gain_certificate", ok,
           f"passed={rep.passed}, f={rep.f!r}, negative definite on 101 "
           f"sampled slopes={all_nd}")


@pytest.mark.parametrize("eps", [-0.5, 0.3])
def test_criterion_3_magnitude_bias(eps):
    v = BodyVelocity(np.array([1.0 + eps, 0.0]))
    ref = Reference(omega_0=1.0)
    t0 = time.perf_counter()
    traj = simulate_nominal(v, ref, 1.0, Pose(0.0, np.zeros(2)))
    elapsed = time.perf_counter() - t0
    dist = float(traj.monitors["dist_c"][-1])
    radius = float(np.hypot(traj.final_state[1], traj.final_state[2]))
    radius_err = abs(radius - v.speed / ref.omega_0)
    ok = dist < 1e-4 and radius_err < 1e-3 and elapsed < 5.0
    report(f"magnitude_bias(eps={eps})", ok,
           f"|c - c_r|={dist:.2e}, radius err={radius_err:.2e}, "
           f"runtime={elapsed:.2f}s")


def test_criterion_4_misalignment_nominal():
    v = BodyVelocity(np.array([1.0, 0.1]))
    ref = Reference(omega_0=1.0)
    traj = simulate_nominal(v, ref, 1.0, Pose(0.0, np.zeros(2)))
    predicted = predicted_residual_omega(1.0, 1.0, v.speed, v.misalignment)
    wp_final = float(traj.monitors["omega_P"][-1])
    hat_final = float(traj.monitors["dist_chat"][-1])
    tail = traj.monitors["dist_c"][-len(traj.times) // 10:]
    tail_std = float(np.std(tail))
    ok = (abs(predicted - 0.0916) < 1e-4
          and abs(wp_final - 0.0916) < 1e-3
          and abs(wp_final - predicted) < 1e-3
          and hat_final < 1e-3 and tail_std < 1e-3)
    report("misalignment_nominal", ok,
           f"omega_P final={wp_final:.6f} vs predicted={predicted:.6f}, "
           f"|chat - c_r|={hat_final:.2e}, tail std={tail_std:.2e}")


def test_criterion_5_misalignment_integral():
    v = BodyVelocity(np.array([1.0, 0.1]))
    ref = Reference(omega_0=1.0)
    traj = simulate_integral(v, ref, 1.0, 0.1, Pose(0.0, np.zeros(2)))
    omega_err = abs(float(traj.monitors["omega_cmd"][-1]) - ref.omega_0)
    dist = float(traj.monitors["dist_c"][-1])
    wi_err = abs(float(traj.final_state[3]) - 1.0)
    predicted = equilibrium_integrator_state(v, 1.0, 0.1)
    ok = omega_err < 1e-4 and dist < 1e-4 and wi_err < 1e-3 and abs(predicted - 1.0) < 1e-12
    report("misalignment_integral", ok,
           f"|omega - omega_0|={omega_err:.2e}, |c - c_r|={dist:.2e}, "
           f"|omega_I - 1|={wi_err:.2e}")


def test_criterion_6_linearization_fidelity():
    speed = math.hypot(1.0, 0.1)
    phi = math.atan2(0.1, 1.0)
    analytic = char_poly_coeffs(1.0, 1.0, 0.1, speed, phi)
    closed_form_err = max(abs(a - b) for a, b in zip(analytic, (1.1, 1.1, 0.1)))
    v = BodyVelocity(np.array([1.0, 0.1]))
    eq = np.array([0.0, 0.0, equilibrium_integrator_state(v, 1.0, 0.1)])
    jac = finite_diff_jacobian(
        lambda s: rotating_frame_field(s, v, 1.0, 1.0, 0.1), eq)
    fd_err = max(abs(a - b)
                 for a, b in zip(analytic, char_poly_from_matrix(jac)))
    ok = closed_form_err < 1e-12 and fd_err < 1e-6
    report("linearization_fidelity", ok,
           f"closed-form gap={closed_form_err:.2e}, FD-Jacobian gap={fd_err:.2e}")


def test_criterion_7_certificate_soundness_sweep():
    t0 = time.perf_counter()
    certified = 0
    eig_violations = 0
    conservatism = 0
    for omega_0, k_p, k_i, speed, phi in certificate_grid():
        rep = routh_hurwitz_stable(omega_0, k_p, k_i, speed, phi)
        if rep.sufficient_ok:
            certified += 1
            v = BodyVelocity(np.array([speed * math.cos(phi),
                                       speed * math.sin(phi)]))
            eq = np.array([0.0, 0.0, equilibrium_integrator_state(v, k_p, k_i)])
            jac = finite_diff_jacobian(
                lambda s: rotating_frame_field(s, v, omega_0, k_p, k_i), eq)
            if float(np.max(np.real(np.linalg.eigvals(jac)))) >= 0.0:
                eig_violations += 1
        elif rep.exact_ok:
            conservatism += 1
    elapsed = time.perf_counter() - t0
    ok = (certified >= 1000 and eig_violations == 0 and conservatism >= 1
          and elapsed < 60.0)
    report("certificate_soundness_sweep", ok,
           f"{certified} certified tuples, {eig_violations} eigenvalue "
           f"violations, {conservatism} conservatism witnesses, "
           f"runtime={elapsed:.1f}s")


def test_criterion_8_numerics():
    errs = []
    for h in (1e-2, 5e-3, 2.5e-3):
        traj = integrate(lambda t, x: -x, np.array([1.0]), 0.0, 1.0, h)
        errs.append(abs(float(traj.final_state[0]) - math.exp(-1.0)))
    ratios = (errs[0] / errs[1], errs[1] / errs[2])
    ratios_ok = all(14.0 <= r <= 18.0 for r in ratios)

    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(50):
        a = rng.uniform(-2, 2, (3, 3))
        x = rng.uniform(-1, 1, 3)
        jac = finite_diff_jacobian(lambda s: a @ s, x, h=1e-4)
        worst = max(worst, float(np.max(np.abs(jac - a))))
    ok = ratios_ok and worst < 1e-10
    report("numerics", ok,
           f"halving ratios={ratios[0]:.2f}/{ratios[1]:.2f}, "
           f"linear-field Jacobian worst={worst:.2e}")
