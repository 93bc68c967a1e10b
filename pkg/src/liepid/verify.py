"""Numerical verification utilities and the package-wide invariant suite.

Small, policy-free checks (monotonicity, finite-difference Jacobians,
2x2 definiteness, closed-form cubic roots) plus ``run_invariant_suite``,
which exercises every documented invariant of the simulators and
certificates and reports one pass/fail line per invariant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import pendulum as pend
from . import pid
from . import vehicle as veh
from . import vehicle_integral as vint
from .circle import grad_phi, potential_phi
from .ode import integrate


@dataclass(frozen=True)
class MonotoneReport:
    """Result of a nonincreasing-series check.

    ``worst_violation`` is the largest forward increment; ``worst_index``
    the sample index where it starts.  ``passed`` holds exactly when the
    worst violation is within tolerance.
    """

    passed: bool
    worst_violation: float
    worst_index: int


def check_monotone_nonincreasing(series: Sequence[float], tol: float) -> MonotoneReport:
    """Check ``series[k+1] - series[k] <= tol`` for all k."""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    arr = np.asarray(series, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 2:
        raise ValueError("series must contain at least two samples")
    diffs = np.diff(arr)
    worst_index = int(np.argmax(diffs))
    worst = float(diffs[worst_index])
    return MonotoneReport(passed=worst <= tol, worst_violation=worst,
                          worst_index=worst_index)


def finite_diff_jacobian(field: Callable[[np.ndarray], np.ndarray],
                         x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of an autonomous field at ``x``."""
    if h <= 0:
        raise ValueError("step h must be positive")
    x = np.asarray(x, dtype=float)
    f0 = np.asarray(field(x), dtype=float)
    if not np.all(np.isfinite(f0)):
        raise ValueError("non-finite field evaluation at the expansion point")
    jac = np.empty((f0.shape[0], x.shape[0]))
    for j in range(x.shape[0]):
        step = np.zeros_like(x)
        step[j] = h
        fp = np.asarray(field(x + step), dtype=float)
        fm = np.asarray(field(x - step), dtype=float)
        if not (np.all(np.isfinite(fp)) and np.all(np.isfinite(fm))):
            raise ValueError(f"non-finite field evaluation near column {j}")
        jac[:, j] = (fp - fm) / (2.0 * h)
    return jac


def is_negative_definite(m: np.ndarray) -> bool:
    """Negative definiteness of a symmetric 2x2 matrix (trace/det test)."""
    m = np.asarray(m, dtype=float)
    if m.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    if abs(m[0, 1] - m[1, 0]) > 1e-12:
        raise ValueError("matrix must be symmetric within 1e-12")
    trace = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return trace < 0.0 and det > 0.0


def cubic_real_parts(a2: float, a1: float, a0: float) -> tuple[float, float, float]:
    """Real parts of the roots of lambda^3 + a2*lambda^2 + a1*lambda + a0.

    Closed-form (Cardano) solve on the depressed cubic; a near-degenerate
    discriminant is routed through the trigonometric three-real-root form
    for stability.  Returned sorted descending, with multiplicity.
    """
    for c in (a2, a1, a0):
        if not math.isfinite(c):
            raise ValueError("coefficients must be finite")
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2 ** 3 / 27.0 - a2 * a1 / 3.0 + a0
    shift = -a2 / 3.0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    scale = max(1.0, (q / 2.0) ** 2, abs(p / 3.0) ** 3)
    if disc > 1e-14 * scale:
        # one real root, one complex-conjugate pair
        s = math.sqrt(disc)
        u = math.copysign(abs(-q / 2.0 + s) ** (1.0 / 3.0), -q / 2.0 + s)
        v = math.copysign(abs(-q / 2.0 - s) ** (1.0 / 3.0), -q / 2.0 - s)
        real_root = u + v + shift
        pair_real = -(u + v) / 2.0 + shift
        roots = [real_root, pair_real, pair_real]
    elif p < 0:
        # three real roots (or a near-degenerate pair): trigonometric form
        r = math.sqrt(-(p / 3.0) ** 3)
        arg = -q / (2.0 * r) if r > 0 else 0.0
        phi = math.acos(min(1.0, max(-1.0, arg)))
        m = 2.0 * math.sqrt(-p / 3.0)
        roots = [m * math.cos((phi + 2.0 * math.pi * k) / 3.0) + shift
                 for k in range(3)]
    else:
        # p >= 0 with vanishing discriminant forces q ~ 0: triple root
        u = math.copysign(abs(q / 2.0) ** (1.0 / 3.0), -q)
        roots = [u + shift] * 3
    roots.sort(reverse=True)
    return roots[0], roots[1], roots[2]


def char_poly_from_matrix(m: np.ndarray) -> tuple[float, float, float]:
    """Monic characteristic-polynomial coefficients (a2, a1, a0) of a 3x3."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    a2 = -(m[0, 0] + m[1, 1] + m[2, 2])
    a1 = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
          + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
          + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
    det = (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
           - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
           + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))
    return a2, a1, -det


def linearization_real_parts(omega_0: float, k_p: float, k_i: float,
                             speed: float, phi_mis: float,
                             fd_step: float = 1e-6) -> tuple[float, float, float]:
    """Eigenvalue real parts of the rotating-frame loop at its equilibrium.

    Finite-difference Jacobian at the closed-form equilibrium, then the
    closed-form cubic solve on its characteristic polynomial.
    """
    v = veh.BodyVelocity(np.array([speed * math.cos(phi_mis),
                                   speed * math.sin(phi_mis)]))
    eq = np.array([0.0, 0.0, vint.equilibrium_integrator_state(v, k_p, k_i)])
    jac = finite_diff_jacobian(
        lambda s: vint.rotating_frame_field(s, v, omega_0, k_p, k_i),
        eq, h=fd_step)
    return cubic_real_parts(*char_poly_from_matrix(jac))


# ---------------------------------------------------------------------------
# invariant suite


@dataclass
class InvariantResult:
    name: str
    passed: bool
    margin: float
    detail: str = ""


DEFAULT_TOLERANCES: dict[str, float] = {
    "rk4_order4_low": 14.0,
    "rk4_order4_high": 18.0,
    "grad_phi_fd": 1e-8,
    "potential_invariance": 1e-12,
    "pendulum_lyapunov_step": 1e-9,  # scaled by h
    "dissipation_identity": 1e-6,
    "equilibrium_residual": 1e-12,
    "center_rate_law": 1e-5,
    "center_contraction_law": 1e-5,
    "omega_p_two_forms": 1e-10,
    "limit_cycle_std": 1e-3,
    "residual_fixed_point": 1e-12,
    "frame_equivalence": 1e-6,
    "char_poly_fd": 1e-6,
    "routh_consistency_exclusion": 1e-8,
    "fd_jacobian_linear": 1e-10,
}


def certificate_grid() -> list[tuple[float, float, float, float, float]]:
    """Deterministic (omega_0, k_p, k_i, speed, phi) grid for the sweeps.

    Sized so that well over a thousand tuples satisfy the sufficient
    small-gain bounds while some violate them with the exact test still
    passing (conservatism witnesses).
    """
    omega_0s = (0.6, 1.0, 1.5, 2.0)
    k_ps = (0.2, 0.5, 1.0, 2.0)
    k_is = (0.05, 0.1, 0.3, 0.6)
    speeds = (0.7, 1.0, 1.4)
    phis = (-0.8, -0.4, -0.2, -0.1, 0.0, 0.1, 0.2, 0.4, 0.8)
    return list(itertools.product(omega_0s, k_ps, k_is, speeds, phis))


def _exp_decay_error(h: float) -> float:
    traj = integrate(lambda t, x: -x, np.array([1.0]), 0.0, 1.0, h)
    return abs(float(traj.final_state[0]) - math.exp(-1.0))


def _check_rk4_order(tol: dict) -> InvariantResult:
    errs = [_exp_decay_error(h) for h in (1e-2, 5e-3, 2.5e-3)]
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    lo, hi = tol["rk4_order4_low"], tol["rk4_order4_high"]
    ok = all(lo <= r <= hi for r in ratios)
    return InvariantResult("rk4_order4_convergence", ok, min(ratios),
                           f"halving ratios {ratios[0]:.2f}, {ratios[1]:.2f}")


def _check_rk4_determinism(tol: dict) -> InvariantResult:
    cfg = pend.benchmark_config(t_end=1.0)
    a = pend.simulate_pendulum(cfg)
    b = pend.simulate_pendulum(cfg)
    ok = np.array_equal(a.states, b.states) and np.array_equal(a.times, b.times)
    return InvariantResult("integration_determinism", ok, 0.0,
                           "bit-identical repeated runs")


def _check_grad_phi_fd(tol: dict) -> InvariantResult:
    rng = np.random.default_rng(2024)
    worst = 0.0
    fd_h = 1e-6
    for _ in range(1000):
        theta = rng.uniform(-math.pi, math.pi)
        target = rng.uniform(-math.pi, math.pi)
        fd = (potential_phi(theta + fd_h, target)
              - potential_phi(theta - fd_h, target)) / (2.0 * fd_h)
        worst = max(worst, abs(grad_phi(theta, target) - fd))
    return InvariantResult("grad_phi_finite_difference",
                           worst < tol["grad_phi_fd"], worst,
                           f"worst |grad - fd| = {worst:.2e}")


def _check_potential_invariance(tol: dict) -> InvariantResult:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(500):
        theta, target, shift = rng.uniform(-10, 10, 3)
        worst = max(worst, abs(potential_phi(theta + shift, target + shift)
                               - potential_phi(theta, target)))
    return InvariantResult("potential_rotation_invariance",
                           worst < tol["potential_invariance"], worst,
                           f"worst shift mismatch = {worst:.2e}")


def _check_pendulum_lyapunov(tol: dict) -> InvariantResult:
    cfg = pend.benchmark_config()
    traj = pend.simulate_pendulum(cfg)
    report = check_monotone_nonincreasing(traj.monitors["V"],
                                          tol["pendulum_lyapunov_step"] * cfg.h)
    return InvariantResult("pendulum_lyapunov_monotone", report.passed,
                           report.worst_violation,
                           f"worst step increase = {report.worst_violation:.2e}")


def _signed_flow_step(field, x: np.ndarray, h: float) -> np.ndarray:
    # RK4 step allowing negative h (backward flow), for derivative oracles
    k1 = field(0.0, x)
    k2 = field(0.0, x + 0.5 * h * k1)
    k3 = field(0.0, x + 0.5 * h * k2)
    k4 = field(0.0, x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _check_dissipation_identity(tol: dict) -> InvariantResult:
    cfg = pend.benchmark_config()
    gains, b = cfg.gains, cfg.b
    bias = pend.pendulum_bias_model(cfg.w)
    field = pid.closed_loop_field_second_order(gains, b, bias, cfg.theta_target)

    def v_of(x):
        return pid.lyapunov_second_order(
            pid.SecondOrderState(x[0], x[1], x[2]), gains, bias, cfg.theta_target)

    rng = np.random.default_rng(42)
    worst = 0.0
    d = 1e-5
    for _ in range(100):
        s = np.array([rng.uniform(-math.pi, math.pi),
                      rng.uniform(-2, 2), rng.uniform(-2, 2)])
        vp1 = v_of(_signed_flow_step(field, s, d))
        vm1 = v_of(_signed_flow_step(field, s, -d))
        vp2 = v_of(_signed_flow_step(field, s, 2 * d))
        vm2 = v_of(_signed_flow_step(field, s, -2 * d))
        fd = (-vp2 + 8.0 * vp1 - 8.0 * vm1 + vm2) / (12.0 * d)
        z = gains.k_i * (s[2] - s[1]) + bias.u_b(s[0])
        m = pid.dissipation_matrix(gains, b, bias.grad_at(s[0]))
        xy = np.array([z, s[1]])
        qf = float(xy @ m @ xy)
        worst = max(worst, abs(fd - qf) / max(1.0, abs(qf)))
    return InvariantResult("dissipation_quadratic_form", worst < tol["dissipation_identity"],
                           worst, f"worst relative mismatch = {worst:.2e}")


def _check_tuned_gains(tol: dict) -> InvariantResult:
    rng = np.random.default_rng(3)
    failures = 0
    worst = math.inf
    for _ in range(150):
        b = rng.uniform(-50, 150)
        k_p = rng.uniform(1, 2000)
        d = rng.uniform(0, 5)
        margin = rng.uniform(1.01, 3.0)
        k_i, k_d, beta = pid.tune_gains_gershgorin(b, k_p, d, d, margin)
        rep = pid.check_gershgorin_gains(k_i, k_d, b, k_p, beta, d, d)
        if not rep.passed:
            failures += 1
            continue
        gains = pid.Gains(k_p=k_p, k_i=k_i, k_d=k_d, beta=beta)
        for g in np.linspace(-d, d, 101):
            m = pid.dissipation_matrix(gains, b, float(g))
            det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            worst = min(worst, float(det))
            if not is_negative_definite(m):
                failures += 1
                break
    return InvariantResult("tuned_gains_certificate", failures == 0, worst,
                           f"{failures} failures; min det = {worst:.2e}")


def _check_equilibrium_set(tol: dict) -> InvariantResult:
    cfg = pend.benchmark_config()
    bias = pend.pendulum_bias_model(cfg.w)
    field = pid.closed_loop_field_second_order(cfg.gains, cfg.b, bias,
                                               cfg.theta_target)
    worst = 0.0
    # critical points of the potential with the integrator cancelling the bias
    for theta in (cfg.theta_target, cfg.theta_target + math.pi):
        u_i = -bias.u_b(theta) / cfg.gains.k_i
        worst = max(worst, float(np.max(np.abs(
            field(0.0, np.array([theta, 0.0, u_i]))))))
    ok = worst < tol["equilibrium_residual"]
    # and no spurious equilibria at random states
    rng = np.random.default_rng(11)
    for _ in range(200):
        x = np.array([rng.uniform(-math.pi, math.pi),
                      rng.uniform(-1, 1), rng.uniform(-1, 1)])
        residual = bias.u_b(x[0]) + cfg.gains.k_i * x[2]
        off_manifold = (abs(x[1]) > 1e-3
                        or abs(grad_phi(x[0], cfg.theta_target)) > 1e-3
                        or abs(residual) > 1e-3)
        if off_manifold and np.max(np.abs(field(0.0, x))) < 1e-9:
            ok = False
    return InvariantResult("second_order_equilibrium_set", ok, worst,
                           f"worst residual at equilibria = {worst:.2e}")


def _misaligned_run(t_end: float = 200.0):
    v = veh.BodyVelocity(np.array([1.0, 0.1]))
    ref = veh.Reference(omega_0=1.0)
    init = veh.Pose(heading=0.0, p=np.zeros(2))
    return v, ref, veh.simulate_nominal(v, ref, 1.0, init, t_end=t_end)


def _check_center_rate_law(tol: dict) -> InvariantResult:
    v, ref, traj = _misaligned_run(t_end=30.0)
    centers = veh._center_series(traj.states, v, ref.omega_0)
    h = traj.h
    fd = (centers[2:] - centers[:-2]) / (2.0 * h)
    th = traj.states[1:-1, 0]
    wp = traj.monitors["omega_P"][1:-1]
    world_v = np.column_stack([np.cos(th) * v.v[0] - np.sin(th) * v.v[1],
                               np.sin(th) * v.v[0] + np.cos(th) * v.v[1]])
    analytic = -(wp / ref.omega_0)[:, None] * world_v
    scale = max(1.0, float(np.max(np.hypot(analytic[:, 0], analytic[:, 1]))))
    worst = float(np.max(np.hypot(*(fd - analytic).T))) / scale
    return InvariantResult("center_rate_law", worst < tol["center_rate_law"],
                           worst, f"worst relative mismatch = {worst:.2e}")


def _check_center_contraction(tol: dict) -> InvariantResult:
    v = veh.BodyVelocity(np.array([1.3, 0.0]))
    ref = veh.Reference(omega_0=1.0)
    init = veh.Pose(heading=0.0, p=np.zeros(2))
    traj = veh.simulate_nominal(v, ref, 1.0, init, t_end=30.0)
    vc = traj.monitors["V_center"]
    mono = check_monotone_nonincreasing(vc, 1e-9 * traj.h)
    centers = veh._center_series(traj.states, v, ref.omega_0)
    h = traj.h
    fd = (vc[2:] - vc[:-2]) / (2.0 * h)
    th = traj.states[1:-1, 0]
    along = (np.cos(th) * (centers[1:-1, 0] - ref.center[0])
             + np.sin(th) * (centers[1:-1, 1] - ref.center[1]))
    analytic = -1.0 * v.speed * along * along
    scale = max(1.0, float(np.max(np.abs(analytic))))
    worst = float(np.max(np.abs(fd - analytic))) / scale
    ok = mono.passed and worst < tol["center_contraction_law"]
    return InvariantResult("center_contraction_law", ok, worst,
                           f"monotone={mono.passed}, worst fd mismatch = {worst:.2e}")


def _check_omega_p_forms(tol: dict) -> InvariantResult:
    # the two expressions agree for any body velocity used consistently in
    # the center form: its v-dependent terms cancel exactly
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(1000):
        pose = veh.Pose(heading=rng.uniform(-math.pi, math.pi),
                        p=rng.uniform(-5, 5, 2))
        ref = veh.Reference(omega_0=rng.uniform(0.2, 3.0),
                            center=rng.uniform(-3, 3, 2),
                            phase0=rng.uniform(-math.pi, math.pi))
        t = rng.uniform(0, 10)
        k_p = rng.uniform(0.1, 5.0)
        v = veh.BodyVelocity(rng.uniform(-2, 2, 2) + np.array([2.5, 0.0]))
        direct = veh.omega_p(pose, veh.reference_pose(t, ref), k_p, ref.omega_0)
        center = veh.omega_p_center_form(pose, v, ref.center, k_p, ref.omega_0)
        worst = max(worst, abs(direct - center))
    return InvariantResult("omega_p_two_forms", worst < tol["omega_p_two_forms"],
                           worst, f"worst form mismatch = {worst:.2e}")


def _check_limit_cycle(tol: dict) -> InvariantResult:
    _, _, traj = _misaligned_run()
    dist_c = traj.monitors["dist_c"]
    tail = dist_c[-len(dist_c) // 10:]
    std = float(np.std(tail))
    hat_final = float(traj.monitors["dist_chat"][-1])
    ok = std < tol["limit_cycle_std"] and hat_final < 1e-3 and tail[-1] > 1e-2
    return InvariantResult("misalignment_limit_cycle", ok, std,
                           f"tail std = {std:.2e}, hat-center dist = {hat_final:.2e}")


def _check_residual_fixed_point(tol: dict) -> InvariantResult:
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(500):
        omega_0 = rng.uniform(0.2, 3.0)
        k_p = rng.uniform(0.1, 3.0)
        speed = rng.uniform(0.3, 2.0)
        phi = rng.uniform(-0.5, 1.3)
        try:
            w_hat = veh.predicted_residual_omega(omega_0, k_p, speed, phi)
        except ValueError:
            continue
        residual = w_hat * (omega_0 + w_hat) - omega_0 * k_p * speed * math.sin(phi)
        worst = max(worst, abs(residual))
    return InvariantResult("residual_fixed_point", worst < tol["residual_fixed_point"],
                           worst, f"worst residual = {worst:.2e}")


def _check_frame_equivalence(tol: dict) -> InvariantResult:
    v = veh.BodyVelocity(np.array([1.0, 0.1]))
    ref = veh.Reference(omega_0=1.0)
    init = veh.Pose(heading=0.3, p=np.array([0.5, -0.2]))
    full = vint.simulate_integral(v, ref, 1.0, 0.1, init, t_end=50.0)
    c0 = veh.circle_center(init, v, ref.omega_0)
    x0 = veh.rot2(init.heading).T @ c0
    reduced = vint.simulate_rotating_frame(x0, 0.0, v, ref.omega_0, 1.0, 0.1,
                                           t_end=50.0)
    centers = veh._center_series(full.states, v, ref.omega_0)
    th = full.states[:, 0]
    x_from_full = np.column_stack([
        np.cos(th) * centers[:, 0] + np.sin(th) * centers[:, 1],
        -np.sin(th) * centers[:, 0] + np.cos(th) * centers[:, 1]])
    worst = float(np.max(np.hypot(
        x_from_full[:, 0] - reduced.states[:, 0],
        x_from_full[:, 1] - reduced.states[:, 1])))
    worst = max(worst, float(np.max(np.abs(full.states[:, 3]
                                           - reduced.states[:, 2]))))
    return InvariantResult("rotating_frame_equivalence",
                           worst < tol["frame_equivalence"], worst,
                           f"worst frame mismatch = {worst:.2e}")


def _check_char_poly(tol: dict) -> InvariantResult:
    speed = math.hypot(1.0, 0.1)
    phi = math.atan2(0.1, 1.0)
    analytic = vint.char_poly_coeffs(1.0, 1.0, 0.1, speed, phi)
    v = veh.BodyVelocity(np.array([1.0, 0.1]))
    eq = np.array([0.0, 0.0, vint.equilibrium_integrator_state(v, 1.0, 0.1)])
    jac = finite_diff_jacobian(
        lambda s: vint.rotating_frame_field(s, v, 1.0, 1.0, 0.1), eq)
    fd_coeffs = char_poly_from_matrix(jac)
    worst = max(abs(a - b) for a, b in zip(analytic, fd_coeffs))
    ok = worst < tol["char_poly_fd"] and max(
        abs(a - b) for a, b in zip(analytic, (1.1, 1.1, 0.1))) < 1e-12
    return InvariantResult("char_poly_matches_jacobian", ok, worst,
                           f"worst coefficient gap = {worst:.2e}")


def _check_certificate_soundness(tol: dict) -> InvariantResult:
    grid = certificate_grid()
    sufficient_true = 0
    conservatism = 0
    violations = 0
    for omega_0, k_p, k_i, speed, phi in grid:
        rep = vint.routh_hurwitz_stable(omega_0, k_p, k_i, speed, phi)
        if rep.sufficient_ok:
            sufficient_true += 1
            if max(linearization_real_parts(omega_0, k_p, k_i, speed, phi)) >= 0:
                violations += 1
            if not rep.exact_ok:
                violations += 1
        elif rep.exact_ok:
            conservatism += 1
    ok = sufficient_true >= 1000 and violations == 0 and conservatism >= 1
    return InvariantResult(
        "certificate_soundness_sweep", ok, float(sufficient_true),
        f"{sufficient_true} certified tuples, {violations} violations, "
        f"{conservatism} conservatism witnesses")


def _check_routh_consistency(tol: dict) -> InvariantResult:
    rng = np.random.default_rng(2)
    excl = tol["routh_consistency_exclusion"]
    mismatches = 0
    tested = 0
    for _ in range(10000):
        a2, a1, a0 = rng.uniform(-3, 3, 3)
        margin = a2 * a1 - a0
        if abs(a2) < excl or abs(a0) < excl or abs(margin) < excl:
            continue
        tested += 1
        routh = a2 > 0 and a0 > 0 and margin > 0
        max_real = max(cubic_real_parts(a2, a1, a0))
        if routh != (max_real < -1e-10):
            mismatches += 1
    return InvariantResult("routh_matches_root_signs", mismatches == 0,
                           float(mismatches),
                           f"{mismatches} mismatches over {tested} triples")


def _check_fd_jacobian(tol: dict) -> InvariantResult:
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(50):
        a = rng.uniform(-2, 2, (3, 3))
        x = rng.uniform(-1, 1, 3)
        # central differences are exact on linear fields for any h, so a
        # wide step leaves only negligible roundoff
        jac = finite_diff_jacobian(lambda s: a @ s, x, h=1e-4)
        worst = max(worst, float(np.max(np.abs(jac - a))))
    # second-order accuracy on a smooth nonlinear field
    x0 = np.array([0.3, -0.4, 0.8])

    def smooth(s):
        return np.array([math.sin(s[0]) * s[1], s[2] ** 3, math.cos(s[1]) * s[0]])

    exact = np.array([
        [math.cos(x0[0]) * x0[1], math.sin(x0[0]), 0.0],
        [0.0, 0.0, 3.0 * x0[2] ** 2],
        [math.cos(x0[1]), -math.sin(x0[1]) * x0[0], 0.0]])
    err_h = float(np.max(np.abs(finite_diff_jacobian(smooth, x0, h=1e-3) - exact)))
    err_h2 = float(np.max(np.abs(finite_diff_jacobian(smooth, x0, h=5e-4) - exact)))
    ratio = err_h / err_h2 if err_h2 > 0 else 4.0
    ok = worst < tol["fd_jacobian_linear"] and 3.0 < ratio < 5.0
    return InvariantResult("fd_jacobian_accuracy", ok, worst,
                           f"linear worst = {worst:.2e}, halving ratio = {ratio:.2f}")


_CHECKS = (
    _check_rk4_order,
    _check_rk4_determinism,
    _check_grad_phi_fd,
    _check_potential_invariance,
    _check_pendulum_lyapunov,
    _check_dissipation_identity,
    _check_tuned_gains,
    _check_equilibrium_set,
    _check_center_rate_law,
    _check_center_contraction,
    _check_omega_p_forms,
    _check_limit_cycle,
    _check_residual_fixed_point,
    _check_frame_equivalence,
    _check_char_poly,
    _check_certificate_soundness,
    _check_routh_consistency,
    _check_fd_jacobian,
)


def run_invariant_suite(overrides: dict[str, float] | None = None) -> list[InvariantResult]:
    """Run every registered invariant check, in a fixed order.

    ``overrides`` replaces entries of :data:`DEFAULT_TOLERANCES` (used by
    tests to confirm that a corrupted tolerance is reported as a failure).
    """
    tol = dict(DEFAULT_TOLERANCES)
    if overrides:
        tol.update(overrides)
    return [check(tol) for check in _CHECKS]
