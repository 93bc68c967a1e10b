"""Integral/PID control on the circle and the planar motion group.

Simulation of the PID-stabilized pendulum under unknown gravity and of a
steering-controlled vehicle under body-velocity bias, together with the
gain-tuning rules and Lyapunov/Routh-Hurwitz certificates that make the
closed loops verifiable.
"""

__version__ = "0.1.0"

from .circle import (angle_diff, compose, grad_phi, hess_phi, inverse,
                     potential_phi, wrap_angle)
from .kernels import BACKEND
from .ode import IntegrationError, StateVector, Trajectory, integrate, rk4_step
from .pendulum import (PendulumConfig, benchmark_config, pendulum_bias,
                       pendulum_bias_model, simulate_pendulum)
from .pid import (BiasModel, Gains, SecondOrderState, check_first_order_certificate,
                  check_gershgorin_gains, closed_loop_field_first_order,
                  closed_loop_field_second_order, dissipation_matrix,
                  lyapunov_first_order, lyapunov_second_order, pid_control,
                  tune_gains_gershgorin)
from .vehicle import (BodyVelocity, Pose, Reference, circle_center,
                      lyapunov_center, omega_p, omega_p_center_form,
                      predicted_residual_omega, reference_pose,
                      residual_omega_roots, simulate_nominal, vehicle_field)
from .vehicle_integral import (RouthReport, char_poly_coeffs,
                               equilibrium_integrator_state, omega_with_integral,
                               rotating_frame_field, routh_hurwitz_stable,
                               simulate_integral, simulate_rotating_frame)
from .verify import (MonotoneReport, check_monotone_nonincreasing,
                     cubic_real_parts, finite_diff_jacobian,
                     is_negative_definite, run_invariant_suite)
