import math

import numpy as np
import pytest

from liepid.verify import (check_monotone_nonincreasing, cubic_real_parts,
                           char_poly_from_matrix, finite_diff_jacobian,
                           is_negative_definite, run_invariant_suite)


class TestMonotone:
    def test_strictly_decreasing_passes(self):
        rep = check_monotone_nonincreasing([3.0, 2.0, 1.0], 0.0)
        assert rep.passed

    def test_flat_series_passes(self):
        assert check_monotone_nonincreasing([1.0, 1.0, 1.0], 0.0).passed

    def test_violation_located(self):
        rep = check_monotone_nonincreasing([1.0, 1.0 + 1e-6, 0.0], 1e-9)
        assert not rep.passed
        assert rep.worst_violation == pytest.approx(1e-6, rel=1e-9)
        assert rep.worst_index == 0

    def test_input_validation(self):
        with pytest.raises(ValueError):
            check_monotone_nonincreasing([1.0], 0.0)
        with pytest.raises(ValueError):
            check_monotone_nonincreasing([1.0, 0.0], -1.0)


class TestFiniteDiffJacobian:
    def test_recovers_linear_fields(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            a = rng.uniform(-2, 2, (3, 3))
            x = rng.uniform(-1, 1, 3)
            jac = finite_diff_jacobian(lambda s: a @ s, x, h=1e-4)
            assert np.max(np.abs(jac - a)) < 1e-10

    def test_zero_field(self):
        jac = finite_diff_jacobian(lambda s: np.zeros(3), np.ones(3))
        assert np.array_equal(jac, np.zeros((3, 3)))

    def test_second_order_accuracy(self):
        # truncation error of a central difference shrinks by 4 per halving
        x0 = np.array([0.3, -0.4, 0.8])

        def smooth(s):
            return np.array([math.sin(s[0]) * s[1], s[2] ** 3,
                             math.cos(s[1]) * s[0]])

        exact = np.array([
            [math.cos(x0[0]) * x0[1], math.sin(x0[0]), 0.0],
            [0.0, 0.0, 3.0 * x0[2] ** 2],
            [math.cos(x0[1]), -math.sin(x0[1]) * x0[0], 0.0]])
        err_h = np.max(np.abs(finite_diff_jacobian(smooth, x0, h=1e-3) - exact))
        err_h2 = np.max(np.abs(finite_diff_jacobian(smooth, x0, h=5e-4) - exact))
        assert 3.0 < err_h / err_h2 < 5.0

    def test_nonfinite_evaluation_rejected(self):
        def bad(s):
            with np.errstate(divide="ignore"):
                return np.array([1.0 / s[0]])

        with pytest.raises(ValueError):
            finite_diff_jacobian(bad, np.array([0.0]))


class TestNegativeDefinite:
    def test_reference_cases(self):
        assert is_negative_definite(-np.eye(2))
        assert not is_negative_definite(np.eye(2))
        # det = 1 - 4 = -3: indefinite (eigenvalues 1 and -3)
        assert not is_negative_definite(np.array([[-1.0, 2.0], [2.0, -1.0]]))

    def test_matches_eigenvalue_oracle(self):
        rng = np.random.default_rng(20)
        for _ in range(500):
            a, b, c = rng.uniform(-2, 2, 3)
            m = np.array([[a, b], [b, c]])
            expected = bool(np.all(np.linalg.eigvalsh(m) < 0))
            assert is_negative_definite(m) == expected

    def test_asymmetry_rejected(self):
        with pytest.raises(ValueError):
            is_negative_definite(np.array([[1.0, 0.0], [1e-6, 1.0]]))


class TestCubicRealParts:
    def test_trivial_cases(self):
        assert cubic_real_parts(0.0, 0.0, 0.0) == (0.0, 0.0, 0.0)
        parts = cubic_real_parts(3.0, 3.0, 1.0)  # (lambda + 1)^3
        for p in parts:
            assert p == pytest.approx(-1.0, abs=1e-7)

    def test_reference_case_against_companion_oracle(self):
        a2, a1, a0 = 1.1, 1.1, 0.1
        companion = np.array([[0.0, 0.0, -a0], [1.0, 0.0, -a1], [0.0, 1.0, -a2]])
        oracle = np.sort(np.real(np.linalg.eigvals(companion)))[::-1]
        mine = cubic_real_parts(a2, a1, a0)
        assert all(p < 0 for p in mine)
        assert abs(mine[0] - oracle[0]) < 1e-9

    def test_random_coefficients_against_companion_oracle(self):
        rng = np.random.default_rng(33)
        for _ in range(5000):
            a2, a1, a0 = rng.uniform(-3, 3, 3)
            mine = cubic_real_parts(a2, a1, a0)
            companion = np.array([[0.0, 0.0, -a0], [1.0, 0.0, -a1],
                                  [0.0, 1.0, -a2]])
            oracle = np.sort(np.real(np.linalg.eigvals(companion)))[::-1]
            for p, q in zip(mine, oracle):
                assert abs(p - q) < 1e-7

    def test_routh_consistency_random(self):
        # sign conditions on coefficients match root real-part signs away
        # from the criterion boundary
        rng = np.random.default_rng(2)
        tested = 0
        for _ in range(10000):
            a2, a1, a0 = rng.uniform(-3, 3, 3)
            margin = a2 * a1 - a0
            if abs(a2) < 1e-8 or abs(a0) < 1e-8 or abs(margin) < 1e-8:
                continue
            tested += 1
            routh = a2 > 0 and a0 > 0 and margin > 0
            assert routh == (max(cubic_real_parts(a2, a1, a0)) < -1e-10)
        assert tested > 9000

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            cubic_real_parts(math.nan, 0.0, 0.0)


class TestCharPolyFromMatrix:
    def test_against_numpy_poly(self):
        rng = np.random.default_rng(14)
        for _ in range(100):
            m = rng.uniform(-2, 2, (3, 3))
            a2, a1, a0 = char_poly_from_matrix(m)
            ref = np.poly(m)  # (1, a2, a1, a0)
            assert a2 == pytest.approx(ref[1], abs=1e-10)
            assert a1 == pytest.approx(ref[2], abs=1e-10)
            assert a0 == pytest.approx(ref[3], abs=1e-10)


class TestInvariantSuite:
    def test_full_suite_passes(self):
        results = run_invariant_suite()
        failed = [r.name for r in results if not r.passed]
        assert not failed, f"invariants failed: {failed}"

    def test_names_unique(self):
        names = [r.name for r in run_invariant_suite()]
        assert len(names) == len(set(names))

    def test_corrupted_tolerance_reported_as_failure(self):
        results = run_invariant_suite(overrides={"grad_phi_fd": 1e-30})
        by_name = {r.name: r for r in results}
        assert not by_name["grad_phi_finite_difference"].passed
