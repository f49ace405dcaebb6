import numpy as np
import pytest

from pulsekit import linalg
from pulsekit.errors import (
    InvalidInputError,
    NotApplicableError,
    NotSymmetrizableError,
)
from pulsekit.presets import get_preset
from pulsekit.spectral import (
    ControlSystem,
    DiagonalControl,
    _radius_evaluator,
    _symmetrized_a,
    control_system,
    derivative_at_zero,
    r_tau,
    r_tau_general,
    sample_curve,
    strong_convexity_parameter,
)

from conftest import (
    random_control,
    random_symmetrizable_matrix,
    random_system,
    rotation_counterexample_radius,
    second_difference,
)


class TestDomainTypes:
    def test_control_must_be_positive(self):
        with pytest.raises(InvalidInputError):
            DiagonalControl(d=np.array([0.5, 0.0]))
        with pytest.raises(InvalidInputError):
            DiagonalControl(d=np.array([0.5, -0.1]))
        with pytest.raises(InvalidInputError):
            DiagonalControl(d=np.array([0.5, np.nan]))

    def test_control_constrained_flag(self):
        assert DiagonalControl(d=np.array([0.3, 1.0])).control_constrained
        assert not DiagonalControl(d=np.array([0.3, 1.5])).control_constrained

    def test_unique_weakest_class(self):
        assert DiagonalControl(d=np.array([0.5, 0.25])).unique_weakest_class == 0
        assert DiagonalControl(d=np.array([1.0, 1.0])).unique_weakest_class is None

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            control_system(np.eye(3), [0.5, 0.5])

    def test_certificate_computed_at_construction(self):
        sys = control_system([[0.0, -1.0], [1.0, 0.0]], [1.0, 0.25])
        assert not sys.certificate.symmetrizable

    def test_system_arrays_are_immutable(self):
        sys = get_preset("fig1-stable").system
        with pytest.raises(ValueError):
            sys.a[0, 0] = 7.0
        with pytest.raises(ValueError):
            sys.d[0] = 7.0


class TestRTau:
    def test_at_zero_is_max_control(self, rng):
        for _ in range(20):
            sys = random_system(rng)
            assert abs(r_tau(sys, 0.0) - np.max(sys.d)) < 1e-12

    def test_uniform_control_is_scaled_exponential(self, rng):
        # D = d I: the radius is d exp(tau lambda_max(A))
        for _ in range(20):
            a = random_symmetrizable_matrix(rng, 3)
            d = float(rng.uniform(0.1, 1.0))
            sys = control_system(a, [d, d, d])
            w, _ = linalg.sym_eig(_symmetrized_a(sys))
            tau = float(rng.uniform(0.0, 3.0))
            expect = d * np.exp(tau * w[-1])
            np.testing.assert_allclose(r_tau(sys, tau), expect, rtol=1e-10)

    def test_sth_roundworm_near_year(self):
        sys = get_preset("sth-roundworm").system
        assert abs(r_tau(sys, 365.0) - 1.0) < 0.02

    def test_requires_symmetrizable(self):
        sys = get_preset("rotation-ctrex").system
        with pytest.raises(NotSymmetrizableError, match="r_tau_general"):
            r_tau(sys, 1.0)

    def test_rejects_negative_tau(self, rng):
        sys = random_system(rng)
        with pytest.raises(InvalidInputError):
            r_tau(sys, -0.5)

    def test_path_agreement(self, rng):
        # symmetrized and general paths agree to 1e-8 relative
        for _ in range(1000):
            sys = random_system(rng)
            tau = float(rng.uniform(0.0, 10.0))
            rs = r_tau(sys, tau)
            rg = r_tau_general(sys, tau)
            assert abs(rs - rg) <= 1e-8 * rs

    def test_internal_evaluator_cross_check(self, rng):
        for _ in range(100):
            sys = random_system(rng)
            radius = _radius_evaluator(sys)
            for tau in rng.uniform(0.0, 8.0, 5):
                rs = r_tau(sys, float(tau))
                assert abs(radius(float(tau)) - rs) <= 1e-10 * (1.0 + rs)

    def test_positive_definiteness_along_the_curve(self, rng):
        # D^(1/2) exp(tau A~) D^(1/2) admits a Cholesky factor wherever
        # its condition number e^(tau (w_max - w_min)) fits in doubles
        for _ in range(50):
            sys = random_system(rng)
            a_sym = _symmetrized_a(sys)
            w, _ = linalg.sym_eig(a_sym)
            spread = max(float(w[-1] - w[0]), 1e-3)
            sq = np.sqrt(sys.d)
            tau = float(rng.uniform(0.0, min(10.0, 28.0 / spread)))
            m = linalg.mat_exp(a_sym, tau) * np.outer(sq, sq)
            linalg.cholesky(0.5 * (m + m.T))


class TestRTauGeneral:
    @pytest.mark.parametrize("tau", np.linspace(0.0, 2 * np.pi, 17))
    def test_rotation_counterexample_closed_form(self, tau):
        sys = get_preset("rotation-ctrex").system
        expect = rotation_counterexample_radius(tau, 0.25)
        assert abs(r_tau_general(sys, float(tau)) - expect) < 1e-12

    def test_complex_branch_modulus_is_constant(self):
        # inside the complex branch the conjugate pair has modulus sqrt(d)
        sys = get_preset("rotation-ctrex").system
        for tau in (1.0, np.pi / 2, 2.0):
            assert abs(r_tau_general(sys, tau) - 0.5) < 1e-12

    def test_triangular_system(self, rng):
        a = np.array([[0.1, 0.7, -0.3], [0.0, -0.2, 0.5], [0.0, 0.0, 0.4]])
        d = np.array([0.3, 0.8, 0.5])
        sys = control_system(a, d)
        for tau in rng.uniform(0.0, 4.0, 10):
            expect = np.max(d * np.exp(np.diag(a) * tau))
            np.testing.assert_allclose(r_tau_general(sys, float(tau)),
                                       expect, rtol=1e-10)


class TestSampleCurve:
    def test_two_samples(self, rng):
        sys = random_system(rng)
        curve = sample_curve(sys, 3.0, 2)
        np.testing.assert_array_equal(curve.taus, [0.0, 3.0])
        assert abs(curve.radii[0] - np.max(sys.d)) < 1e-12
        assert abs(curve.radii[1] - r_tau(sys, 3.0)) < 1e-12
        assert curve.methods == ("Symmetrized", "Symmetrized")

    def test_sth_roundworm_dips_and_recrosses(self):
        sys = get_preset("sth-roundworm").system
        curve = sample_curve(sys, 600.0, 601)
        assert abs(curve.radii[0] - 1.0) < 1e-12
        i_min = int(np.argmin(curve.radii))
        assert 0 < i_min < 600
        assert curve.radii[i_min] < 1.0
        assert curve.radii[-1] > 1.0
        # one dip: non-increasing into the minimum, non-decreasing after
        assert np.all(np.diff(curve.radii[:i_min + 1]) <= 1e-12)
        assert np.all(np.diff(curve.radii[i_min:]) >= -1e-12)

    def test_rotation_counterexample_concave_decreasing_start(self):
        sys = get_preset("rotation-ctrex").system
        p = 0.95 * np.arccos(2 * np.sqrt(0.25) / 1.25)
        curve = sample_curve(sys, p, 41)
        assert curve.methods[0] == "General"
        assert np.all(np.diff(curve.radii) < 0.0)
        second = np.diff(curve.radii, 2)
        assert np.all(second < 0.0)

    def test_input_validation(self, rng):
        sys = random_system(rng)
        with pytest.raises(InvalidInputError):
            sample_curve(sys, 0.0, 10)
        with pytest.raises(InvalidInputError):
            sample_curve(sys, 1.0, 1)


class TestDerivativeAtZero:
    def test_self_promoting_demo(self):
        sys = get_preset("fig1-topleft").system
        np.testing.assert_allclose(derivative_at_zero(sys), 0.1, rtol=1e-15)

    def test_sth_roundworm(self):
        sys = get_preset("sth-roundworm").system
        np.testing.assert_allclose(derivative_at_zero(sys), -0.016,
                                   rtol=1e-15)

    def test_tied_maximum_raises(self):
        sys = control_system([[0.2, 1.0], [1.0, -0.2]], [1.0, 1.0])
        with pytest.raises(NotApplicableError):
            derivative_at_zero(sys)

    def test_matches_central_difference(self, rng):
        h = 1e-6
        for _ in range(100):
            sys = random_system(rng)
            radius = _radius_evaluator(sys)
            slope = (radius(h) - radius(-h)) / (2.0 * h)
            expect = derivative_at_zero(sys)
            assert abs(slope - expect) <= max(1e-5 * abs(expect), 1e-9)


class TestStrongConvexity:
    def test_hand_computed_unit_control(self):
        # D = I makes the constraint set the unit sphere, so m_p is the
        # smallest b_i^2; eigenvalues (-1, 2) at p = 1 give exp(-1)
        c, s = np.cos(0.7), np.sin(0.7)
        rot = np.array([[c, -s], [s, c]])
        a = rot @ np.diag([-1.0, 2.0]) @ rot.T
        sys = control_system(a, [1.0, 1.0])
        np.testing.assert_allclose(strong_convexity_parameter(sys, 1.0),
                                   np.exp(-1.0), rtol=1e-10)

    def test_lower_bounds_second_differences(self, rng):
        p = 3.0
        h = 1e-3
        for _ in range(50):
            sys = random_system(rng)
            try:
                m_p = strong_convexity_parameter(sys, p)
            except NotApplicableError:
                continue
            assert m_p > 0.0
            radius = _radius_evaluator(sys)
            taus = np.linspace(h, p - h, 30)
            worst = min(second_difference(radius, float(t), h) for t in taus)
            assert worst >= m_p - 1e-5

    def test_sth_roundworm_long_horizon(self):
        sys = get_preset("sth-roundworm").system
        m_p = strong_convexity_parameter(sys, 400.0)
        assert m_p > 0.0
        radius = _radius_evaluator(sys)
        grid_min = min(second_difference(radius, t, 1e-2)
                       for t in np.linspace(1.0, 399.0, 200))
        assert grid_min >= m_p - 1e-6

    def test_singular_rate_matrix_raises(self):
        sys = control_system([[0.0, 0.0], [0.0, 1.0]], [0.5, 0.25])
        with pytest.raises(NotApplicableError):
            strong_convexity_parameter(sys, 1.0)

    def test_requires_symmetrizable(self):
        sys = get_preset("rotation-ctrex").system
        with pytest.raises(NotSymmetrizableError):
            strong_convexity_parameter(sys, 1.0)


class TestConvexityProperties:
    def test_second_differences_nonnegative(self, rng):
        h = 1e-3
        for _ in range(50):
            sys = random_system(rng)
            radius = _radius_evaluator(sys)
            for tau in np.linspace(0.1, 10.0, 20):
                assert second_difference(radius, float(tau), h) >= -1e-7

    def test_rotation_counterexample_is_concave_early(self):
        sys = get_preset("rotation-ctrex").system
        bound = 0.9 * np.arccos(2 * np.sqrt(0.25) / 1.25)
        h = 1e-3
        for tau in np.linspace(h, bound - h, 25):
            val = second_difference(lambda t: r_tau_general(sys, t),
                                    float(tau), h)
            assert val <= -1e-6

    def test_pointwise_max_of_exponential_mixtures(self, rng):
        # every feasible y gives a curve below r; the top eigenvector's y
        # attains it
        for _ in range(25):
            sys = random_system(rng)
            a_sym = _symmetrized_a(sys)
            w, q = linalg.sym_eig(a_sym)
            c = q.T @ ((1.0 / sys.d)[:, np.newaxis] * q)
            for tau in rng.uniform(0.0, 5.0, 4):
                tau = float(tau)
                r = r_tau(sys, tau)
                for _ in range(10):
                    y = rng.normal(size=sys.n)
                    y /= np.sqrt(y @ c @ y)
                    f_y = float(np.exp(w * tau) @ (y * y))
                    assert f_y <= r * (1.0 + 1e-10) + 1e-12
                sq = np.sqrt(sys.d)
                m = linalg.mat_exp(a_sym, tau) * np.outer(sq, sq)
                wm, qm = linalg.sym_eig(0.5 * (m + m.T))
                y_star = q.T @ (sq * qm[:, -1])
                np.testing.assert_allclose(y_star @ c @ y_star, 1.0,
                                           rtol=1e-9)
                f_star = float(np.exp(w * tau) @ (y_star * y_star))
                np.testing.assert_allclose(f_star, r, rtol=1e-9)
