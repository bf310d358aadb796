import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from qkdprobe import (
    ProbeCoefficients,
    ProbeParams,
    SignalGeometry,
    coefficients,
    detection_probabilities,
    error_rate,
    interchange_geometry,
    mu_from_constraint,
    overlap,
    q_value,
    renyi_info,
)
from qkdprobe.errors import (
    DegenerateModelError,
    DomainError,
    InfeasibleConstraintError,
    SingularLambdaError,
)
from qkdprobe.optimum import mu_eliminated_q
from qkdprobe.probe import overlap_from_error

PI = math.pi

# The worked nonoptimized example point: alpha just above pi/8 with
# lam/pi = 0.3, mu/pi = 0.156816, theta/pi = 0.1, phi/pi = 0.75.
EXAMPLE_ALPHA = PI / 8 + 1e-6
EXAMPLE_POINT = ProbeParams(
    lam=0.3 * PI, mu=0.156816 * PI, theta=0.1 * PI, phi=0.75 * PI
)
# Frozen by direct evaluation of the coefficient formulas at the point.
EXAMPLE_COEFFS = (0.2659851401, 0.2000021345, 0.0, 0.9340169944)


def random_params(rng, count):
    draws = rng.uniform(0.0, PI, size=(count, 4))
    return [ProbeParams(*row) for row in draws]


class TestSignalGeometry:
    def test_theta_bar(self):
        geom = SignalGeometry(PI / 8)
        assert math.isclose(geom.theta_bar, PI / 4)

    @pytest.mark.parametrize("alpha", [0.0, -0.1, PI / 4, PI / 2])
    def test_rejects_out_of_range_alpha(self, alpha):
        with pytest.raises(DomainError):
            SignalGeometry(alpha)

    def test_interchange_examples(self):
        assert math.isclose(
            interchange_geometry(SignalGeometry(PI / 8)).alpha, PI / 8
        )
        assert math.isclose(
            interchange_geometry(SignalGeometry(PI / 9)).alpha, 5 * PI / 36
        )
        assert math.isclose(
            interchange_geometry(SignalGeometry(PI / 5)).alpha, PI / 20
        )

    @given(st.floats(min_value=1e-6, max_value=PI / 4 - 1e-6))
    @settings(max_examples=200, deadline=None)
    def test_interchange_is_involution(self, alpha):
        geom = SignalGeometry(alpha)
        twice = interchange_geometry(interchange_geometry(geom))
        assert abs(twice.alpha - alpha) < 1e-15


class TestProbeParams:
    def test_rejects_angles_outside_closed_range(self):
        with pytest.raises(DomainError):
            ProbeParams(lam=-0.1, mu=0.0, theta=0.0, phi=0.0)
        with pytest.raises(DomainError):
            ProbeParams(lam=0.0, mu=PI + 0.1, theta=0.0, phi=0.0)


class TestCoefficients:
    @pytest.mark.parametrize("target", [0.0, 0.1, 0.25, 0.49])
    def test_unperturbed_theta_phi_family(self, target):
        # lam = 0, theta = 0, sin(2 phi) = 1 - 4E gives (1-4E, 1-4E, 0, 1).
        phi = 0.5 * math.asin(1.0 - 4.0 * target)
        phi = phi if phi >= 0 else phi + PI
        c = coefficients(ProbeParams(lam=0.0, mu=0.3, theta=0.0, phi=phi))
        assert_allclose(
            (c.a, c.b, c.c, c.d),
            (1.0 - 4.0 * target, 1.0 - 4.0 * target, 0.0, 1.0),
            atol=1e-14,
        )

    def test_identity_case(self):
        c = coefficients(ProbeParams(lam=0.0, mu=0.0, theta=0.0, phi=PI / 4))
        assert_allclose((c.a, c.b, c.c, c.d), (1.0, 1.0, 0.0, 1.0), atol=1e-15)

    def test_worked_example_point(self):
        c = coefficients(EXAMPLE_POINT)
        assert_allclose(
            (c.a, c.b, c.c, c.d), EXAMPLE_COEFFS, atol=1e-10
        )

    def test_magnitudes_bounded(self):
        rng = np.random.default_rng(101)
        for params in random_params(rng, 500):
            c = coefficients(params)
            for value in (c.a, c.b, c.c, c.d):
                assert abs(value) <= 1.0 + 1e-14


class TestDetectionProbabilities:
    def test_no_disturbance(self):
        geom = SignalGeometry(0.19 * PI)
        probs = detection_probabilities(
            ProbeCoefficients(1.0, 1.0, 0.0, 1.0), geom
        )
        assert_allclose(
            (probs.p_uu, probs.p_u_ubar, probs.p_ubar_u, probs.p_ubar_ubar),
            (1.0, 0.0, 0.0, 1.0),
            atol=1e-15,
        )

    @pytest.mark.parametrize("target", [0.0, 0.05, 0.2])
    def test_error_family_gives_conditional_error(self, target, geom_pi8):
        coeffs = ProbeCoefficients(
            1.0 - 4.0 * target, 1.0 - 4.0 * target, 0.0, 1.0
        )
        probs = detection_probabilities(coeffs, geom_pi8)
        assert math.isclose(probs.p_u_ubar, target, abs_tol=1e-14)

    def test_row_sums_over_random_points(self, geom_pi8):
        rng = np.random.default_rng(7)
        for params in random_params(rng, 1000):
            probs = detection_probabilities(coefficients(params), geom_pi8)
            assert abs(probs.p_uu + probs.p_u_ubar - 1.0) < 1e-12
            assert abs(probs.p_ubar_u + probs.p_ubar_ubar - 1.0) < 1e-12

    def test_unrealizable_coefficients_raise(self, geom_pi8):
        # c = 1 together with a = d = 1 cannot come from any probe setting
        # and pushes p_uu above one.
        with pytest.raises(DegenerateModelError):
            detection_probabilities(
                ProbeCoefficients(1.0, 1.0, 1.0, 1.0), geom_pi8
            )


class TestErrorRate:
    def test_zero_for_identity(self):
        geom = SignalGeometry(0.11 * PI)
        assert error_rate(ProbeCoefficients(1.0, 1.0, 0.0, 1.0), geom) == 0.0

    def test_inversion_example(self, geom_pi8):
        phi = 0.5 * math.asin(1.0 - 4.0 * 0.1)
        c = coefficients(ProbeParams(lam=0.0, mu=0.0, theta=0.0, phi=phi))
        assert math.isclose(error_rate(c, geom_pi8), 0.1, abs_tol=1e-14)

    def test_worked_example_error(self):
        geom = SignalGeometry(EXAMPLE_ALPHA)
        e = error_rate(coefficients(EXAMPLE_POINT), geom)
        assert abs(e - 0.2) < 5e-5

    def test_matches_probability_ratio(self, geom_pi8):
        rng = np.random.default_rng(23)
        for params in random_params(rng, 300):
            coeffs = coefficients(params)
            probs = detection_probabilities(coeffs, geom_pi8)
            ratio = (probs.p_u_ubar + probs.p_ubar_u) / (
                probs.p_u_ubar
                + probs.p_ubar_u
                + probs.p_uu
                + probs.p_ubar_ubar
            )
            assert abs(error_rate(coeffs, geom_pi8) - ratio) < 1e-12


class TestOverlap:
    def test_worked_example_overlap(self):
        geom = SignalGeometry(EXAMPLE_ALPHA)
        q = overlap(coefficients(EXAMPLE_POINT), geom)
        assert abs(q - 0.500003) < 1e-5

    def test_second_example_overlap(self):
        geom = SignalGeometry(PI / 5)
        params = ProbeParams(
            lam=0.7 * PI, mu=0.0711275 * PI, theta=0.7 * PI, phi=0.7 * PI
        )
        assert abs(overlap(coefficients(params), geom) - 0.34828) < 1e-4

    def test_identity_overlap(self):
        geom = SignalGeometry(0.2 * PI)
        assert math.isclose(
            overlap(ProbeCoefficients(1.0, 1.0, 0.0, 1.0), geom), 1.0
        )

    @pytest.mark.parametrize("alpha", [PI / 12, PI / 8, 0.2 * PI])
    def test_two_forms_agree(self, alpha):
        geom = SignalGeometry(alpha)
        rng = np.random.default_rng(31)
        checked = 0
        for params in random_params(rng, 4000):
            coeffs = coefficients(params)
            try:
                q_direct = overlap(coeffs, geom)
            except DegenerateModelError:
                continue
            checked += 1
            assert abs(q_direct - overlap_from_error(coeffs, geom)) < 1e-12
        assert checked > 3500


class TestQValue:
    def test_examples(self):
        assert q_value(ProbeCoefficients(1.0, 1.0, 0.0, 1.0)) == 3.0
        assert math.isclose(
            q_value(ProbeCoefficients(0.6, 0.6, 0.0, 1.0)), 2.2
        )
        # Frozen sum of the worked example's coefficients.
        assert math.isclose(
            q_value(coefficients(EXAMPLE_POINT)),
            1.4000042690,
            abs_tol=1e-9,
        )

    def test_mu_elimination_identity(self, geom_pi8):
        # q = a + b + d equals the mu-free expression once mu is solved
        # from the error-rate constraint.
        rng = np.random.default_rng(47)
        checked = 0
        while checked < 200:
            lam, theta, phi = rng.uniform(0.05 * PI, 0.95 * PI, 3)
            target = rng.uniform(0.01, 0.35)
            try:
                mu = mu_from_constraint(lam, theta, phi, target, geom_pi8)
            except (InfeasibleConstraintError, SingularLambdaError):
                continue
            params = ProbeParams(lam=lam, mu=mu, theta=theta, phi=phi)
            direct = q_value(coefficients(params))
            eliminated = mu_eliminated_q(lam, theta, phi, target, geom_pi8)
            assert abs(direct - eliminated) < 1e-10
            checked += 1


class TestMuFromConstraint:
    def test_cos_lambda_zero_reduction(self, geom_pi8):
        mu = mu_from_constraint(PI / 2, 0.3, 1.1, 0.1, geom_pi8)
        assert math.isclose(math.sin(2 * mu), 0.6, abs_tol=1e-14)

    def test_zero_error_case(self, geom_pi8):
        mu = mu_from_constraint(PI / 2, 0.0, 0.0, 0.0, geom_pi8)
        assert math.isclose(mu, PI / 4, abs_tol=1e-12)

    def test_worked_example_mu(self, geom_pi8):
        mu = mu_from_constraint(
            0.3 * PI, 0.1 * PI, 0.75 * PI, 0.2, geom_pi8
        )
        assert abs(mu / PI - 0.156816) < 1e-5

    def test_both_branches_solve_constraint(self, geom_pi8):
        for target in (0.05, 0.2, 0.3):
            default = mu_from_constraint(
                0.4 * PI, 0.2 * PI, 0.6 * PI, target, geom_pi8
            )
            other = mu_from_constraint(
                0.4 * PI,
                0.2 * PI,
                0.6 * PI,
                target,
                geom_pi8,
                alternate_branch=True,
            )
            assert math.isclose(
                math.sin(2 * default), math.sin(2 * other), abs_tol=1e-12
            )
            assert math.cos(2 * default) >= -1e-12
            assert math.cos(2 * other) <= 1e-12
            for mu in (default, other):
                params = ProbeParams(
                    lam=0.4 * PI, mu=mu, theta=0.2 * PI, phi=0.6 * PI
                )
                e = error_rate(coefficients(params), geom_pi8)
                assert abs(e - target) < 1e-12

    def test_singular_lambda_refused(self, geom_pi8):
        with pytest.raises(SingularLambdaError):
            mu_from_constraint(0.0, 0.3, 0.3, 0.1, geom_pi8)

    def test_infeasible_target(self):
        geom = SignalGeometry(PI / 12)  # sin^2(2a) = 1/4
        with pytest.raises(InfeasibleConstraintError):
            mu_from_constraint(PI / 2, 0.0, 0.0, 0.4, geom)

    def test_error_rate_domain(self, geom_pi8):
        with pytest.raises(DomainError):
            mu_from_constraint(PI / 2, 0.0, 0.0, 0.5, geom_pi8)


class TestRenyiInfo:
    def test_examples(self):
        assert renyi_info(1.0) == 0.0
        assert renyi_info(0.0) == 1.0
        assert math.isclose(
            renyi_info(1.0 / 3.0), math.log2(17.0 / 9.0), abs_tol=1e-15
        )

    def test_monotone_decreasing_in_magnitude(self):
        values = [renyi_info(q) for q in np.linspace(0.0, 1.0, 101)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert renyi_info(-1.0) == 0.0

    def test_domain_error(self):
        with pytest.raises(DomainError):
            renyi_info(1.001)
