import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qkdprobe import SignalGeometry
from qkdprobe.errors import LeadingZeroError
from qkdprobe.optimum import (
    lambda_cubic_coefficients,
    quintic_coefficients,
    sin2phi_cubic_coefficients,
)
from qkdprobe.roots import (
    cardano_roots,
    polynomial_value,
    real_roots_in_interval,
)

PI = math.pi


def residual_scale(coeffs):
    return max(abs(c) for c in coeffs)


def cubic_residual(coeffs, root):
    value = 0.0 + 0.0j
    for c in coeffs:
        value = value * root + c
    return abs(value)


class TestCardano:
    def test_integer_factorization(self):
        roots = cardano_roots(1.0, -6.0, 11.0, -6.0)
        assert_allclose(
            [z.real for z in roots], [1.0, 2.0, 3.0], atol=1e-12
        )
        assert all(abs(z.imag) < 1e-12 for z in roots)

    def test_cube_roots_of_unity(self):
        roots = cardano_roots(1.0, 0.0, 0.0, -1.0)
        expected = sorted(
            [
                complex(-0.5, -math.sqrt(3) / 2),
                complex(-0.5, math.sqrt(3) / 2),
                complex(1.0, 0.0),
            ],
            key=lambda z: (z.real, z.imag),
        )
        for got, want in zip(roots, expected):
            assert abs(got - want) < 1e-12

    def test_random_residuals(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            coeffs = rng.uniform(-1.0, 1.0, 4)
            if abs(coeffs[0]) < 0.05:
                coeffs[0] = 0.3
            roots = cardano_roots(*coeffs)
            scale = residual_scale(coeffs)
            for z in roots:
                assert cubic_residual(coeffs, z) < 1e-9 * scale

    def test_stationarity_cubic_instance(self):
        geom = SignalGeometry(PI / 8)
        coeffs = sin2phi_cubic_coefficients(0.2, geom)
        roots = cardano_roots(*coeffs)
        scale = residual_scale(coeffs)
        for z in roots:
            assert cubic_residual(coeffs, z) < 1e-10 * scale

    def test_leading_zero(self):
        with pytest.raises(LeadingZeroError):
            cardano_roots(0.0, 1.0, 1.0, 1.0)

    def test_deterministic_ordering(self):
        first = cardano_roots(2.0, -3.0, 4.0, -5.0)
        second = cardano_roots(2.0, -3.0, 4.0, -5.0)
        assert first == second
        reals = [z.real for z in first]
        assert reals == sorted(reals)


class TestRealRootFinder:
    def test_known_quintic(self):
        # (x^2 - 1/4) x^3: roots -1/2, 0 (triple), 1/2.
        roots = real_roots_in_interval([1, 0, -0.25, 0, 0, 0])
        assert_allclose(roots, [-0.5, 0.0, 0.5], atol=1e-10)

    def test_tangent_root_recovered(self):
        # (x - 0.3123456)^2 (x + 0.7) (x^2 + 1): no sign change at the
        # double root.
        coeffs = np.polymul(
            np.polymul([1, -0.6246912, 0.3123456**2], [1, 0.7]), [1, 0, 1]
        )
        roots = real_roots_in_interval(coeffs)
        assert_allclose(roots, [-0.7, 0.3123456], atol=1e-7)

    def test_against_companion_matrix_oracle(self):
        rng = np.random.default_rng(29)
        for _ in range(200):
            coeffs = rng.uniform(-1.0, 1.0, 6)
            if abs(coeffs[0]) < 0.05:
                coeffs[0] = 0.3
            mine = real_roots_in_interval(coeffs)
            reference = sorted(
                z.real
                for z in np.roots(coeffs)
                if abs(z.imag) < 1e-9 and -1 - 1e-9 <= z.real <= 1 + 1e-9
            )
            assert len(mine) == len(reference)
            for got, want in zip(mine, reference):
                assert abs(got - want) < 1e-7

    @pytest.mark.parametrize("alpha", [PI / 9, PI / 8, PI / 5])
    @pytest.mark.parametrize("target", [0.1, 0.3])
    def test_model_polynomial_residuals(self, alpha, target):
        geom = SignalGeometry(alpha)
        for coeffs in (
            sin2phi_cubic_coefficients(target, geom),
            lambda_cubic_coefficients(target, geom),
            quintic_coefficients(target, geom),
        ):
            scale = residual_scale(coeffs)
            for root in real_roots_in_interval(coeffs, -2.0, 2.0):
                assert abs(polynomial_value(coeffs, root)) < 1e-9 * scale

    def test_degenerate_inputs(self):
        assert real_roots_in_interval([0.0, 0.0, 1.0]) == []
        assert real_roots_in_interval([1.0]) == []
        assert real_roots_in_interval([]) == []

    def test_no_real_roots(self):
        assert real_roots_in_interval([1.0, 0.0, 1.0]) == []
