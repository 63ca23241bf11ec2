import cmath
import math

import numpy as np
import pytest

from gzntlab.cauchy import (
    cauchy_extended,
    cauchy_poly,
    cauchy_poly_jet,
    cauchy_quad,
    fullline_constant,
    poly_eval,
)
from gzntlab.errors import DomainError


class TestClosedForms:
    def test_log_kernel_at_i(self):
        # int_{-1}^{1} dt/(t-i) = Log((1-i)/(-1-i)) = Log(i) = i*pi/2
        assert cauchy_poly(-1, 1, (1.0,), 1j) == pytest.approx(1j * math.pi / 2, abs=1e-15)

    def test_real_point_outside(self):
        # antiderivative ln|t-2| gives ln(1/3)
        assert cauchy_poly(-1, 1, (1.0,), 2.0) == pytest.approx(math.log(1 / 3), abs=1e-15)

    def test_linear_density_recurrence(self):
        # I_1 = z*I_0 + (hi - lo)
        assert cauchy_poly(-1, 1, (0.0, 1.0), 1j) == pytest.approx(2 - math.pi / 2, abs=1e-14)

    def test_linearity_in_coefficients(self):
        z = 0.3 + 0.7j
        lhs = cauchy_poly(-1, 1, (2.0, 0.0, 3.0), z)
        rhs = 2 * cauchy_poly(-1, 1, (1.0,), z) + 3 * cauchy_poly(-1, 1, (0.0, 0.0, 1.0), z)
        assert lhs == pytest.approx(rhs, abs=1e-14)

    def test_rejects_points_on_interval(self):
        with pytest.raises(DomainError):
            cauchy_poly(-1, 1, (1.0,), 0.5)
        with pytest.raises(DomainError):
            cauchy_poly(-1, 1, (1.0,), 1.0)


class TestExtension:
    def test_boundary_value_is_pv_plus_half_jump(self):
        # PV int dt/t = 0 over [-1,1]; the boundary value adds i*pi*phi(0)
        assert cauchy_extended(-1, 1, (1.0,), 0.0) == pytest.approx(1j * math.pi, abs=1e-15)

    def test_upper_value_matches_plain(self):
        z = 0.5j
        assert cauchy_extended(-1, 1, (1.0,), z) == cauchy_poly(-1, 1, (1.0,), z)

    def test_lower_window_value(self):
        # conj(I0(conj z)) + 2*pi*i at z = -i/2; I0(i/2) = 2.2143i
        up = cauchy_poly(-1, 1, (1.0,), 0.5j)
        expected = up.conjugate() + 2j * math.pi
        assert cauchy_extended(-1, 1, (1.0,), -0.5j) == pytest.approx(expected, abs=1e-15)
        assert expected == pytest.approx(4.06888787j, abs=1e-8)

    @pytest.mark.parametrize("coeffs", [(1.0,), (0.0, 0.0, 1.0), (0.3, -0.1, 0.0, 0.2)])
    @pytest.mark.parametrize("x", [-0.6, 0.1, 0.8])
    def test_continuity_across_axis(self, coeffs, x):
        delta = 1e-6
        up = cauchy_extended(-1, 1, coeffs, complex(x, delta))
        down = cauchy_extended(-1, 1, coeffs, complex(x, -delta))
        mid = cauchy_extended(-1, 1, coeffs, x)
        assert abs(up - down) <= 1e-4 * (1 + abs(mid))

    @pytest.mark.parametrize("coeffs", [(1.0,), (0.0, 1.0), (0.5, 0.0, 2.0)])
    def test_jump_identity(self, coeffs):
        # continued minus reflected equals the full jump 2*pi*i*phi(z)
        rng = np.random.default_rng(3)
        for _ in range(25):
            z = complex(rng.uniform(-0.9, 0.9), -rng.uniform(0.01, 0.9))
            jump = cauchy_extended(-1, 1, coeffs, z) - cauchy_poly(-1, 1, coeffs, z.conjugate()).conjugate()
            expected = 2j * math.pi * poly_eval(coeffs, z)
            assert abs(jump - expected) <= 1e-10 * (1 + abs(expected))

    def test_window_guard(self):
        with pytest.raises(DomainError):
            cauchy_extended(-1, 1, (1.0,), 2.0 - 0.5j)

    def test_herglotz_sign(self):
        rng = np.random.default_rng(11)
        for _ in range(40):
            z = complex(rng.uniform(-3, 3), rng.uniform(0.01, 2.0))
            assert cauchy_poly(-1, 1, (0.1, 0.0, 1.0), z).imag > 0


class TestQuadratureOracle:
    def test_constant_density(self):
        got = cauchy_quad(lambda t: np.ones_like(t), -1, 1, 1j)
        assert got == pytest.approx(1j * math.pi / 2, abs=1e-9)

    def test_matches_closed_form(self):
        got = cauchy_quad(lambda t: t**2, -1, 1, 2j)
        assert got == pytest.approx(cauchy_poly(-1, 1, (0.0, 0.0, 1.0), 2j), abs=1e-9)

    def test_near_singular_point(self):
        z = 0.001 + 1e-6j
        got = cauchy_quad(lambda t: np.ones_like(t), -1, 1, z, rtol=1e-8)
        assert got == pytest.approx(cauchy_poly(-1, 1, (1.0,), z), rel=1e-6)

    @pytest.mark.parametrize("seed", [0, 1])
    def test_oracle_equivalence_grid(self, seed):
        rng = np.random.default_rng(seed)
        coeffs = tuple(rng.uniform(0.1, 1.0, size=3))
        for _ in range(50):
            z = complex(rng.uniform(-2, 2), rng.uniform(-1.5, 1.5))
            if abs(z.imag) < 1e-2 and -1.1 < z.real < 1.1:
                continue
            exact = cauchy_poly(-1, 1, coeffs, z)
            quad = cauchy_quad(lambda t: poly_eval(coeffs, t), -1, 1, z)
            assert abs(exact - quad) <= 1e-9 * (1 + abs(exact))


class TestJets:
    def test_first_derivative_of_log_kernel(self):
        # d/dz I0 = 1/(lo-z) - 1/(hi-z) = -2/(1-z^2) at z=i -> -1
        jet = cauchy_poly_jet(-1, 1, (1.0,), 1j, 2)
        assert jet.derivative(1) == pytest.approx(-1.0, abs=1e-14)

    def test_derivatives_match_finite_differences(self):
        coeffs = (0.5, 0.25, 1.0)
        z = 0.4 + 0.9j
        h = 1e-5
        jet = cauchy_poly_jet(-1, 1, coeffs, z, 2)
        fd1 = (cauchy_poly(-1, 1, coeffs, z + h) - cauchy_poly(-1, 1, coeffs, z - h)) / (2 * h)
        fd2 = (
            cauchy_poly(-1, 1, coeffs, z + h)
            - 2 * cauchy_poly(-1, 1, coeffs, z)
            + cauchy_poly(-1, 1, coeffs, z - h)
        ) / h**2
        assert jet.derivative(1) == pytest.approx(fd1, rel=1e-8)
        assert jet.derivative(2) == pytest.approx(fd2, rel=1e-5)


class TestFullLine:
    def test_normalized_constant(self):
        assert fullline_constant(1j, 1 / math.pi) == pytest.approx(1j, abs=1e-15)

    def test_lower_half_plane_is_conjugate(self):
        assert fullline_constant(-1j, 1 / math.pi) == pytest.approx(-1j, abs=1e-15)

    def test_constant_on_upper_half_plane(self):
        assert fullline_constant(5 + 2j, 1 / math.pi) == pytest.approx(1j, abs=1e-15)

    def test_truncated_quadrature_cross_check(self):
        # int_{-T}^{T} (1/(t-z) - t/(1+t^2)) dt -> i*pi, tail O(1/T)
        z = 1j
        T = 2e4
        ts = np.linspace(-T, T, 4_000_001)
        vals = 1.0 / (ts - z) - ts / (1.0 + ts**2)
        approx = np.trapezoid(vals, ts) / math.pi
        assert abs(approx - fullline_constant(z, 1 / math.pi)) < 1e-3

    def test_real_axis_rejected(self):
        with pytest.raises(DomainError):
            fullline_constant(1.0, 1.0)
