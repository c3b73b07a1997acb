import math

import numpy as np
import pytest

from riskengine.errors import (
    DomainError,
    NoSignChangeError,
    NonFiniteObjectiveError,
)
from riskengine.numerics import (
    OptimizerOptions,
    chi_square_sf,
    find_root_bracketed,
    integrate_adaptive,
    ln_gamma_complex,
    ln_gamma_real,
    minimize_simplex,
    regularized_gamma_upper,
)


class TestLnGammaReal:
    def test_known_values(self):
        assert ln_gamma_real(1.0) == pytest.approx(0.0, abs=1e-15)
        assert ln_gamma_real(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)
        assert ln_gamma_real(5.0) == pytest.approx(math.log(24.0), rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            ln_gamma_real(0.0)
        with pytest.raises(DomainError):
            ln_gamma_real(-3.0)

    def test_recurrence(self):
        # Gamma(x+1) = x Gamma(x), in log form
        for x in np.linspace(0.5, 99.0, 60):
            lhs = ln_gamma_real(x + 1.0)
            rhs = math.log(x) + ln_gamma_real(x)
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


class TestLnGammaComplex:
    def test_real_axis_reduces(self):
        assert ln_gamma_complex(1 + 0j) == pytest.approx(0.0, abs=1e-14)
        assert ln_gamma_complex(2 + 0j) == pytest.approx(0.0, abs=1e-14)
        for x in (0.5, 1.7, 8.0, 42.0):
            assert ln_gamma_complex(complex(x, 0.0)).real == pytest.approx(
                ln_gamma_real(x), rel=1e-12, abs=1e-12
            )
            assert ln_gamma_complex(complex(x, 0.0)).imag == 0.0

    @pytest.mark.parametrize("y", [0.1, 0.5, 2.0, 10.0])
    def test_half_line_modulus_identity(self, y):
        # |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
        mod2 = math.exp(2.0 * ln_gamma_complex(complex(0.5, y)).real)
        assert mod2 == pytest.approx(math.pi / math.cosh(math.pi * y), rel=1e-10)

    def test_recurrence_complex(self):
        for z in (0.5 + 0.5j, 3.0 + 7.0j, 10.0 - 2.0j, 40.0 + 40.0j):
            lhs = ln_gamma_complex(z + 1.0)
            rhs = np.log(complex(z)) + ln_gamma_complex(z)
            assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(rhs))

    def test_domain(self):
        with pytest.raises(DomainError):
            ln_gamma_complex(complex(-1.0, 2.0))
        with pytest.raises(DomainError):
            ln_gamma_complex(complex(0.0, 1.0))


class TestRegularizedGammaUpper:
    def test_edges(self):
        assert regularized_gamma_upper(2.5, 0.0) == 1.0
        assert regularized_gamma_upper(1.0, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-13)

    def test_chi_square_one_dof(self):
        # chi-square(1) sf(x) = erfc(sqrt(x/2))
        for x in (0.1, 1.0, 3.841, 10.0):
            assert chi_square_sf(x, 1) == pytest.approx(
                math.erfc(math.sqrt(x / 2.0)), rel=1e-12
            )
        assert chi_square_sf(3.841, 1) == pytest.approx(0.05, abs=1e-4)

    def test_chi_square_two_dof_closed_form(self):
        for x in (0.5, 2.0, 264.0):
            assert chi_square_sf(x, 2) == pytest.approx(math.exp(-x / 2.0), rel=1e-12)

    def test_monotone_decreasing_in_x(self):
        xs = np.linspace(0.0, 40.0, 200)
        qs = [regularized_gamma_upper(3.0, x) for x in xs]
        assert all(a >= b for a, b in zip(qs, qs[1:]))
        assert qs[0] == 1.0
        assert qs[-1] < 1e-8

    def test_domain(self):
        with pytest.raises(DomainError):
            regularized_gamma_upper(0.0, 1.0)
        with pytest.raises(DomainError):
            regularized_gamma_upper(1.0, -0.5)


class TestIntegrateAdaptive:
    def test_polynomial(self):
        assert integrate_adaptive(lambda x: x * x, 0.0, 1.0, tol=1e-12) == pytest.approx(
            1.0 / 3.0, abs=1e-12
        )

    def test_sine(self):
        assert integrate_adaptive(math.sin, 0.0, math.pi, tol=1e-12) == pytest.approx(
            2.0, abs=1e-12
        )

    def test_normal_mass(self):
        pdf = lambda x: math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
        mass = integrate_adaptive(pdf, -8.0, 8.0, tol=1e-12)
        assert mass == pytest.approx(math.erf(8.0 / math.sqrt(2.0)), abs=1e-10)

    def test_bad_interval(self):
        with pytest.raises(DomainError):
            integrate_adaptive(math.sin, 1.0, 1.0)


class TestFindRootBracketed:
    def test_linear(self):
        assert find_root_bracketed(lambda x: x - 2.0, 0.0, 5.0) == pytest.approx(2.0, abs=1e-12)

    def test_sqrt2(self):
        root = find_root_bracketed(lambda x: x * x - 2.0, 0.0, 2.0)
        assert root == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_no_sign_change(self):
        with pytest.raises(NoSignChangeError):
            find_root_bracketed(lambda x: x * x + 1.0, -1.0, 1.0)

    def test_endpoint_root(self):
        assert find_root_bracketed(lambda x: x, 0.0, 1.0) == 0.0


class TestMinimizeSimplex:
    def test_rosenbrock(self):
        def rosen(v):
            return 100.0 * (v[1] - v[0] ** 2) ** 2 + (1.0 - v[0]) ** 2

        opts = OptimizerOptions(max_iterations=5000, tolerance_f=1e-14, tolerance_x=1e-10)
        result = minimize_simplex(rosen, [-1.2, 1.0], opts)
        assert result.converged
        assert result.value == pytest.approx(0.0, abs=1e-6)
        assert np.allclose(result.argmin, [1.0, 1.0], atol=1e-4)

    def test_quadratic(self):
        result = minimize_simplex(
            lambda v: float(np.sum((v - 3.0) ** 2)),
            [0.0, 0.0],
            OptimizerOptions(max_iterations=4000, tolerance_f=1e-16, tolerance_x=1e-10),
        )
        assert result.value < 1e-8
        assert np.allclose(result.argmin, 3.0, atol=1e-4)

    def test_nan_at_start(self):
        with pytest.raises(NonFiniteObjectiveError):
            minimize_simplex(lambda v: float("nan"), [1.0])

    def test_inf_at_start(self):
        with pytest.raises(NonFiniteObjectiveError):
            minimize_simplex(lambda v: math.inf, [1.0])

    def test_never_worse_than_start(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = rng.normal(size=4)
            center = rng.normal(size=4)
            x0 = rng.normal(size=4) * 3.0

            def f(v):
                return float(np.sum(a * a * (v - center) ** 2) + math.sin(v[0]))

            result = minimize_simplex(f, x0, OptimizerOptions(max_iterations=200))
            assert result.value <= f(x0) + 1e-15

    def test_infinite_penalty_regions(self):
        # +inf outside the unit box acts as a hard constraint
        def f(v):
            if np.any(np.abs(v) > 1.0):
                return math.inf
            return float((v[0] - 0.4) ** 2 + (v[1] + 0.2) ** 2)

        result = minimize_simplex(f, [0.0, 0.0], OptimizerOptions(max_iterations=2000))
        assert np.allclose(result.argmin, [0.4, -0.2], atol=1e-5)

    def test_options_validation(self):
        with pytest.raises(DomainError):
            OptimizerOptions(max_iterations=0)
        with pytest.raises(DomainError):
            OptimizerOptions(tolerance_f=0.0)
        with pytest.raises(DomainError):
            OptimizerOptions(tolerance_x=-1.0)
