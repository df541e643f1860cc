import math

import numpy as np
import pytest

from debranges.numerics import (
    BracketError,
    QuadratureScheme,
    golden_max,
    integrate,
    log_gamma,
    monotone_solve,
    sup_on_window,
)


class TestIntegrate:
    def test_rational_square_whole_line(self):
        # int dx / (x^2+1)^2 = pi/2
        res = integrate(lambda x: 1.0 / (x * x + 1.0) ** 2, None)
        assert res.converged
        assert abs(res.value - math.pi / 2) <= 1e-12

    def test_cos_squared(self):
        res = integrate(lambda x: np.cos(x) ** 2, (-math.pi / 2, math.pi / 2))
        assert abs(res.value - math.pi / 2) <= 1e-13

    def test_cauchy_whole_line(self):
        res = integrate(lambda x: 1.0 / (x * x + 1.0), None)
        assert abs(res.value - math.pi) <= 1e-12

    def test_endpoint_kink_with_grading(self):
        # int_0^1 sqrt(x) dx = 2/3; the kink at 0 needs the graded panels
        res = integrate(lambda x: np.sqrt(np.abs(x)), (0.0, 1.0), singular_points=(0.0,))
        assert abs(res.value - 2.0 / 3.0) <= 1e-12

    def test_interior_kink(self):
        # int_{-1}^{1} |x| dx = 1
        res = integrate(lambda x: np.abs(x), (-1.0, 1.0), singular_points=(0.0,))
        assert abs(res.value - 1.0) <= 1e-13

    def test_nonconvergence_flag(self):
        rng = np.random.default_rng(7)
        scheme = QuadratureScheme(panels=2, nodes_per_panel=2, max_refinements=1,
                                  target_rel_error=1e-15)
        res = integrate(lambda x: np.cos(50 * x) ** 2 / (1 + x * x), (-4, 4), scheme)
        assert not res.converged

    def test_invalid_domain(self):
        with pytest.raises(ValueError):
            integrate(lambda x: x, (1.0, 0.0))


class TestLogGamma:
    def test_known_values(self):
        assert log_gamma(1.0) == 0.0
        assert abs(log_gamma(0.5) - math.log(math.sqrt(math.pi))) <= 1e-14
        assert abs(log_gamma(6.0) - math.log(120.0)) <= 1e-13

    def test_recurrence_randomized(self, rng):
        # log Gamma(x+1) = log x + log Gamma(x)
        for x in rng.uniform(0.5, 50.0, size=200):
            lhs = log_gamma(x + 1.0)
            rhs = math.log(x) + log_gamma(x)
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))

    def test_domain_error(self):
        with pytest.raises(ValueError):
            log_gamma(0.0)
        with pytest.raises(ValueError):
            log_gamma(-3.2)


class TestMonotoneSolve:
    def test_arctan(self):
        root = monotone_solve(lambda x: 2 * math.atan(x), math.pi / 2, (0.0, 5.0))
        assert abs(root - 1.0) <= 1e-12

    def test_linear_phase(self):
        # phi(x) = 2 pi x hits pi at exactly 1/2
        root = monotone_solve(lambda x: 2 * math.pi * x, math.pi, (0.0, 2.0),
                              dg=lambda x: 2 * math.pi)
        assert abs(root - 0.5) <= 1e-13

    def test_identity(self):
        assert abs(monotone_solve(lambda x: x, 0.3, (0.0, 1.0)) - 0.3) <= 1e-13

    def test_reevaluation_lands_on_target(self, rng):
        g = lambda x: x ** 3 + 2.0 * x
        for _ in range(50):
            target = float(rng.uniform(-20, 20))
            root = monotone_solve(g, target, (-3.0, 3.0), tol=1e-14)
            assert abs(g(root) - target) <= 1e-10 * (1 + abs(target))

    def test_bracket_violation(self):
        with pytest.raises(BracketError):
            monotone_solve(lambda x: x, 10.0, (0.0, 1.0))


class TestSupOnWindow:
    def test_cos(self):
        v, x = sup_on_window(np.cos, (-2.0, 2.0))
        assert abs(v - 1.0) <= 1e-12
        assert abs(x) <= 1e-5

    def test_ratio_of_polynomials(self):
        # |x^2-1| / (x^2+1) <= 1 with equality exactly at 0 on this window
        h = lambda x: np.abs(x * x - 1) / (x * x + 1)
        v, x = sup_on_window(h, (-5.0, 5.0), coarse=2048)
        assert abs(v - 1.0) <= 1e-10
        assert abs(x) <= 1e-4

    def test_bump(self):
        v, x = sup_on_window(lambda t: 1.0 / (1.0 + t * t), (-1.0, 1.0))
        assert abs(v - 1.0) <= 1e-12

    def test_golden_max_quadratic(self):
        v, x = golden_max(lambda t: -(t - 0.37) ** 2, 0.0, 1.0)
        assert abs(x - 0.37) <= 1e-7
