#!/usr/bin/env python3
"""
Tests for ball quadrature, cutoff-series classification and the log-axis fits.
"""
import math
import os
import sys
import unittest

import numpy as np

# Add parent directory to path to import modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from feffcheck_cli.core.errors import DimensionMismatch, ParameterOutOfRange
from feffcheck_cli.core.fields import Affine, Ball, Bump, Linear, RadialPower, Sum, sphere_area
from feffcheck_cli.core.fitting import fit_power_law
from feffcheck_cli.core.quadrature import (QuadratureSettings, RadialProfile, Verdict, ball_average,
                                           classify_cutoff_series, divergence_probe,
                                           integrate_ball, integrate_singular_kernel, sphere_rule)

ORIGIN = (0.0, 0.0, 0.0)


class TestSphereRule(unittest.TestCase):
    """Product rules on S^{n−1}."""

    def test_weights_sum_to_area(self):
        _, weights = sphere_rule(3, 6)
        self.assertAlmostEqual(float(weights.sum()), 4 * math.pi, places=10)
        for n in (2, 4):
            _, weights = sphere_rule(n, 8)
            self.assertAlmostEqual(float(weights.sum()) / sphere_area(n), 1.0, places=6)

    def test_directions_are_unit(self):
        dirs, _ = sphere_rule(3, 6)
        np.testing.assert_allclose(np.linalg.norm(dirs, axis=1), 1.0, atol=1e-13)

    def test_second_moment(self):
        dirs, weights = sphere_rule(3, 6)
        self.assertAlmostEqual(float(weights @ dirs[:, 0] ** 2), 4 * math.pi / 3, places=10)

    def test_circle_rule_is_exact(self):
        dirs, weights = sphere_rule(2, 3)
        self.assertAlmostEqual(float(weights.sum()), 2 * math.pi, places=12)
        self.assertAlmostEqual(float(weights @ dirs[:, 0] ** 2), math.pi, places=12)
        # no node sits on a coordinate axis
        self.assertGreater(float(np.min(np.abs(dirs))), 0.1)


class TestIntegrateBall(unittest.TestCase):
    """Closed-form integrals over balls."""

    def test_integrable_radial_pole(self):
        res = integrate_ball(RadialPower(3, 1.0, 1.5), Ball(ORIGIN, 1.0))
        self.assertTrue(res.convergent)
        self.assertAlmostEqual(res.value / (4 * math.pi / 1.5), 1.0, places=5)

    def test_bump_average(self):
        res = ball_average(Bump(3, None, 1.0, 2), Ball(ORIGIN, 1.0))
        self.assertAlmostEqual(res.value, 8.0 / 35.0, places=8)

    def test_support_shortcut(self):
        u = Bump(3, (5.0, 0.0, 0.0), 1.0, 2)
        res = integrate_ball(u, Ball(ORIGIN, 1.0))
        self.assertEqual(res.value, 0.0)
        self.assertTrue(res.convergent)

    def test_off_center_linear(self):
        ball = Ball((0.5, 0.0, 0.0), 1.0)
        res = integrate_ball(Linear(3), ball)
        self.assertTrue(res.convergent)
        self.assertAlmostEqual(res.value / (0.5 * ball.volume), 1.0, places=8)

    def test_off_center_pole(self):
        # ∫_{B(e₁/2, 1/4)} |y|^{-1} dy equals |B|/|c| by the mean value property
        ball = Ball((0.5, 0.0, 0.0), 0.25)
        res = integrate_ball(RadialPower(3, 1.0, 1.0), ball)
        self.assertAlmostEqual(res.value / (ball.volume / 0.5), 1.0, places=5)

    def test_non_integrable_power(self):
        res = integrate_ball(RadialPower(3, 1.0, 3.5), Ball(ORIGIN, 1.0))
        self.assertEqual(res.verdict, Verdict.DIVERGENT)
        self.assertTrue(math.isinf(res.value))
        self.assertAlmostEqual(res.growth_exponent, 0.5, delta=0.02)

    def test_logarithmic_divergence(self):
        res = integrate_ball(RadialPower(3, 1.0, 3.0), Ball(ORIGIN, 1.0))
        self.assertTrue(res.divergent)
        self.assertTrue(res.logarithmic)

    def test_non_integrable_powers_diverge(self):
        for a in (3.5, 4.0, 5.0):
            with self.subTest(exponent=a):
                res = divergence_probe(RadialPower(3, 1.0, a), Ball(ORIGIN, 1.0))
                self.assertEqual(res.verdict, Verdict.DIVERGENT)
                self.assertEqual(res.value, math.inf)
                self.assertAlmostEqual(res.growth_exponent, a - 3.0, delta=0.02)

    def test_cutoff_integral_over_many_decades(self):
        # ∫_{1e-8<|y|<1} |y|^{-3.5} dy = 4π·2(10⁴ − 1)
        res = RadialProfile(lambda t: t ** -3.5, 3).integrate(1.0, tol=1e-8, lower=1e-8)
        self.assertTrue(res.convergent)
        self.assertAlmostEqual(res.value / (8 * math.pi * (1e4 - 1)), 1.0, places=6)

    def test_shell_additivity(self):
        profile = RadialProfile(lambda t: (1.0 - t * t) ** 2, 3)
        whole = profile.integrate(1.0)
        inner = profile.integrate(0.5)
        shell = profile.integrate(1.0, lower=0.5)
        self.assertAlmostEqual(whole.value, 32 * math.pi / 105, places=10)
        self.assertLessEqual(abs(whole.value - inner.value - shell.value),
                             whole.abs_error_estimate + inner.abs_error_estimate
                             + shell.abs_error_estimate + 1e-12)

    def test_polar_matches_radial_reduction(self):
        # the linear term integrates to zero over a centered ball but forces polar integration
        field = Sum([Bump(3, None, 1.0, 2), Linear(3)])
        res = integrate_ball(field, Ball(ORIGIN, 1.0))
        reduced = RadialProfile(lambda t: (1.0 - t * t) ** 2, 3).integrate(1.0)
        self.assertAlmostEqual(res.value / reduced.value, 1.0, places=6)

    def test_translation_invariance(self):
        shift = (1.0, -2.0, 0.5)
        ball = Ball((0.5, 0.0, 0.0), 0.25)
        moved = Ball((1.5, -2.0, 0.5), 0.25)
        base = integrate_ball(RadialPower(3, 1.0, 1.0), ball)
        shifted = integrate_ball(Affine(RadialPower(3, 1.0, 1.0), 1.0, shift), moved)
        self.assertAlmostEqual(shifted.value / base.value, 1.0, places=5)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            integrate_ball(RadialPower(3, 1.0, 1.0), Ball((0.0, 0.0), 1.0))


class TestSingularKernel(unittest.TestCase):
    """∫_B f(y)/|x−y|^s dy."""

    def test_co_centered_kernel(self):
        # ∫_{B(0,1)} |y|^{-1}·|y|^{-1.5} dy = 4π/0.5
        res = integrate_singular_kernel(RadialPower(3, 1.0, 1.0), ORIGIN, 1.5, Ball(ORIGIN, 1.0))
        self.assertAlmostEqual(res.value / (8 * math.pi), 1.0, places=5)

    def test_infinite_exponent_rejected(self):
        with self.assertRaises(ParameterOutOfRange):
            integrate_singular_kernel(RadialPower(3, 1.0, 1.0), ORIGIN, math.inf, Ball(ORIGIN, 1.0))


class TestDivergenceClassification(unittest.TestCase):
    """Cutoff series verdicts."""

    def setUp(self):
        self.eps = [10.0 ** -k for k in range(2, 9)]

    def test_convergent_series(self):
        values = [2.0 - e for e in self.eps]
        res = classify_cutoff_series(self.eps, values, 1e-4)
        self.assertEqual(res.verdict, Verdict.CONVERGENT)
        self.assertAlmostEqual(res.value, 2.0, places=6)

    def test_power_series(self):
        values = [e ** -0.75 for e in self.eps]
        res = classify_cutoff_series(self.eps, values, 1e-4)
        self.assertEqual(res.verdict, Verdict.DIVERGENT)
        self.assertAlmostEqual(res.growth_exponent, 0.75, places=8)

    def test_log_series(self):
        values = [3.0 + 2.0 * math.log(1.0 / e) for e in self.eps]
        res = classify_cutoff_series(self.eps, values, 1e-4)
        self.assertTrue(res.divergent)
        self.assertTrue(res.logarithmic)

    def test_integrable_pole_with_short_cutoff_list(self):
        # ∫_{B(0,1)} |y|^{-2} dy = 4π; four cutoffs over three decades
        res = divergence_probe(RadialPower(3, 1.0, 2.0), Ball(ORIGIN, 1.0),
                               cutoffs=[1e-1, 1e-2, 1e-3, 1e-4])
        self.assertEqual(res.verdict, Verdict.CONVERGENT)
        self.assertAlmostEqual(res.value / (4 * math.pi), 1.0, places=6)

    def test_slowly_converging_series_is_extrapolated(self):
        eps = [1e-1, 1e-2, 1e-3, 1e-4]
        res = classify_cutoff_series(eps, [2.0 - e for e in eps], 1e-4)
        self.assertEqual(res.verdict, Verdict.CONVERGENT)
        self.assertAlmostEqual(res.value, 2.0, places=10)

    def test_series_that_turns_back_is_inconclusive(self):
        # grows like a divergent series, then jumps to a negative plateau
        values = [226.0, 716.0, 2262.0, 7922.0, 25107.0, -25.13, -25.13]
        res = classify_cutoff_series(self.eps, values, 1e-4)
        self.assertEqual(res.verdict, Verdict.INCONCLUSIVE)

    def test_mixed_increments_are_inconclusive(self):
        values = [1.0, 1.5, 1.2, 1.9, 1.4, 2.1, 1.6]
        res = classify_cutoff_series(self.eps, values, 1e-4)
        self.assertEqual(res.verdict, Verdict.INCONCLUSIVE)

    def test_probe_needs_enough_cutoffs(self):
        with self.assertRaises(ParameterOutOfRange):
            divergence_probe(RadialPower(3, 1.0, 3.5), Ball(ORIGIN, 1.0), cutoffs=[1e-2, 1e-3])

    def test_probe_without_poles_integrates(self):
        res = divergence_probe(Bump(3, None, 1.0, 2), Ball(ORIGIN, 1.0))
        self.assertAlmostEqual(res.value, 8.0 / 35.0 * 4 * math.pi / 3, places=7)


class TestFitting(unittest.TestCase):
    """Least-squares fits on log axes."""

    def test_exact_power_law(self):
        x = np.logspace(-3, 0, 7)
        fit = fit_power_law(x, 5.0 * x ** 1.25)
        self.assertAlmostEqual(fit.slope, 1.25, places=10)
        self.assertLess(fit.residual, 1e-10)

    def test_too_few_points(self):
        fit = fit_power_law([1.0], [1.0])
        self.assertTrue(math.isnan(fit.slope))


class TestSettings(unittest.TestCase):
    """QuadratureSettings from configuration sections."""

    def test_from_config(self):
        settings = QuadratureSettings.from_config({"tol_smooth": 1e-8, "cutoff_decades": [3, 7],
                                                   "unknown": 1})
        self.assertEqual(settings.tol_smooth, 1e-8)
        self.assertEqual(settings.cutoff_exponents, [3, 4, 5, 6, 7])

    def test_refined(self):
        settings = QuadratureSettings().refined(10)
        self.assertAlmostEqual(settings.tol_singular, 1e-5)


if __name__ == '__main__':
    unittest.main()
