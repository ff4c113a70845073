#!/usr/bin/env python3
"""
Tests for the Fefferman inequality harness, the sub-representation check
and the kernel composition bound.
"""
import math
import os
import sys
import unittest

import numpy as np
from scipy.special import beta as beta_fn

# Add parent directory to path to import modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from feffcheck_cli.core.errors import PairTooClose, ParameterOutOfRange
from feffcheck_cli.core.fields import Ball, Bump, RadialPower, constant
from feffcheck_cli.core.growth import GrowthFunction
from feffcheck_cli.core.inequalities import (build_catalog, catalog_max, catalog_support,
                                             default_pairs, fefferman_morrey, fefferman_stummel,
                                             kernel_lemma_check, riesz_tail, sample_in_ball,
                                             subrepresentation_check, translated_pair)

ORIGIN = (0.0, 0.0, 0.0)
MORREY_NORM = (4 * math.pi / 0.75) ** (2.0 / 3.0)


class TestFeffermanMorrey(unittest.TestCase):
    """∫|u|^α|V| against ‖V‖·∫|∇u|^α for the unit bump."""

    def setUp(self):
        self.u = Bump(3, None, 1.0, 2)
        self.V = RadialPower(3, 1.0, 1.5)
        self.phi = GrowthFunction.power(0.75)

    def test_closed_form_instance(self):
        report = fefferman_morrey(self.u, self.V, 1.5, 1.5, self.phi, norm=MORREY_NORM, check_phi=False)
        lhs = 2 * math.pi * beta_fn(0.75, 4.0)
        gradient = 16 * math.pi * beta_fn(2.25, 2.5)
        self.assertAlmostEqual(report.lhs / lhs, 1.0, places=4)
        self.assertAlmostEqual(report.rhs_factors["gradient_integral"] / gradient, 1.0, places=4)
        self.assertAlmostEqual(report.ratio, lhs / (MORREY_NORM * gradient), places=4)
        self.assertFalse(report.inconclusive)

    def test_zero_test_function(self):
        report = fefferman_morrey(constant(3, 0.0), self.V, 1.5, 1.5, self.phi, norm=MORREY_NORM,
                                  check_phi=False)
        self.assertEqual(report.ratio, 0.0)

    def test_parameter_range(self):
        with self.assertRaises(ParameterOutOfRange):
            fefferman_morrey(self.u, self.V, 1.5, 2.5, self.phi, norm=MORREY_NORM, check_phi=False)
        with self.assertRaises(ParameterOutOfRange):
            fefferman_morrey(self.u, self.V, 0.5, 1.5, self.phi, norm=MORREY_NORM, check_phi=False)


class TestFeffermanStummel(unittest.TestCase):
    """∫_{B₀}|V|^p|u|^α against η^p·∫|∇u|^α."""

    def setUp(self):
        self.u = Bump(3, None, 1.0, 2)
        self.W = RadialPower(3, 1.0, 2.0 / 3.0)

    def test_closed_form_instance(self):
        # ∫|y|^{-1}(1 − |y|²)³ dy = π/2 and η^p = 8π on the unit ball
        report = fefferman_stummel(self.u, self.W, 1.5, 1.5, Ball(ORIGIN, 1.0))
        gradient = 16 * math.pi * beta_fn(2.25, 2.5)
        self.assertAlmostEqual(report.lhs / (math.pi / 2), 1.0, places=4)
        self.assertAlmostEqual(report.rhs_factors["eta_p"] / (8 * math.pi), 1.0, places=4)
        self.assertAlmostEqual(report.ratio, (math.pi / 2) / (8 * math.pi * gradient), places=4)

    def test_translation_invariance(self):
        base = fefferman_stummel(self.u, self.W, 1.5, 1.5, Ball(ORIGIN, 1.0))
        u, W, ball = translated_pair(self.u, self.W, Ball(ORIGIN, 1.0), [0.5, 0.0, 0.0])
        moved = fefferman_stummel(u, W, 1.5, 1.5, ball)
        self.assertAlmostEqual(moved.ratio / base.ratio, 1.0, places=3)

    def test_support_must_lie_in_ball(self):
        with self.assertRaises(ParameterOutOfRange):
            fefferman_stummel(self.u, self.W, 1.5, 1.5, Ball(ORIGIN, 0.5))

    def test_alpha_range(self):
        with self.assertRaises(ParameterOutOfRange):
            fefferman_stummel(self.u, self.W, 2.5, 1.5, Ball(ORIGIN, 1.0), eta=1.0)


class TestSubrepresentation(unittest.TestCase):
    """|u(x) − u_B| against the first-order Riesz potential of |∇u|."""

    def test_center_of_bump(self):
        report = subrepresentation_check(Bump(3, None, 1.0, 2), Ball(ORIGIN, 1.0),
                                         sample_points=[ORIGIN])
        self.assertAlmostEqual(report.witness["ball_average"], 8.0 / 35.0, places=7)
        self.assertAlmostEqual(report.ratio, (27.0 / 35.0) / (4 * math.pi), places=5)
        self.assertEqual(report.parameters["evaluated"], 1)
        self.assertEqual(len(report.witness["per_point"]), 1)

    def test_sample_in_ball(self):
        points = sample_in_ball(Ball(ORIGIN, 2.0), 50, seed=3)
        self.assertEqual(points.shape, (50, 3))
        self.assertTrue(np.all(np.linalg.norm(points, axis=1) <= 2.0))
        np.testing.assert_array_equal(points, sample_in_ball(Ball(ORIGIN, 2.0), 50, seed=3))


class TestKernelLemma(unittest.TestCase):
    """Two-pole kernel composition."""

    def test_bounded_by_whole_space_value(self):
        ball = Ball(ORIGIN, 1.0)
        pairs = [((-0.5, 0.0, 0.0), (0.5, 0.0, 0.0)), ((0.0, 0.2, 0.0), (0.0, -0.3, 0.1))]
        report = kernel_lemma_check(3, 2.0, ball, pairs)
        self.assertGreater(report.ratio, 0.0)
        self.assertLess(report.ratio, math.pi ** 3)
        self.assertEqual(report.parameters["pairs"], 2)

    def test_close_pair(self):
        with self.assertRaises(PairTooClose):
            kernel_lemma_check(3, 2.0, Ball(ORIGIN, 1.0), [(ORIGIN, (1e-5, 0.0, 0.0))])

    def test_alpha_range(self):
        with self.assertRaises(ParameterOutOfRange):
            kernel_lemma_check(3, 1.0, Ball(ORIGIN, 1.0), [])

    def test_points_outside_ball(self):
        with self.assertRaises(ParameterOutOfRange):
            kernel_lemma_check(3, 2.0, Ball(ORIGIN, 1.0), [(ORIGIN, (2.0, 0.0, 0.0))])

    def test_default_pairs(self):
        pairs = default_pairs(Ball(ORIGIN, 1.0), count=4, seed=0)
        self.assertGreaterEqual(len(pairs), 2)
        np.testing.assert_allclose(pairs[0][0], [-0.5, 0.0, 0.0])


class TestCatalog(unittest.TestCase):
    """The bump test-function family."""

    def test_size(self):
        catalog = build_catalog(3, (2, 3), (0.25, 1.0, 4.0), (0.0, 1.0, -1.0))
        self.assertEqual(len(catalog), 2 * 3 * 3 + 3)

    def test_support(self):
        catalog = build_catalog(3, (2,), (1.0,), (0.0, 1.0))
        ball = catalog_support(catalog)
        for entry in catalog:
            self.assertTrue(ball.contains_ball(entry.field.support_ball()))

    def test_catalog_max(self):
        catalog = build_catalog(3, (2,), (0.5, 1.0), (0.0,))
        summary = catalog_max("support_radius", catalog,
                              lambda f, s: _radius_report(f))
        self.assertEqual(summary.max_ratio, 1.0)
        self.assertIn("R=1", summary.witness)


class TestRieszTail(unittest.TestCase):
    """Decay-based tail bounds."""

    def test_compact_support_has_no_tail(self):
        self.assertEqual(riesz_tail(Bump(3, None, 1.0, 2), 10.0), 0.0)

    def test_slow_decay_has_infinite_tail(self):
        self.assertEqual(riesz_tail(RadialPower(3, 1.0, 0.5), 10.0), math.inf)

    def test_power_tail(self):
        # σ·R^{1−a}/(a − 1) for |y|^{-a}
        self.assertAlmostEqual(riesz_tail(RadialPower(3, 1.0, 2.0), 10.0), 4 * math.pi / 10.0, places=10)


def _radius_report(f):
    from feffcheck_cli.core.inequalities import InequalityReport
    radius = f.support_ball().radius
    return InequalityReport("support_radius", {}, radius, {"unit": 1.0}, radius, {})


if __name__ == '__main__':
    unittest.main()
