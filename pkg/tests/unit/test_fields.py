#!/usr/bin/env python3
"""
Tests for the scalar field catalog.
"""
import math
import os
import sys
import unittest

import numpy as np

# Add parent directory to path to import modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from feffcheck_cli.core.errors import ConfigError, DimensionMismatch, ParameterOutOfRange, SingularPoint
from feffcheck_cli.core.fields import (Ball, Bump, ExampleV, ExampleW, Linear, LogOf, RadialPower,
                                       Truncation, ball_volume, build_field, dilate, field_params,
                                       finite_difference_gradient, finite_difference_laplacian,
                                       make_example_pair, sphere_area, translate)


class TestGeometry(unittest.TestCase):
    """Sphere areas, ball volumes and ball predicates."""

    def test_sphere_area(self):
        self.assertAlmostEqual(sphere_area(2), 2 * math.pi, places=12)
        self.assertAlmostEqual(sphere_area(3), 4 * math.pi, places=12)
        self.assertAlmostEqual(sphere_area(4), 2 * math.pi ** 2, places=12)

    def test_ball_volume(self):
        self.assertAlmostEqual(ball_volume(3, 2.0), 4 * math.pi / 3 * 8, places=10)

    def test_ball_rejects_bad_radius(self):
        with self.assertRaises(ParameterOutOfRange):
            Ball((0.0, 0.0, 0.0), 0.0)

    def test_contains_ball(self):
        outer = Ball((0.0, 0.0, 0.0), 2.0)
        self.assertTrue(outer.contains_ball(Ball((1.0, 0.0, 0.0), 1.0)))
        self.assertFalse(outer.contains_ball(Ball((1.5, 0.0, 0.0), 1.0)))


class TestRadialPower(unittest.TestCase):
    """Closed-form derivatives of c|y − x₀|^{−a}."""

    def setUp(self):
        self.f = RadialPower(3, 2.0, 1.5)
        self.point = np.array([0.3, -0.2, 0.4])

    def test_values(self):
        r = float(np.linalg.norm(self.point))
        self.assertAlmostEqual(self.f.eval(self.point), 2.0 * r ** -1.5, places=12)

    def test_gradient_matches_finite_difference(self):
        fd = finite_difference_gradient(self.f, self.point, 1e-6)
        np.testing.assert_allclose(self.f.gradient(self.point), fd, rtol=1e-6)

    def test_laplacian_matches_finite_difference(self):
        fd = finite_difference_laplacian(self.f, self.point, 1e-4)
        self.assertAlmostEqual(self.f.laplacian(self.point) / fd, 1.0, places=5)

    def test_evaluation_at_pole_raises(self):
        with self.assertRaises(SingularPoint):
            self.f.eval([0.0, 0.0, 0.0])

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            self.f.eval([0.1, 0.2])

    def test_pole_structure(self):
        poles = self.f.poles
        self.assertEqual(len(poles), 1)
        self.assertEqual(poles[0].exponent, 1.5)
        self.assertTrue(self.f.is_radial_about((0.0, 0.0, 0.0)))


class TestExamplePair(unittest.TestCase):
    """The counterexample pair w, V."""

    def test_potential_at_unit_sphere(self):
        self.assertAlmostEqual(ExampleV(3).eval([1.0, 0.0, 0.0]), 5.0, places=12)
        self.assertAlmostEqual(ExampleV(4).eval([0.0, 1.0, 0.0, 0.0]), 7.0, places=12)

    def test_sign_change_radii(self):
        low, high = ExampleV(3).sign_change_radii
        self.assertAlmostEqual(low, 1.0 / 6.0, places=14)
        self.assertAlmostEqual(high, 0.5, places=14)
        for t in (low, high):
            self.assertAlmostEqual(float(ExampleV(3).profile(t)), 0.0, places=8)

    def test_lower_bound_radius(self):
        for n in (3, 4, 5):
            V = ExampleV(n)
            self.assertAlmostEqual(V.lower_bound_radius, 1.0 / (n + 5))
            t = np.linspace(1e-3, V.lower_bound_radius, 20)
            self.assertTrue(np.all(V.profile(t) >= 3 * (n + 1) * t ** -2 * (1 - 1e-12)))

    def test_weight_value(self):
        w = ExampleW(3)
        self.assertAlmostEqual(w.eval([0.5, 0.0, 0.0]), 16 * math.exp(-2.0), places=12)
        self.assertEqual(w.eval([0.0, 0.0, 0.0]), 1.0)

    def test_hessian_diagonal_sums_to_laplacian(self):
        w = ExampleW(3)
        x = np.array([0.2, 0.3, -0.1])
        self.assertAlmostEqual(float(np.sum(w.hessian_diagonal(x))) / w.laplacian(x), 1.0, places=10)

    def test_pair_needs_three_dimensions(self):
        with self.assertRaises(ParameterOutOfRange):
            make_example_pair(2)


class TestCompositeFields(unittest.TestCase):
    """Bumps, affine maps, truncation and logarithms."""

    def test_bump_values(self):
        u = Bump(3, None, 1.0, 2)
        self.assertEqual(u.eval([0.0, 0.0, 0.0]), 1.0)
        self.assertAlmostEqual(u.eval([0.5, 0.0, 0.0]), 0.5625, places=14)
        self.assertEqual(u.eval([1.5, 0.0, 0.0]), 0.0)

    def test_bump_power_below_two_raises(self):
        with self.assertRaises(ParameterOutOfRange):
            Bump(3, None, 1.0, 1.5)

    def test_dilate_and_translate(self):
        u = Bump(3, None, 1.0, 2)
        self.assertAlmostEqual(dilate(u, 2.0).eval([1.0, 0.0, 0.0]), u.eval([0.5, 0.0, 0.0]), places=14)
        moved = translate(u, [1.0, 0.0, 0.0])
        self.assertAlmostEqual(moved.eval([1.5, 0.0, 0.0]), u.eval([0.5, 0.0, 0.0]), places=14)

    def test_truncation(self):
        f = Truncation(RadialPower(3, 1.0, 1.0), Ball((0.0, 0.0, 0.0), 1.0))
        self.assertAlmostEqual(f.eval([0.5, 0.0, 0.0]), 2.0, places=14)
        self.assertEqual(f.eval([2.0, 0.0, 0.0]), 0.0)

    def test_log_of_weight_has_log_pole(self):
        g = LogOf(RadialPower(3, 1.0, -1.0))
        poles = g.poles
        self.assertEqual(len(poles), 1)
        self.assertTrue(poles[0].logarithmic)

    def test_linear(self):
        y1 = Linear(3)
        self.assertEqual(y1.eval([0.25, 4.0, 5.0]), 0.25)
        self.assertTrue(y1.has_constant_gradient)


class TestBuildField(unittest.TestCase):
    """Declarative field records."""

    def test_tokens(self):
        params = field_params(3, 1.5, 1.5)
        f = build_field({"kind": "RadialPower", "exponent": "inv_p"}, 3, params)
        self.assertAlmostEqual(f.exponent, 2.0 / 3.0)

    def test_nested_record(self):
        record = {"kind": "Truncation", "radius": 1.0, "of": {"kind": "ExampleV"}}
        f = build_field(record, 3)
        self.assertIsInstance(f, Truncation)

    def test_unknown_kind(self):
        with self.assertRaises(ConfigError):
            build_field({"kind": "Nonsense"}, 3)

    def test_unknown_token(self):
        with self.assertRaises(ConfigError):
            build_field({"kind": "RadialPower", "exponent": "beta"}, 3, field_params(3, 1.0, 1.0))

    def test_invalid_parameter_becomes_config_error(self):
        with self.assertRaises(ConfigError):
            build_field({"kind": "Bump", "power": 1}, 3)


if __name__ == '__main__':
    unittest.main()
