#!/usr/bin/env python3
"""
Tests for Stummel moduli, modulus curves and class membership.
"""
import math
import os
import sys
import unittest

import numpy as np

# Add parent directory to path to import modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from feffcheck_cli.core.errors import ParameterOutOfRange
from feffcheck_cli.core.fields import RadialPower
from feffcheck_cli.core.stummel import (Membership, ModulusCurve, ModulusSample, StummelSettings,
                                        classify, classify_curve, dyadic_grid, modulus_curve,
                                        stummel_modulus)

ORIGIN = (0.0, 0.0, 0.0)


class TestDyadicGrid(unittest.TestCase):
    """r_max·2^{−k} grids."""

    def test_grid(self):
        grid = dyadic_grid(0.1, 1.0)
        np.testing.assert_allclose(grid, [0.125, 0.25, 0.5, 1.0])

    def test_invalid(self):
        with self.assertRaises(ParameterOutOfRange):
            dyadic_grid(1.0, 1.0)

    def test_settings_grid(self):
        settings = StummelSettings.from_config({"r_min": 0.2, "r_max": 0.8})
        np.testing.assert_allclose(settings.grid(), [0.2, 0.4, 0.8])


class TestStummelModulus(unittest.TestCase):
    """η_{α,p}V(r) for radial powers."""

    def test_finite_modulus(self):
        # |x|^{-2/3}, α = p = 1.5: ∫_{B(0,1)} |y|^{-1}|y|^{-1.5} dy = 8π
        sample = stummel_modulus(RadialPower(3, 1.0, 2.0 / 3.0), 1.5, 1.5, 1.0)
        self.assertFalse(sample.divergent)
        self.assertAlmostEqual(sample.value / (8 * math.pi) ** (2.0 / 3.0), 1.0, places=5)
        self.assertEqual(sample.witness, ORIGIN)

    def test_divergent_modulus(self):
        # |x|^{-1.5}: the centered integrand behaves like t^{-3.75}
        sample = stummel_modulus(RadialPower(3, 1.0, 1.5), 1.5, 1.5, 1.0)
        self.assertTrue(sample.divergent)
        self.assertEqual(sample.value, math.inf)
        self.assertAlmostEqual(sample.growth_exponent, 0.75, delta=0.02)

    def test_weaker_kernel_gives_smaller_modulus(self):
        # |x|^{-1} at r = 1/2: η = 4π·(1/2)^{α-1}/(α-1), nonincreasing in α
        V = RadialPower(3, 1.0, 1.0)
        alphas = [1.5, 2.0, 2.5, 3.0]
        values = [stummel_modulus(V, a, 1.0, 0.5).value for a in alphas]
        for a, value in zip(alphas, values):
            self.assertAlmostEqual(value / (4 * math.pi * 0.5 ** (a - 1) / (a - 1)), 1.0, places=5)
        for before, after in zip(values, values[1:]):
            self.assertLessEqual(after, before)

    def test_parameter_checks(self):
        V = RadialPower(3, 1.0, 1.0)
        with self.assertRaises(ParameterOutOfRange):
            stummel_modulus(V, 0.0, 1.0, 1.0)
        with self.assertRaises(ParameterOutOfRange):
            stummel_modulus(V, 1.0, 0.5, 1.0)
        with self.assertRaises(ParameterOutOfRange):
            stummel_modulus(V, 1.0, 1.0, -1.0)


class TestClassification(unittest.TestCase):
    """Membership verdicts."""

    def test_power_law_modulus_is_tilde_only(self):
        # η(r) ~ r^{1/3} drops by far less than three decades over the grid
        result = classify(RadialPower(3, 1.0, 2.0 / 3.0), 1.5, 1.5)
        self.assertEqual(result.membership, Membership.IN_S_TILDE_ONLY)
        self.assertAlmostEqual(result.curve.small_r_slope, 1.0 / 3.0, places=3)
        self.assertTrue(result.curve.monotone)

    def test_fast_decay_is_in_s(self):
        # |x|^{-1/2} with α = 2, p = 1: η(r) ~ r^{3/2}
        result = classify(RadialPower(3, 1.0, 0.5), 2.0, 1.0)
        self.assertEqual(result.membership, Membership.IN_S)
        self.assertAlmostEqual(result.curve.small_r_slope, 1.5, places=3)

    def test_divergent_is_not_in_s_tilde(self):
        result = classify(RadialPower(3, 1.0, 2.5), 1.0, 1.0, r_grid=[0.25, 0.5, 1.0])
        self.assertEqual(result.membership, Membership.NOT_IN_S_TILDE)
        self.assertTrue(result.curve.all_divergent)

    def test_vanishing_curve(self):
        curve = ModulusCurve(1.0, 1.0, 3, [ModulusSample(0.5, 0.0), ModulusSample(1.0, 0.0)])
        self.assertEqual(classify_curve(curve).membership, Membership.IN_S)

    def test_inconclusive_sample(self):
        curve = ModulusCurve(1.0, 1.0, 3, [ModulusSample(0.5, 1.0, inconclusive=True),
                                           ModulusSample(1.0, 2.0)])
        self.assertEqual(classify_curve(curve).membership, Membership.INCONCLUSIVE)

    def test_doubling_constant_of_power_law(self):
        curve = modulus_curve(RadialPower(3, 1.0, 2.0 / 3.0), 1.5, 1.5, r_grid=[0.25, 0.5, 1.0])
        self.assertAlmostEqual(curve.doubling_constant, 2.0 ** (1.0 / 3.0), places=4)


if __name__ == '__main__':
    unittest.main()
