#!/usr/bin/env python3
"""
Integration tests for the unique-continuation counterexample: the PDE
identity, the mass formula, vanishing, classification of V and the BMO
blow-up of log w.
"""
import math
import os
import sys
import unittest

# Add parent directory to path to import modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from feffcheck_cli.core.counterexample import (bmo_blowup_scan, classify_potential, exact_mass,
                                               lower_bound_probe, verify_mass_formula,
                                               verify_pde_residual, verify_vanishing)
from feffcheck_cli.core.errors import ParameterOutOfRange
from feffcheck_cli.core.fields import sphere_area
from feffcheck_cli.core.maximal_bmo import SubballSampler
from feffcheck_cli.core.quadrature import Verdict
from feffcheck_cli.core.stummel import Membership


class TestPdeIdentity(unittest.TestCase):
    """−Δw + Vw = 0 on the punctured unit ball."""

    def test_residual_in_three_dimensions(self):
        report = verify_pde_residual(3, count=30, seed=1)
        self.assertTrue(report["passed"])
        self.assertLessEqual(report["max_residual"], 1e-12)
        self.assertEqual(report["points"], 30)
        self.assertEqual(report["evaluated"] + report["skipped_near_zero_spheres"], 30)

    def test_residual_in_four_dimensions(self):
        self.assertTrue(verify_pde_residual(4, count=20)["passed"])

    def test_explicit_points(self):
        report = verify_pde_residual(3, sample_points=[[0.3, 0.0, 0.0], [0.0, 0.8, 0.1]])
        self.assertEqual(report["evaluated"], 2)
        self.assertTrue(report["passed"])

    def test_points_near_zero_sphere_are_skipped(self):
        # V vanishes on |x| = 1/2 for n = 3
        report = verify_pde_residual(3, sample_points=[[0.5, 0.0, 0.0]])
        self.assertEqual(report["skipped_near_zero_spheres"], 1)

    def test_points_out_of_range(self):
        with self.assertRaises(ParameterOutOfRange):
            verify_pde_residual(3, sample_points=[[0.01, 0.0, 0.0]])
        with self.assertRaises(ParameterOutOfRange):
            verify_pde_residual(3, sample_points=[[1.0, 0.0, 0.0]])


class TestMass(unittest.TestCase):
    """∫_{B(0,r)} w = σ e^{−1/r}."""

    def test_exact_mass(self):
        self.assertAlmostEqual(exact_mass(3, 0.5), 4 * math.pi * math.exp(-2.0), places=14)
        self.assertAlmostEqual(exact_mass(4, 0.5), sphere_area(4) * math.exp(-2.0), places=14)

    def test_quadrature_matches(self):
        report = verify_mass_formula(3, [0.1, 0.5, 0.9])
        self.assertTrue(report["passed"])
        self.assertAlmostEqual(report["constant"], 4 * math.pi, places=12)
        self.assertEqual(len(report["rows"]), 3)

    def test_radius_range(self):
        with self.assertRaises(ParameterOutOfRange):
            verify_mass_formula(3, [1.0])


class TestVanishing(unittest.TestCase):
    """w vanishes to every tested order at the origin."""

    def test_vanishes_to_order_ten(self):
        report = verify_vanishing(3)
        self.assertEqual(report.vanishes_to_order, 10.0)
        self.assertEqual(report.verdict, "VanishesToOrder(10)")


class TestClassifyPotential(unittest.TestCase):
    """Stummel classification of V along α."""

    def test_membership_by_alpha(self):
        rows = classify_potential(3, [1.5, 5.0])
        low, high = rows
        self.assertEqual(low["membership"], Membership.NOT_IN_S_TILDE.value)
        self.assertTrue(low["matches"])
        self.assertIn("lower_bound_probe", low)
        self.assertEqual(high["membership"], Membership.IN_S.value)
        self.assertTrue(high["matches"])
        self.assertAlmostEqual(high["small_r_slope"], 1.0, delta=0.05)

    def test_logarithmic_case_is_observational(self):
        row = classify_potential(3, [4.0])[0]
        self.assertIsNone(row["matches"])
        self.assertTrue(row["logarithmic"])

    def test_lower_bound_diverges(self):
        bound = lower_bound_probe(3, 1.5)
        self.assertAlmostEqual(bound["radius"], 1.0 / 8.0)
        self.assertEqual(bound["verdict"], Verdict.DIVERGENT.value)
        self.assertAlmostEqual(bound["growth_exponent"], 0.5, delta=0.02)


class TestBmoBlowup(unittest.TestCase):
    """log(w + δ) loses its BMO bound as δ → 0."""

    def test_scan(self):
        sampler = SubballSampler(centers_per_axis=2, radii=3)
        report = bmo_blowup_scan(3, [1e-1, 1e-2, 1e-3], sampler=sampler)
        self.assertTrue(report["strictly_increasing"])
        self.assertTrue(report["doubling_blows_up"])
        for row in report["doubling"]:
            self.assertAlmostEqual(row["ratio"] / row["exact"], 1.0, places=4)


if __name__ == '__main__':
    unittest.main()
