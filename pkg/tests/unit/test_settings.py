#!/usr/bin/env python3
"""
Tests for configuration loading, overrides and validation.
"""
import json
import os
import sys
import tempfile
import unittest
from unittest.mock import patch

# Add parent directory to path to import modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../..')))

from feffcheck_cli.config.constants import default_config
from feffcheck_cli.config.settings import (apply_overrides, get_config_path, load_config, merge_config,
                                           refine_config, resolve_config, validate_config)
from feffcheck_cli.core.errors import ConfigError


class TestLoadConfig(unittest.TestCase):
    """Defaults, files and the environment."""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.temp_dir.name, "config.json")

    def tearDown(self):
        self.temp_dir.cleanup()

    def _write(self, data):
        with open(self.path, "w") as f:
            json.dump(data, f)

    @patch.dict(os.environ, {}, clear=False)
    def test_defaults_validate(self):
        os.environ.pop("FEFFCHECK_CONFIG", None)
        config = resolve_config()
        self.assertEqual(config["dimension"], 3)
        self.assertEqual(config["alpha"], 1.5)

    def test_file_is_merged(self):
        self._write({"alpha": 1.2, "quadrature": {"tol_smooth": 1e-7}})
        config = load_config(self.path)
        self.assertEqual(config["alpha"], 1.2)
        self.assertEqual(config["quadrature"]["tol_smooth"], 1e-7)
        # untouched keys of a merged section survive
        self.assertEqual(config["quadrature"]["tol_singular"], 1e-4)

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            load_config(os.path.join(self.temp_dir.name, "absent.json"))

    def test_invalid_json(self):
        with open(self.path, "w") as f:
            f.write("{not json")
        with self.assertRaises(ConfigError):
            load_config(self.path)

    def test_top_level_must_be_object(self):
        self._write([1, 2, 3])
        with self.assertRaises(ConfigError):
            load_config(self.path)

    def test_environment_path(self):
        self._write({"p": 1.25})
        with patch.dict(os.environ, {"FEFFCHECK_CONFIG": self.path}):
            self.assertEqual(get_config_path(), self.path)
            self.assertEqual(load_config()["p"], 1.25)

    def test_explicit_path_wins(self):
        with patch.dict(os.environ, {"FEFFCHECK_CONFIG": "/nonexistent.json"}):
            self.assertEqual(get_config_path(self.path), self.path)


class TestOverrides(unittest.TestCase):
    """Command-line overrides and refinement."""

    def test_merge_replaces_scalars_and_updates_sections(self):
        config = {"a": 1, "section": {"x": 1, "y": 2}}
        merge_config(config, {"a": 5, "section": {"y": 3}})
        self.assertEqual(config, {"a": 5, "section": {"x": 1, "y": 3}})

    def test_apply_overrides_copies(self):
        base = default_config()
        config = apply_overrides(base, n=4, tol=1e-5)
        self.assertEqual(config["dimension"], 4)
        self.assertEqual(config["quadrature"]["tol_smooth"], 1e-5)
        self.assertEqual(config["quadrature"]["tol_singular"], 1e-5)
        self.assertEqual(base["dimension"], 3)

    def test_refine_config(self):
        base = default_config()
        config = refine_config(base, 2)
        self.assertEqual(config["growth"]["r_count"], 49)
        self.assertEqual(config["bmo"]["radii"], 24)
        self.assertAlmostEqual(config["quadrature"]["tol_smooth"], 5e-7)

    def test_refine_by_one_is_identity(self):
        base = default_config()
        self.assertEqual(refine_config(base, 1), base)


class TestValidateConfig(unittest.TestCase):
    """Rejected configurations name the failing key."""

    def _expect_key(self, config, key):
        with self.assertRaises(ConfigError) as cm:
            validate_config(config)
        self.assertEqual(cm.exception.key, key)

    def test_empty_catalog(self):
        config = default_config()
        config["inequalities"]["catalog"]["powers"] = []
        self._expect_key(config, "inequalities.catalog.powers")

    def test_bad_dimension(self):
        config = default_config()
        config["dimension"] = 0
        self._expect_key(config, "dimension")

    def test_bad_tolerance(self):
        config = default_config()
        config["quadrature"]["tol_singular"] = 2.0
        self._expect_key(config, "quadrature.tol_singular")

    def test_increasing_deltas(self):
        config = default_config()
        config["counterexample"]["deltas"] = [0.1, 0.2]
        self._expect_key(config, "counterexample.deltas")

    def test_mass_radii_inside_unit_ball(self):
        config = default_config()
        config["counterexample"]["mass_radii"] = [0.5, 1.5]
        self._expect_key(config, "counterexample.mass_radii")

    def test_missing_field(self):
        config = default_config()
        del config["fields"]["V"]
        self._expect_key(config, "fields.V")

    def test_unknown_construction(self):
        config = default_config()
        config["maximal"]["construction"] = "magic"
        self._expect_key(config, "maximal.construction")


if __name__ == '__main__':
    unittest.main()
