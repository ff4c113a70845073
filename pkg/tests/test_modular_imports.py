#!/usr/bin/env python3
"""
Import smoke test for every feffcheck module.
"""

import importlib
import os
import sys
import unittest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

MODULES = [
    "feffcheck_cli",
    "feffcheck_cli.__main__",
    "feffcheck_cli.commands.handler",
    "feffcheck_cli.config.constants",
    "feffcheck_cli.config.settings",
    "feffcheck_cli.core.errors",
    "feffcheck_cli.core.fields",
    "feffcheck_cli.core.fitting",
    "feffcheck_cli.core.quadrature",
    "feffcheck_cli.core.growth",
    "feffcheck_cli.core.stummel",
    "feffcheck_cli.core.maximal_bmo",
    "feffcheck_cli.core.inequalities",
    "feffcheck_cli.core.counterexample",
    "feffcheck_cli.ui.display",
    "feffcheck_cli.utils.env_loader",
    "feffcheck_cli.utils.parallel",
    "feffcheck_cli.utils.reports",
]


class TestModularImports(unittest.TestCase):
    """Every module imports and the command table is complete."""

    def test_every_module_imports(self):
        for name in MODULES:
            with self.subTest(module=name):
                self.assertIsNotNone(importlib.import_module(name))

    def test_package_reports_version(self):
        import feffcheck_cli
        self.assertTrue(feffcheck_cli.__version__)

    def test_every_subcommand_has_a_handler(self):
        from feffcheck_cli.commands.handler import COMMANDS
        from feffcheck_cli.config.constants import SUBCOMMANDS
        self.assertEqual(set(COMMANDS), set(SUBCOMMANDS))


if __name__ == "__main__":
    unittest.main()
