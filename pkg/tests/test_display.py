#!/usr/bin/env python3
"""
Tests for UI display functionality.
"""

import io
import unittest
import os
import sys
from unittest.mock import patch

import pyfiglet

# Add parent directory to path so we can import modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from feffcheck_cli.ui.display import (
    Colors, format_value, print_banner, print_error, print_summary, status, table_lines
)


class TestDisplayFunctions(unittest.TestCase):
    """Test the display functions in the UI module."""

    def tearDown(self):
        Colors.reset_to_defaults()

    def test_print_summary(self):
        """Labels, values and artifacts all reach the stream."""
        stream = io.StringIO()
        print_summary("morrey-norm", [("norm", 6.5481, "pass"), ("infinite", False, "info")],
                      artifacts=["out/morrey-norm.json"], stream=stream)
        output = stream.getvalue()
        self.assertIn("morrey-norm", output)
        self.assertIn("6.5481", output)
        self.assertIn("no", output)
        self.assertIn("out/morrey-norm.json", output)
        self.assertIn(Colors.GREEN, output)

    def test_print_summary_without_colors(self):
        Colors.disable()
        stream = io.StringIO()
        print_summary("stummel", [("membership", "InS", "pass")], stream=stream)
        self.assertNotIn("\033[", stream.getvalue())

    @patch('builtins.print')
    def test_print_error(self, mock_print):
        print_error("bad key")
        mock_print.assert_called_once()
        self.assertIn("Error: bad key", mock_print.call_args[0][0])

    def test_banner(self):
        stream = io.StringIO()
        print_banner(stream=stream)
        self.assertTrue(stream.getvalue().strip())

    @patch('feffcheck_cli.ui.display.pyfiglet.figlet_format', side_effect=pyfiglet.FontNotFound("nope"))
    def test_banner_unknown_font(self, _):
        Colors.disable()
        stream = io.StringIO()
        print_banner(font="nope", stream=stream)
        self.assertEqual(stream.getvalue().strip(), "feffcheck")


class TestStatus(unittest.TestCase):
    """Status mapping and value formatting."""

    def test_status(self):
        self.assertEqual(status(True), "pass")
        self.assertEqual(status(False), "fail")
        self.assertEqual(status(None), "info")
        self.assertEqual(status(True, inconclusive=True), "inconclusive")

    def test_format_value(self):
        self.assertEqual(format_value(True), "yes")
        self.assertEqual(format_value(1.0 / 3.0), "0.333333")
        self.assertEqual(format_value("InS"), "InS")

    def test_table_lines(self):
        rows = [{"alpha": 1.5, "membership": "NotInSTilde", "matches": True},
                {"alpha": 4.0, "membership": "Inconclusive", "matches": None}]
        lines = table_lines(rows, "alpha", "membership", "matches")
        self.assertEqual(lines[0], ("1.5", "NotInSTilde", "pass"))
        self.assertEqual(lines[1][2], "info")

    def test_table_lines_flags_inconclusive_rows(self):
        rows = [{"alpha": 2.0, "membership": "Inconclusive", "matches": True},
                {"alpha": 5.0, "membership": "InS", "matches": False}]
        lines = table_lines(rows, "alpha", "membership", "matches", label_format="alpha={:g}",
                            inconclusive_value="Inconclusive")
        self.assertEqual(lines[0], ("alpha=2", "Inconclusive", "inconclusive"))
        self.assertEqual(lines[1], ("alpha=5", "InS", "fail"))


class TestColors(unittest.TestCase):
    """Test the Colors class."""

    def tearDown(self):
        Colors.reset_to_defaults()

    def test_disable_and_reset(self):
        Colors.disable()
        self.assertEqual(Colors.RED, '')
        self.assertEqual(Colors.END, '')
        Colors.reset_to_defaults()
        self.assertEqual(Colors.RED, '\033[91m')
        self.assertEqual(Colors.END, '\033[0m')


if __name__ == '__main__':
    unittest.main()
