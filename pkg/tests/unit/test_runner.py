#!/usr/bin/env python3
"""
Tests for the test runner script.
"""
import io
import os
import sys
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '../..'))
sys.path.insert(0, ROOT)

import run_tests


class TestRunner(unittest.TestCase):
    """Module discovery and coverage measurement."""

    def _quiet(self, func, *args, **kwargs):
        with redirect_stdout(io.StringIO()), redirect_stderr(io.StringIO()):
            return func(*args, **kwargs)

    def test_discover_filters_by_pattern(self):
        modules = self._quiet(run_tests.discover_modules, ROOT, ['unit'], 'stummel')
        self.assertEqual(modules, ['tests.unit.test_stummel'])

    def test_coverage_wraps_the_run(self):
        fake = mock.MagicMock()
        with mock.patch.dict(sys.modules, {'coverage': fake}):
            code = self._quiet(run_tests.run_tests, categories=['unit'],
                               pattern='no_module_has_this_name', with_coverage=True)
        self.assertEqual(code, 0)
        fake.Coverage.assert_called_once_with(source=['feffcheck_cli'])
        cov = fake.Coverage.return_value
        cov.start.assert_called_once()
        cov.stop.assert_called_once()
        cov.save.assert_called_once()
        cov.report.assert_called_once()

    def test_no_coverage_by_default(self):
        fake = mock.MagicMock()
        with mock.patch.dict(sys.modules, {'coverage': fake}):
            self._quiet(run_tests.run_tests, categories=['unit'], pattern='no_module_has_this_name')
        fake.Coverage.assert_not_called()


if __name__ == '__main__':
    unittest.main()
