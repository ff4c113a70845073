#!/usr/bin/env python3
"""
Test runner script for feffcheck tests.

Runs the unit, integration and functional suites, or any subset of them.
The numerical suites are slow in the quadrature-heavy modules; use -k to
run only the test modules whose name contains a substring.
"""
import os
import sys
import unittest
import argparse

CATEGORIES = ('unit', 'integration', 'functional')


def discover_modules(script_dir, categories, pattern=None):
    """
    Collect dotted test module names for the given categories.

    Args:
        script_dir: Project root
        categories: Category directories under tests/
        pattern: Optional substring a module name must contain

    Returns:
        Sorted list of module names
    """
    modules = []
    for category in categories:
        category_dir = os.path.join(script_dir, 'tests', category)
        if not os.path.exists(category_dir):
            print(f"Warning: Test directory for {category} not found.")
            continue
        print(f"Discovering tests in {category}...")
        for root, _, files in os.walk(category_dir):
            for file in files:
                if not (file.startswith('test_') and file.endswith('.py')):
                    continue
                if pattern and pattern not in file:
                    continue
                rel_path = os.path.relpath(os.path.join(root, file), script_dir)
                modules.append(os.path.splitext(rel_path)[0].replace(os.path.sep, '.'))
    return sorted(modules)


def run_tests(categories=None, verbose=False, pattern=None, threads=None, with_coverage=False):
    """
    Run the specified test categories.

    Args:
        categories: Subset of CATEGORIES; all of them when empty
        verbose: Whether to show verbose output
        pattern: Only run modules whose file name contains this substring
        threads: Worker cap exported as HG_THREADS for the run
        with_coverage: Measure line coverage of feffcheck_cli and print a report

    Returns:
        Process exit code
    """
    script_dir = os.path.dirname(os.path.abspath(__file__))
    sys.path.insert(0, script_dir)
    if threads is not None:
        os.environ['HG_THREADS'] = str(threads)

    cov = None
    if with_coverage:
        import coverage
        cov = coverage.Coverage(source=['feffcheck_cli'])
        cov.start()

    suite = unittest.TestSuite()
    loader = unittest.TestLoader()
    failed_imports = 0
    for module_name in discover_modules(script_dir, categories or CATEGORIES, pattern):
        try:
            print(f"Loading tests from {module_name}")
            module = __import__(module_name, fromlist=['*'])
            suite.addTest(loader.loadTestsFromModule(module))
        except ImportError as e:
            print(f"Error importing {module_name}: {e}")
            failed_imports += 1

    result = unittest.TextTestRunner(verbosity=2 if verbose else 1).run(suite)
    if cov is not None:
        cov.stop()
        cov.save()
        cov.report()
    if failed_imports:
        print(f"{failed_imports} test module(s) could not be imported")
    return 0 if result.wasSuccessful() and not failed_imports else 1


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description='Run feffcheck tests')
    parser.add_argument('-u', '--unit', action='store_true', help='Run unit tests')
    parser.add_argument('-i', '--integration', action='store_true', help='Run integration tests')
    parser.add_argument('-f', '--functional', action='store_true', help='Run functional tests')
    parser.add_argument('-k', '--pattern', type=str, default=None,
                        help='Only run test modules whose file name contains this text')
    parser.add_argument('-j', '--threads', type=int, default=None,
                        help='Worker cap for quadrature grids (sets HG_THREADS)')
    parser.add_argument('-v', '--verbose', action='store_true', help='Verbose output')
    parser.add_argument('--coverage', action='store_true',
                        help='Measure coverage of feffcheck_cli and print a report')

    args = parser.parse_args()

    categories = [name for name, flag in (('unit', args.unit), ('integration', args.integration),
                                          ('functional', args.functional)) if flag]

    sys.exit(run_tests(categories=categories, verbose=args.verbose, pattern=args.pattern,
                       threads=args.threads, with_coverage=args.coverage))
