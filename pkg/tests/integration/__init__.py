"""
Integration tests for feffcheck.

These tests run the counterexample checks, which combine fields,
quadrature, moduli, vanishing curves and BMO sampling.
"""
