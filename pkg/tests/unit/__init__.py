"""
Unit tests for feffcheck.

These tests check individual modules in isolation, mostly against
closed-form integrals of radial powers and bumps.
"""
