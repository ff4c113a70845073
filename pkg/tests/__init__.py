"""
Test package for feffcheck.

This package contains all tests for feffcheck, organized into:
- unit: Tests for individual modules against closed-form values
- integration: The counterexample checks composed from several modules
- functional: End-to-end runs of the command layer
"""
