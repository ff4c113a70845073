"""
Functional tests for feffcheck.

These tests drive the command layer the way a user would and inspect
the exit codes and the written reports.
"""
